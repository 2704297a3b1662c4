#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dispatchsim::csv {

/// 17 significant digits, round-trip exact.
std::string format_double(double x);

std::vector<std::string> split(std::string_view line, char delimiter = ',');
std::string trim(std::string_view s);

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void header(std::initializer_list<std::string_view> columns);
    Writer& field(std::string_view text);
    Writer& field(double value);
    void end_row();

private:
    std::ostream& out_;
    bool first_ = true;
};

/// Opens a file for writing and throws InvalidArgument when that fails.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace dispatchsim::csv
