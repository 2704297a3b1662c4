#include "dispatchsim/csv.hpp"

#include <fmt/format.h>

#include <cmath>

#include "dispatchsim/error.hpp"

namespace dispatchsim::csv {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", x);
}

std::vector<std::string> split(std::string_view line, char delimiter) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.emplace_back(trim(line.substr(start)));
            break;
        }
        fields.emplace_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\"");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\"");
    return std::string(s.substr(first, last - first + 1));
}

void Writer::header(std::initializer_list<std::string_view> columns) {
    for (auto c : columns) field(c);
    end_row();
}

Writer& Writer::field(std::string_view text) {
    if (!first_) out_ << ',';
    out_ << text;
    first_ = false;
    return *this;
}

Writer& Writer::field(double value) { return field(format_double(value)); }

void Writer::end_row() {
    out_ << '\n';
    first_ = true;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + path.string());
    return out;
}

}  // namespace dispatchsim::csv
