#include "dispatchsim/signal.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <regex>

#include "dispatchsim/csv.hpp"
#include "dispatchsim/error.hpp"

namespace dispatchsim {

Signal::Signal(std::vector<double> values, double dt, double t0) : values_(std::move(values)), dt_(dt), t0_(t0) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw Error(ErrorCode::InvalidArgument, "sample period must be positive");
    if (!std::isfinite(t0_)) throw Error(ErrorCode::InvalidArgument, "start time must be finite");
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "signal values must be finite");
    }
}

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double rms(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc / static_cast<double>(x.size()));
}

double tail_rms(std::span<const double> x, double fraction) {
    const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(x.size())));
    return rms(x.subspan(x.size() - std::min(keep, x.size())));
}

namespace {

// Linear interpolation of (times, values) onto t0 + k*dt.
std::vector<double> interpolate_uniform(const std::vector<double>& times, const std::vector<double>& values,
                                        double dt) {
    const double t0 = times.front();
    const double span = times.back() - t0;
    const auto n = static_cast<std::size_t>(std::floor(span / dt * (1.0 + 1e-12))) + 1;
    std::vector<double> out(n);
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        while (j + 1 < times.size() && times[j + 1] <= t) ++j;
        if (j + 1 >= times.size() || std::abs(t - times[j]) <= 1e-9 * dt) {
            out[k] = values[j];
            continue;
        }
        const double w = (t - times[j]) / (times[j + 1] - times[j]);
        out[k] = values[j] + w * (values[j + 1] - values[j]);
    }
    return out;
}

bool parse_number(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

double civil_seconds(int y, unsigned mo, unsigned d, int h, int mi, double sec) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0.0 || sec >= 61.0) {
        throw Error(ErrorCode::ParseError, "invalid calendar timestamp");
    }
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec;
}

}  // namespace

Signal resample(const Signal& x, double dt) {
    if (x.size() < 2) return Signal(x.values(), dt, x.t0());
    std::vector<double> times(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) times[k] = x.time(k);
    return Signal(interpolate_uniform(times, x.values(), dt), dt, x.t0());
}

double parse_timestamp(const std::string& text) {
    double seconds = 0.0;
    if (parse_number(text, seconds)) return seconds;

    static const std::regex iso(
        R"(^(\d{4})-(\d{1,2})-(\d{1,2})(?:[T ](\d{1,2}):(\d{2})(?::(\d{2}(?:\.\d*)?))?)?\s*(Z|[+-]00:?00)?$)");
    static const std::regex us(R"(^(\d{1,2})/(\d{1,2})/(\d{4})(?:\s+(\d{1,2}):(\d{2})(?::(\d{2}(?:\.\d*)?))?)?$)");
    std::smatch m;
    auto field = [&](int i) { return m[i].matched ? std::stoi(m[i].str()) : 0; };
    auto secs = [&](int i) { return m[i].matched ? std::stod(m[i].str()) : 0.0; };
    if (std::regex_match(text, m, iso)) {
        return civil_seconds(field(1), static_cast<unsigned>(field(2)), static_cast<unsigned>(field(3)), field(4),
                             field(5), secs(6));
    }
    if (std::regex_match(text, m, us)) {
        return civil_seconds(field(3), static_cast<unsigned>(field(1)), static_cast<unsigned>(field(2)), field(4),
                             field(5), secs(6));
    }
    throw Error(ErrorCode::ParseError, "unrecognized timestamp '" + text + "'");
}

Signal read_signal_csv(std::istream& in, const ColumnSpec& spec) {
    if (!(spec.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "target sample period must be positive");

    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool columns_resolved = false;
    std::size_t time_idx = 0;
    std::size_t value_idx = 0;

    auto index_of = [](const std::string& name, const std::vector<std::string>* header) -> std::size_t {
        std::size_t idx = 0;
        const char* first = name.data();
        auto [ptr, ec] = std::from_chars(first, first + name.size(), idx);
        if (ec == std::errc() && ptr == first + name.size()) return idx;
        if (header != nullptr) {
            auto it = std::find(header->begin(), header->end(), name);
            if (it != header->end()) return static_cast<std::size_t>(it - header->begin());
        }
        throw Error(ErrorCode::ParseError, "column '" + name + "' not found");
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty() || line.front() == '#') continue;
        const auto fields = csv::split(line, spec.delimiter);
        if (!columns_resolved) {
            columns_resolved = true;
            const std::size_t vi = index_of(spec.value_column, &fields);
            double probe = 0.0;
            const bool is_header = vi >= fields.size() || !parse_number(fields[vi], probe);
            time_idx = index_of(spec.time_column, is_header ? &fields : nullptr);
            value_idx = index_of(spec.value_column, is_header ? &fields : nullptr);
            if (is_header) continue;
        }
        if (time_idx >= fields.size() || value_idx >= fields.size()) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": missing column");
        }
        double v = 0.0;
        if (!parse_number(fields[value_idx], v) || !std::isfinite(v)) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad value '" +
                                                   fields[value_idx] + "'");
        }
        const double t = parse_timestamp(fields[time_idx]);
        if (!times.empty()) {
            if (!(t > times.back())) {
                throw Error(ErrorCode::NonMonotoneTime, "line " + std::to_string(line_no) + ": time does not increase");
            }
            if (t - times.back() > spec.max_gap_factor * spec.dt * (1.0 + 1e-12)) {
                throw Error(ErrorCode::GapTooLarge, "line " + std::to_string(line_no) + ": gap exceeds limit");
            }
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (times.empty()) throw Error(ErrorCode::ParseError, "no data rows");
    return Signal(interpolate_uniform(times, values, spec.dt), spec.dt, times.front());
}

Signal ingest_csv(const std::filesystem::path& path, const ColumnSpec& spec) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    return read_signal_csv(in, spec);
}

void write_signal_csv(std::ostream& out, const Signal& x) {
    csv::Writer w(out);
    w.header({"t_seconds", "value_mw"});
    for (std::size_t k = 0; k < x.size(); ++k) {
        w.field(x.time(k)).field(x[k]);
        w.end_row();
    }
}

void write_signal_csv(const std::filesystem::path& path, const Signal& x) {
    auto out = csv::open_output(path);
    write_signal_csv(out, x);
}

Signal synthetic_reserves(std::size_t samples, std::uint64_t seed, const SyntheticReserveParams& p) {
    if (!(p.omega_n > 0.0) || !(p.zeta > 0.0) || p.zeta >= 1.0 || !(p.dt > 0.0) || !(p.std_mw >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "synthetic reserve parameters out of range");
    }
    const double r = std::exp(-p.zeta * p.omega_n * p.dt);
    const double theta = p.omega_n * p.dt * std::sqrt(1.0 - p.zeta * p.zeta);
    const double phi1 = 2.0 * r * std::cos(theta);
    const double phi2 = -r * r;
    // Stationary variance of the AR(2) recursion under unit innovations.
    const double gamma0 = (1.0 - phi2) / ((1.0 + phi2) * ((1.0 - phi2) * (1.0 - phi2) - phi1 * phi1));
    const double sigma = p.std_mw / std::sqrt(gamma0);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    constexpr std::size_t burn_in = 1000;
    std::vector<double> x(samples);
    double x1 = 0.0;
    double x2 = 0.0;
    for (std::size_t k = 0; k < samples + burn_in; ++k) {
        const double next = phi1 * x1 + phi2 * x2 + noise(rng);
        x2 = x1;
        x1 = next;
        if (k >= burn_in) x[k - burn_in] = next;
    }
    return Signal(std::move(x), p.dt);
}

}  // namespace dispatchsim
