#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dispatchsim {

/// Uniformly sampled real time series in MW.
class Signal {
public:
    Signal(std::vector<double> values, double dt, double t0 = 0.0);

    const std::vector<double>& values() const noexcept { return values_; }
    double dt() const noexcept { return dt_; }
    double t0() const noexcept { return t0_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
    double duration() const noexcept { return values_.empty() ? 0.0 : time(values_.size() - 1) - t0_; }

private:
    std::vector<double> values_;
    double dt_;
    double t0_;
};

double mean(std::span<const double> x);
double rms(std::span<const double> x);
/// RMS over the trailing `fraction` of the samples.
double tail_rms(std::span<const double> x, double fraction);

/// Linear interpolation onto a grid of spacing dt covering the same span.
Signal resample(const Signal& x, double dt);

/// Which columns of a delimited file hold time and value. A column is named
/// either by its header text or by a zero-based index. Times may be ISO-8601
/// (`2015-06-06T00:05:00`, optional fractional seconds and `Z`),
/// `M/D/YYYY H:MM[:SS]`, or plain seconds.
struct ColumnSpec {
    std::string time_column = "0";
    std::string value_column = "1";
    char delimiter = ',';
    double dt = 300.0;          // target sample period, seconds
    double max_gap_factor = 3.0;  // gaps longer than this many dt are rejected
};

Signal read_signal_csv(std::istream& in, const ColumnSpec& spec = {});
Signal ingest_csv(const std::filesystem::path& path, const ColumnSpec& spec = {});

/// Header `t_seconds,value_mw`, 17 significant digits.
void write_signal_csv(std::ostream& out, const Signal& x);
void write_signal_csv(const std::filesystem::path& path, const Signal& x);

/// Seconds since the Unix epoch for an ISO-8601 or M/D/YYYY timestamp, or
/// the value itself for a plain number. Throws ParseError.
double parse_timestamp(const std::string& text);

/// Balancing-reserve-like disturbance: an AR(2) process obtained by
/// sampling a continuous second-order resonance, scaled to `std_mw`.
struct SyntheticReserveParams {
    double omega_n = 1.7453292519943295e-3;  // 2*pi/3600 rad/s, hourly schedule
    double zeta = 0.5;
    double std_mw = 300.0;
    double dt = 300.0;
};

Signal synthetic_reserves(std::size_t samples, std::uint64_t seed, const SyntheticReserveParams& params = {});

}  // namespace dispatchsim
