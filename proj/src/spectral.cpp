#include "dispatchsim/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "dispatchsim/analysis.hpp"
#include "dispatchsim/csv.hpp"
#include "dispatchsim/error.hpp"

namespace dispatchsim {
namespace {

constexpr double kCostLow = 1e-5;  // rad/s, lowest frequency J must see
constexpr int kPointsPerDecade = 200;

std::vector<double> demeaned(const Signal& x) {
    const double m = mean(x.values());
    std::vector<double> v(x.values());
    for (auto& e : v) e -= m;
    return v;
}

double variance_of(std::span<const double> v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// 0 followed by log-spaced points up to nyquist.
std::vector<double> ar_grid(double nyquist) {
    const double lo = std::min(1e-6, nyquist * 1e-4);
    const double decades = std::log10(nyquist / lo);
    const auto n = static_cast<std::size_t>(std::ceil(decades * kPointsPerDecade)) + 1;
    std::vector<double> w{0.0};
    for (std::size_t i = 0; i < n; ++i) {
        w.push_back(lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    w.back() = nyquist;
    return w;
}

PsdEstimate ar_psd(const Signal& x, std::size_t order) {
    if (order == 0) throw Error(ErrorCode::InvalidArgument, "AR order must be positive");
    if (x.size() < 32 * order) throw Error(ErrorCode::TooShort, "AR fit needs at least 32 samples per coefficient");
    const std::vector<double> v = demeaned(x);
    const std::size_t n = v.size();

    std::vector<double> r(order + 1, 0.0);
    for (std::size_t k = 0; k <= order; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) s += v[t] * v[t + k];
        r[k] = s / static_cast<double>(n);
    }
    if (!(r[0] > 0.0)) throw Error(ErrorCode::IllConditioned, "signal has zero variance");

    // Levinson-Durbin for x_t = sum a_k x_{t-k} + e_t.
    std::vector<double> a(order + 1, 0.0);
    double err = r[0];
    for (std::size_t m = 1; m <= order; ++m) {
        double acc = r[m];
        for (std::size_t k = 1; k < m; ++k) acc -= a[k] * r[m - k];
        const double kappa = acc / err;
        if (!(std::abs(kappa) < 1.0)) throw Error(ErrorCode::IllConditioned, "autocorrelation matrix is singular");
        std::vector<double> prev(a);
        a[m] = kappa;
        for (std::size_t k = 1; k < m; ++k) a[k] = prev[k] - kappa * prev[m - k];
        err *= 1.0 - kappa * kappa;
        if (!(err > 1e-14 * r[0])) throw Error(ErrorCode::IllConditioned, "autocorrelation matrix is singular");
    }

    PsdEstimate p;
    p.method = PsdMethodSpec::ar(order);
    p.nyquist = std::numbers::pi / x.dt();
    p.variance = r[0];
    p.omegas = ar_grid(p.nyquist);
    p.density.reserve(p.omegas.size());
    for (double w : p.omegas) {
        Complex A = 1.0;
        for (std::size_t k = 1; k <= order; ++k) A -= a[k] * std::polar(1.0, -w * x.dt() * static_cast<double>(k));
        p.density.push_back(err * x.dt() / (std::numbers::pi * std::norm(A)));
    }
    return p;
}

PsdEstimate welch_psd(const Signal& x, std::size_t segment, std::size_t overlap) {
    if (segment < 8 || overlap >= segment) throw Error(ErrorCode::InvalidArgument, "need segment >= 8 and overlap < segment");
    const std::size_t step = segment - overlap;
    if (x.size() < segment || (x.size() - segment) / step + 1 < 4) {
        throw Error(ErrorCode::TooShort, "Welch estimate needs at least 4 segments");
    }
    const std::vector<double> v = demeaned(x);
    const std::size_t segments = (v.size() - segment) / step + 1;

    std::vector<double> window(segment);
    double u = 0.0;
    for (std::size_t i = 0; i < segment; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(segment));
        u += window[i] * window[i];
    }

    const std::size_t bins = segment / 2 + 1;
    std::vector<double> acc(bins, 0.0);
    Eigen::FFT<double> fft;
    std::vector<double> buf(segment);
    std::vector<Complex> spec;
    for (std::size_t s = 0; s < segments; ++s) {
        for (std::size_t i = 0; i < segment; ++i) buf[i] = window[i] * v[s * step + i];
        fft.fwd(spec, buf);
        for (std::size_t k = 0; k < bins; ++k) acc[k] += std::norm(spec[k]);
    }

    PsdEstimate p;
    p.method = PsdMethodSpec::welch(segment, overlap);
    p.nyquist = std::numbers::pi / x.dt();
    p.variance = variance_of(v);
    const double scale = x.dt() / (2.0 * std::numbers::pi * u * static_cast<double>(segments));
    for (std::size_t k = 0; k < bins; ++k) {
        const bool edge = k == 0 || (segment % 2 == 0 && k == bins - 1);
        p.omegas.push_back(2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(segment) * x.dt()));
        p.density.push_back(acc[k] * scale * (edge ? 1.0 : 2.0));
    }
    p.omegas.back() = std::min(p.omegas.back(), p.nyquist);
    return p;
}

std::string design_name(const SystemConfig& cfg) {
    return cfg.tcls.ideal ? "ideal-tcl" : to_string(cfg.tcls.prefilter.kind);
}

}  // namespace

double PsdEstimate::at(double omega) const {
    if (omegas.empty() || omega < omegas.front() || omega > omegas.back()) return 0.0;
    const auto it = std::upper_bound(omegas.begin(), omegas.end(), omega);
    if (it == omegas.end()) return density.back();
    const auto i = static_cast<std::size_t>(it - omegas.begin());
    const double w0 = omegas[i - 1];
    const double w1 = omegas[i];
    const double t = (omega - w0) / (w1 - w0);
    return density[i - 1] + t * (density[i] - density[i - 1]);
}

PsdEstimate estimate_psd(const Signal& x, const PsdMethodSpec& method) {
    return method.kind == PsdMethodSpec::Kind::AR ? ar_psd(x, method.ar_order)
                                                  : welch_psd(x, method.segment, method.overlap);
}

double mean_square_cost(const PsdEstimate& P_D, const TransferFunction& tf) {
    if (P_D.omegas.size() < 2 || P_D.omegas.size() != P_D.density.size()) {
        throw Error(ErrorCode::InvalidArgument, "malformed PSD estimate");
    }
    if (P_D.omegas.front() > kCostLow || P_D.omegas.back() < P_D.nyquist * (1.0 - 1e-12)) {
        throw Error(ErrorCode::DomainMismatch, "PSD grid does not cover [1e-5, nyquist]");
    }
    if (tf.is_zero()) return 0.0;
    if (is_stable(tf) != StabilityVerdict::Stable) throw Error(ErrorCode::UnstableSystem, "J is undefined for an unstable system");

    // Union of the PSD grid and a dense log grid resolving |tf| peaks.
    std::vector<double> grid(P_D.omegas);
    const double lo = std::max(P_D.omegas.front() > 0.0 ? P_D.omegas.front() : P_D.omegas[1], 1e-9);
    const double hi = P_D.omegas.back();
    const double decades = std::log10(hi / lo);
    const auto n = static_cast<std::size_t>(std::ceil(decades * kPointsPerDecade)) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        grid.push_back(lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    while (!grid.empty() && grid.back() > hi) grid.pop_back();

    double total = 0.0;
    double prev_w = grid.front();
    double prev_f = P_D.at(prev_w) * std::norm(tf.at(prev_w));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double w = grid[i];
        const double f = P_D.at(w) * std::norm(tf.at(w));
        total += 0.5 * (f + prev_f) * (w - prev_w);
        prev_w = w;
        prev_f = f;
    }
    return std::sqrt(total);
}

std::vector<CostCell> cost_sweep(const SystemConfig& cfg_base, std::span<const double> rho_grid,
                                 std::span<const double> omega_co_grid, const PsdEstimate& P_D, unsigned workers) {
    std::vector<CostCell> cells;
    for (double w : omega_co_grid) {
        for (double r : rho_grid) cells.push_back({design_name(cfg_base), r, w, std::numeric_limits<double>::quiet_NaN(), false});
    }

    auto evaluate = [&](CostCell& c) {
        SystemConfig cfg = cfg_base;
        cfg.rho = c.rho;
        cfg.omega_co = c.omega_co;
        try {
            const LoopAnalysis a = analyze_loop(cfg);
            if (a.verdict != StabilityVerdict::Stable) return;
            c.J = mean_square_cost(P_D, a.UaOverD);
            c.stable = true;
        } catch (const Error&) {
            // Cells that cannot be built or evaluated stay flagged.
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) evaluate(cells[i]);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    return cells;
}

void write_sweep_csv(std::ostream& out, std::span<const CostCell> cells) {
    csv::Writer w(out);
    w.header({"design", "rho", "omega_co_rad_s", "J_MW", "stable"});
    for (const auto& c : cells) {
        w.field(c.design).field(c.rho).field(c.omega_co).field(c.J).field(c.stable ? "true" : "false").end_row();
    }
}

void write_psd_csv(std::ostream& out, const PsdEstimate& psd) {
    csv::Writer w(out);
    w.header({"omega_rad_s", "density"});
    for (std::size_t i = 0; i < psd.omegas.size(); ++i) w.field(psd.omegas[i]).field(psd.density[i]).end_row();
}

}  // namespace dispatchsim
