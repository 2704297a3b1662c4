#include "dispatchsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

#include "dispatchsim/csv.hpp"
#include "dispatchsim/error.hpp"

namespace dispatchsim {
namespace {

constexpr double kGridMin = 1e-6;
constexpr double kGridMax = 10.0;
constexpr int kPointsPerDecade = 200;

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    const double decades = std::log10(hi / lo);
    const auto n = static_cast<std::size_t>(std::ceil(decades * per_decade)) + 1;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    w.front() = lo;
    w.back() = hi;
    return w;
}

// Quotient a / b when b divides a up to rounding, otherwise nothing.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
    const int na = a.degree();
    const int nb = b.degree();
    if (nb < 0 || na < nb) return std::nullopt;
    std::vector<double> r = a.coeffs();
    std::vector<double> q(static_cast<std::size_t>(na - nb) + 1, 0.0);
    for (int k = na - nb; k >= 0; --k) {
        const double c = r[static_cast<std::size_t>(k + nb)] / b.leading();
        q[static_cast<std::size_t>(k)] = c;
        for (int j = 0; j <= nb; ++j) r[static_cast<std::size_t>(k + j)] -= c * b[static_cast<std::size_t>(j)];
    }
    double residual = 0.0;
    for (int j = 0; j < nb; ++j) residual = std::max(residual, std::abs(r[static_cast<std::size_t>(j)]));
    if (residual > 1e-9 * a.max_abs_coeff()) return std::nullopt;
    return Polynomial(std::move(q));
}

}  // namespace

PeakGain peak_gain(const TransferFunction& tf) {
    auto mag = [&](double w) { return std::abs(tf.at(w)); };
    std::vector<double> grid = log_grid(kGridMin, kGridMax, kPointsPerDecade);
    PeakGain best{-1.0, grid.front()};
    std::size_t at = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double m = mag(grid[i]);
        if (m > best.value || std::isnan(m)) {
            best = {m, grid[i]};
            at = i;
            if (std::isnan(m)) return best;
        }
    }
    for (int round = 0; round < 3; ++round) {
        const double lo = grid[at == 0 ? 0 : at - 1];
        const double hi = grid[std::min(at + 1, grid.size() - 1)];
        grid = log_grid(lo, hi, static_cast<int>(std::ceil(20.0 / std::log10(hi / lo))));
        at = 0;
        double local = -1.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double m = mag(grid[i]);
            if (m > local) {
                local = m;
                at = i;
            }
            if (m > best.value) best = {m, grid[i]};
        }
    }
    return best;
}

TransferFunction perfect_loop(const SystemConfig& cfg) {
    SystemConfig base = cfg;
    base.fixed_K = true;
    return build_loop(base).L_a;
}

LoopAnalysis analyze_loop(const SystemConfig& cfg) {
    LoopModel m = build_loop(cfg);
    const TransferFunction& Gc = m.G_c;
    const TransferFunction& H = m.actuators.H;
    const TransferFunction& Gp = m.G_p;

    // Closed-loop maps are formed from the block polynomials directly so the
    // compensator's origin pole never appears in their denominators.
    const Polynomial open_den = Gc.den() * H.den() * Gp.den();
    const Polynomial open_num = Gc.num() * H.num() * Gp.num();
    const Polynomial cl = open_den + open_num;
    if (cl.is_zero()) throw Error(ErrorCode::DegenerateLoop, "1 + L is identically zero");

    LoopAnalysis a{.model = m,
                   .L = m.L,
                   .S = {open_den, cl},
                   .YoverD = {Gp.num() * Gc.den() * H.den(), cl},
                   .UoverD = {-(Gc.num() * Gp.num() * H.den()), cl},
                   .UaOverD = {},
                   .closed_loop = find_roots(cl),
                   .verdict = StabilityVerdict::Stable,
                   .max_real_part = 0.0,
                   .M_S = 0.0,
                   .M_a = 0.0,
                   .vector_margin = 0.0,
                   .omega_peak_S = 0.0,
                   .norms_valid = false};

    // U_a/D = P_a G_a U/D. H's denominator contains P_a's and G_a's, so
    // dividing them out keeps the shared factors from being duplicated.
    const TransferFunction& Pa = m.actuators.P_a;
    const TransferFunction& Ga = m.actuators.G_a;
    const Polynomial pa_ga_den = Pa.den() * Ga.den();
    const Polynomial ua_head = Pa.num() * Ga.num() * Gc.num() * Gp.num();
    if (auto rest = divide_exact(H.den(), pa_ga_den)) {
        a.UaOverD = {-(ua_head * *rest), cl};
    } else {
        a.UaOverD = {-(ua_head * H.den()), pa_ga_den * cl};
    }

    a.verdict = classify(a.closed_loop);
    a.max_real_part = a.closed_loop.roots.empty() ? -std::numeric_limits<double>::infinity()
                                                  : a.closed_loop.max_real_part();
    const PeakGain s_peak = peak_gain(a.S);
    a.omega_peak_S = s_peak.omega;
    if (a.verdict == StabilityVerdict::Stable) {
        a.M_S = s_peak.value;
        a.M_a = peak_gain(a.UaOverD).value;
        a.norms_valid = true;
    } else {
        a.M_S = std::numeric_limits<double>::infinity();
        a.M_a = std::numeric_limits<double>::infinity();
    }
    a.vector_margin = 1.0 / a.M_S;
    return a;
}

HeterogeneityCurve heterogeneity_cost(const TransferFunction& L_a, double omega0, double phi_B_deg,
                                      std::span<const double> rho_grid) {
    if (!(omega0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega0 must be positive");
    const Complex la = L_a.at(omega0);
    const Complex gb = std::polar(1.0, phi_B_deg * std::numbers::pi / 180.0);
    constexpr double kSingular = 1e-9;

    HeterogeneityCurve c{{rho_grid.begin(), rho_grid.end()}, {}, {}, omega0, phi_B_deg, 0.0};
    for (double rho : rho_grid) {
        if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1]");
        const Complex h = (1.0 - rho) + rho * gb;
        const Complex one_plus_l = 1.0 + la * h;
        const bool singular = std::abs(one_plus_l) < kSingular;
        c.near_singular.push_back(singular);
        c.k0_values.push_back(singular ? std::numeric_limits<double>::quiet_NaN()
                                       : (1.0 - rho) * std::abs(la / one_plus_l));
    }
    const Complex at_one = 1.0 + la * gb;
    if (std::abs(at_one) < kSingular) throw Error(ErrorCode::NearSingularLoop, "|1 + L(j omega0)| vanishes at rho = 1");
    c.slope_at_1 = -std::abs(la / at_one);
    return c;
}

std::vector<FreqPoint> bode_data(const TransferFunction& tf, double omega_min, double omega_max,
                                 int points_per_decade) {
    if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
        throw Error(ErrorCode::InvalidArgument, "need 0 < omega_min < omega_max");
    }
    if (points_per_decade < 1) throw Error(ErrorCode::InvalidArgument, "points_per_decade must be positive");
    const std::vector<double> grid = log_grid(omega_min, omega_max, points_per_decade);
    return eval_freq(tf, grid);
}

Crossover find_crossover(const TransferFunction& L) {
    auto excess = [&](double w) { return std::abs(L.at(w)) - 1.0; };
    const std::vector<double> grid = log_grid(kGridMin, kGridMax, kPointsPerDecade);
    std::optional<std::size_t> first;
    int crossings = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = excess(grid[i]);
        const double b = excess(grid[i + 1]);
        if (a == 0.0 || (a > 0.0) != (b > 0.0)) {
            ++crossings;
            if (!first) first = i;
        }
    }
    if (!first) throw Error(ErrorCode::NoCrossover, "|L(jw)| does not cross 1 in [1e-6, 10] rad/s");

    double lo = grid[*first];
    double hi = grid[*first + 1];
    const bool lo_above = excess(lo) > 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double e = excess(mid);
        if (std::abs(e) <= 1e-12 || hi / lo - 1.0 < 1e-15) {
            lo = hi = mid;
            break;
        }
        if ((e > 0.0) == lo_above) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {std::sqrt(lo * hi), crossings > 1};
}

void write_bode_csv(std::ostream& out, std::span<const FreqPoint> points) {
    csv::Writer w(out);
    w.header({"omega_rad_s", "magnitude_db", "phase_deg"});
    for (const auto& p : points) {
        w.field(p.omega).field(p.magnitude_db).field(p.phase_deg).end_row();
    }
}

void write_heterogeneity_csv(std::ostream& out, std::span<const HeterogeneityCurve> curves) {
    csv::Writer w(out);
    w.header({"phi_b_deg", "rho", "k0"});
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.rho_grid.size(); ++i) {
            w.field(c.phi_B).field(c.rho_grid[i]).field(c.k0_values[i]).end_row();
        }
    }
}

}  // namespace dispatchsim
