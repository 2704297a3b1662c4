// Acceptance checks: one PASS/FAIL line per criterion.
#include <CLI11.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "dispatchsim/analysis.hpp"
#include "dispatchsim/config.hpp"
#include "dispatchsim/filters.hpp"
#include "dispatchsim/simulate.hpp"
#include "dispatchsim/spectral.hpp"
#include "support.hpp"

using namespace dispatchsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

const fs::path kScenarios = DISPATCHSIM_SCENARIO_DIR;

Scenario scenario(const char* name) { return load_scenario(kScenarios / name); }

double round_to(double x, int decimals) {
    const double f = std::pow(10.0, decimals);
    return std::round(x * f) / f;
}

double round_sig(double x, int digits) {
    const int e = static_cast<int>(std::floor(std::log10(std::abs(x))));
    return round_to(x, digits - 1 - e);
}

Outcome c01() {
    const TransferFunction g = ercot_grid();
    const double wn = std::sqrt(g.den()[0]);
    const double zeta = g.den()[1] / (2.0 * wn);
    const bool ok = round_to(wn, 4) == 0.3834 && round_to(zeta, 4) == 0.6256;
    return {ok, fmt::format("omega_n={:.6f} zeta={:.6f}", wn, zeta)};
}

Outcome c02() {
    const Polynomial d = butterworth2_lowpass({0.0004, std::numbers::sqrt2 / 2.0}).den();
    const bool ok = round_sig(d[0], 2) == 1.6e-7 && round_sig(d[1], 4) == 0.0005657 && d[2] == 1.0;
    return {ok, fmt::format("den=({:.6g}, {:.6g}, {:g})", d[0], d[1], d[2])};
}

Outcome c03() {
    double worst = 0.0;
    int count = 0;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(kScenarios)) {
        if (e.path().extension() == ".cfg") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const Scenario s = load_scenario(f);
        const double m = std::abs(loop_tf(s.system).at(0.05));
        worst = std::max(worst, std::abs(m - 1.0));
        ++count;
    }
    return {count > 0 && worst <= 1e-9, fmt::format("{} presets, max | |L(j0.05)| - 1 | = {:.3g}", count, worst)};
}

Outcome c04() {
    struct Want {
        Design design;
        double omega_co;
        StabilityVerdict verdict;
    };
    const std::vector<Want> wants{
        {Design::None, 0.002, StabilityVerdict::Stable},   {Design::None, 0.004, StabilityVerdict::Unstable},
        {Design::None, 0.007, StabilityVerdict::Unstable}, {Design::Lead, 0.003, StabilityVerdict::Stable},
        {Design::Lead, 0.005, StabilityVerdict::Stable},   {Design::Lead, 0.009, StabilityVerdict::Unstable},
        {Design::Lead, 0.013, StabilityVerdict::Unstable}, {Design::Inverse, 0.013, StabilityVerdict::Stable},
    };
    std::string bad;
    for (const auto& w : wants) {
        const std::vector<double> grid{w.omega_co};
        const MarginRow row = stability_boundary({}, w.design, grid).front();
        if (row.verdict != w.verdict) {
            bad += fmt::format(" {}@{}={}", to_string(w.design), w.omega_co, to_string(row.verdict));
        }
    }
    return {bad.empty(), bad.empty() ? "all 8 verdicts match" : "mismatch:" + bad};
}

Outcome c05() {
    const Scenario s = scenario("heterogeneity.cfg");
    const TransferFunction la = perfect_loop(s.system);
    const auto& grid = s.rho_grid;
    bool ok = true;
    std::string detail = fmt::format("omega0={}", s.omega0);

    const HeterogeneityCurve flat = heterogeneity_cost(la, s.omega0, 0.0, grid);
    const double k0 = flat.k0_values.front();
    double dev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        dev = std::max(dev, std::abs(flat.k0_values[i] - (1.0 - grid[i]) * k0) / k0);
    }
    ok = ok && dev <= 1e-9;
    detail += fmt::format(" chord_dev={:.2g}", dev);

    for (double phi : s.phi_b_deg) {
        const HeterogeneityCurve c = heterogeneity_cost(la, s.omega0, phi, grid);
        ok = ok && c.k0_values.back() == 0.0;
        const double h = 1e-4;
        const std::vector<double> pts{1.0 - h, 1.0};
        const HeterogeneityCurve near = heterogeneity_cost(la, s.omega0, phi, pts);
        const double fd = (near.k0_values[1] - near.k0_values[0]) / h;
        const double slope_err = std::abs(fd - c.slope_at_1) / std::abs(c.slope_at_1);
        ok = ok && slope_err <= 1e-3;
        if (phi == 135.0 || phi == 180.0) {
            const auto at = std::max_element(c.k0_values.begin(), c.k0_values.end()) - c.k0_values.begin();
            const double arg = grid[static_cast<std::size_t>(at)];
            ok = ok && arg >= 0.4 && arg <= 0.6;
            detail += fmt::format(" argmax({})={:.2f}", phi, arg);
        }
    }
    return {ok, detail};
}

Outcome c06() {
    const Scenario s = scenario("lead.cfg");
    const PsdEstimate psd =
        estimate_psd(synthetic_reserves(s.synthetic_samples, *s.seed, s.synthetic), PsdMethodSpec::ar(s.ar_order));

    const auto lead = cost_sweep(s.system, s.rho_grid, s.omega_co_grid, psd);
    const CostCell* best = nullptr;
    for (const auto& c : lead) {
        if (c.stable && (best == nullptr || c.J < best->J)) best = &c;
    }
    const bool a = best != nullptr && best->rho == 1.0 && best->omega_co == 0.003;

    const std::vector<double> w13{0.013};
    SystemConfig inv = inverse_preset();
    SystemConfig ideal = ideal_tcl_preset();
    const auto ci = cost_sweep(inv, s.rho_grid, w13, psd);
    const auto cd = cost_sweep(ideal, s.rho_grid, w13, psd);
    double worst = 0.0;
    bool b = true;
    for (std::size_t i = 0; i < ci.size(); ++i) {
        const double r = std::abs(ci[i].J / cd[i].J - 1.0);
        if (!(r <= 0.10)) b = false;
        worst = std::max(worst, std::isfinite(r) ? r : 1e300);
    }
    std::string detail = best == nullptr ? "no stable lead cell"
                                         : fmt::format("lead argmin (rho={}, omega_co={}) J={:.4g}", best->rho,
                                                       best->omega_co, best->J);
    if (best != nullptr && !a) {
        for (const auto& c : lead) {
            if (c.rho == 1.0 && c.omega_co == 0.003) detail += fmt::format(" vs J(1,0.003)={:.4g}", c.J);
        }
    }
    detail += fmt::format("; (a) {} (b) {} inverse/ideal max rel diff={:.3f}", a ? "ok" : "fail", b ? "ok" : "fail",
                          worst);
    return {a && b, detail};
}

Outcome c07() {
    SystemConfig c0 = lead_preset();
    c0.rho = 0.0;
    SystemConfig c1 = lead_preset();
    c1.rho = 1.0;
    const TransferFunction s0 = analyze_loop(c0).S;
    const TransferFunction s1 = analyze_loop(c1).S;
    double worst = 0.0;
    double at = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const double w = std::pow(10.0, -5.0 + 5.0 * k / 1000.0);
        const double r = std::abs(20.0 * std::log10(std::abs(s0.at(w)) / std::abs(s1.at(w))));
        if (r > worst) {
            worst = r;
            at = w;
        }
    }
    SystemConfig hi = lead_preset();
    hi.omega_co = 0.007;
    const double ms_hi = analyze_loop(hi).M_S;
    const double ms_lo = analyze_loop(lead_preset()).M_S;
    const bool ok = worst <= 6.0 && ms_hi > ms_lo;
    return {ok, fmt::format("max |S| ratio {:.2f} dB at {:.3g} rad/s; M_S(0.007)={:.3f} M_S(0.003)={:.3f}", worst, at,
                            ms_hi, ms_lo)};
}

Outcome c08() {
    const SystemConfig cfg = lead_preset();
    const LoopAnalysis a = analyze_loop(cfg);
    const double dt = 5.0;
    double worst_amp = 0.0;
    double worst_phase = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double w = std::pow(10.0, -4.0 + 2.0 * i / 9.0);
        const double period = 2.0 * std::numbers::pi / w;
        const auto n = static_cast<std::size_t>(std::ceil(30.0 * period / dt));
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = std::sin(w * static_cast<double>(k) * dt);
        const SimResult r = simulate_closed_loop(cfg, Signal(std::move(d), dt), {dt});
        const std::size_t first = n - static_cast<std::size_t>(5.0 * period / dt);
        const auto fy = testing::fit_sine(r.Y.values(), dt, w, first, n);
        const auto fa = testing::fit_sine(r.U_a.values(), dt, w, first, n);
        worst_amp = std::max(worst_amp, std::abs(fy.amplitude / std::abs(a.YoverD.at(w)) - 1.0));
        worst_amp = std::max(worst_amp, std::abs(fa.amplitude / std::abs(a.UaOverD.at(w)) - 1.0));
        worst_phase = std::max(
            worst_phase, std::abs(testing::wrap_deg((fa.phase_rad - std::arg(a.UaOverD.at(w))) * 180.0 / std::numbers::pi)));
    }
    return {worst_amp <= 0.01 && worst_phase <= 2.0,
            fmt::format("10 frequencies, max amplitude error {:.3g}, max phase error {:.3g} deg", worst_amp, worst_phase)};
}

Outcome c09() {
    const Scenario res = scenario("lead_resonant.cfg");
    const Scenario inv = scenario("inverse.cfg");
    const Signal d = synthetic_reserves(res.synthetic_samples, *res.seed, res.synthetic);

    const SimResult lead = simulate_closed_loop(res.system, d, {res.sim_dt});
    const SimResult good = simulate_closed_loop(inv.system, d, {inv.sim_dt});

    // Lightly damped closed-loop pair.
    double damping = 1.0;
    double w_res = 0.0;
    for (const auto& p : analyze_loop(res.system).closed_loop.roots) {
        if (p.imag() <= 1e-6) continue;
        const double z = -p.real() / std::abs(p);
        if (z < damping) {
            damping = z;
            w_res = p.imag();
        }
    }
    const PsdEstimate py = estimate_psd(lead.Y, PsdMethodSpec::welch(512, 256));
    std::size_t peak = 1;
    for (std::size_t i = 1; i < py.density.size(); ++i) {
        if (py.density[i] > py.density[peak]) peak = i;
    }
    const double w_peak = py.omegas[peak];
    const bool a = !lead.diverged && w_res > 0.0 && std::abs(w_peak / w_res - 1.0) <= 0.10;
    const double ratio = good.rms_Y / lead.rms_Y;
    const bool b = !good.diverged && ratio <= 0.20;
    return {a && b, fmt::format("(a) {} Y peak {:.4g} rad/s vs pole {:.4g} rad/s (zeta={:.3f}); (b) {} rms_Y "
                                "inverse/lead = {:.3f} ({:.4g}/{:.4g})",
                                a ? "ok" : "fail", w_peak, w_res, damping, b ? "ok" : "fail", ratio, good.rms_Y,
                                lead.rms_Y)};
}

Outcome c10() {
    double worst = 0.0;
    for (std::uint64_t seed : {1, 2, 3}) {
        const Signal r = synthetic_reserves(2016, seed);
        const BandDecomposition b = decompose_reserves(r, 2e-5, 5e-3);
        for (std::size_t k = 0; k < r.size(); ++k) {
            worst = std::max(worst, std::abs(b.U_lp[k] + b.U_mp[k] + b.U_hp[k] - r[k]) / std::max(1.0, std::abs(r[k])));
        }
    }

    const double dt = 60.0;
    const std::size_t n = 7 * 24 * 60;
    const double w_slow = 2.0 * std::numbers::pi / 86400.0;
    const double w_fast = 2.0 * std::numbers::pi / 600.0;
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        v[k] = std::sin(w_slow * t) + std::sin(w_fast * t);
    }
    const BandDecomposition b = decompose_reserves(Signal(v, dt), 2e-5, 5e-3);
    // Projection on the known component over the interior (away from filter transients).
    const std::size_t first = n / 7;
    const std::size_t last = n - n / 7;
    const double slow = testing::fit_sine(b.U_lp.values(), dt, w_slow, first, last).amplitude;
    const double fast = testing::fit_sine(b.U_hp.values(), dt, w_fast, first, last).amplitude;
    const double slow_e = slow * slow;
    const double fast_e = fast * fast;
    const bool ok = worst <= 1e-9 && slow_e >= 0.95 && fast_e >= 0.80;
    return {ok, fmt::format("reconstruction error {:.2g}; slow energy in U_lp {:.3f}; fast energy in U_hp {:.3f}",
                            worst, slow_e, fast_e)};
}

Outcome c11() {
    std::mt19937_64 rng(20150606);
    double add = 0.0;
    double mul = 0.0;
    double fb = 0.0;
    double dc = 0.0;
    int root_fail = 0;
    int pair_fail = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const TransferFunction a = testing::random_stable_tf(rng);
        const TransferFunction b = testing::random_stable_tf(rng);
        const TransferFunction sum = a + b;
        const TransferFunction prod = a * b;
        const TransferFunction loop = tf_feedback(a);
        for (double w : testing::random_omegas(rng, 50)) {
            const Complex av = a.at(w);
            const Complex bv = b.at(w);
            add = std::max(add, testing::rel_err(sum.at(w), av + bv));
            mul = std::max(mul, testing::rel_err(prod.at(w), av * bv));
            if (std::abs(1.0 + av) > 1e-6) fb = std::max(fb, testing::rel_err(loop.at(w), av / (1.0 + av)));
        }
        if (a.num()[0] != 0.0) dc = std::max(dc, std::abs(dc_gain(a) - a.at(1e-9).real()) / std::abs(dc_gain(a)));
        const Polynomial& den = prod.den();
        const PoleSet p = poles(prod);
        if (p.roots.size() != static_cast<std::size_t>(den.degree())) ++root_fail;
        for (const auto& r : p.roots) {
            const double bound = tolerance::root * std::pow(1.0 + std::abs(r), den.degree()) * den.max_abs_coeff();
            if (std::abs(den(r)) > bound) ++root_fail;
            if (std::none_of(p.roots.begin(), p.roots.end(), [&](Complex q) { return std::abs(q - std::conj(r)) <= 1e-9; })) {
                ++pair_fail;
            }
        }
    }
    const bool ok = add <= 1e-10 && mul <= 1e-10 && fb <= 1e-10 && dc <= 1e-6 && root_fail == 0 && pair_fail == 0;
    return {ok, fmt::format("100 instances: add {:.2g} mul {:.2g} feedback {:.2g} dc {:.2g} root failures {} "
                            "unpaired {}",
                            add, mul, fb, dc, root_fail, pair_fail)};
}

struct Criterion {
    int id;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    int only = 0;
    app.add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, 1.0, c01},  {2, 1.0, c02},  {3, 1.0, c03},  {4, 5.0, c04},  {5, 1.0, c05},   {6, 30.0, c06},
        {7, 2.0, c07},  {8, 10.0, c08}, {9, 10.0, c09}, {10, 5.0, c10}, {11, 5.0, c11},
    };
    int failed = 0;
    for (const auto& c : all) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += fmt::format("; over time budget {} s", c.budget_s);
        }
        fmt::print("criterion {:2}: {} ({:.2f} s) {}\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
