#include "dispatchsim/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "dispatchsim/discrete.hpp"
#include "dispatchsim/error.hpp"
#include "dispatchsim/filters.hpp"

namespace dispatchsim {
namespace {

constexpr double kBlowUp = 1e6;

bool exceeds(std::span<const double> v, double limit) {
    return std::any_of(v.begin(), v.end(), [&](double x) { return !(std::abs(x) <= limit); });
}

}  // namespace

SimResult simulate_closed_loop(const SystemConfig& cfg, const Signal& D, const SimOptions& opts) {
    if (!(opts.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "simulation step must be positive");
    if (!(opts.rms_fraction > 0.0 && opts.rms_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "rms_fraction must lie in (0, 1]");
    }
    const Signal d = D.dt() == opts.dt ? D : resample(D, opts.dt);
    const LoopAnalysis a = analyze_loop(cfg);
    const double limit = kBlowUp * rms(d.values());

    std::vector<double> y;
    std::vector<double> u;
    std::vector<double> ua;
    if (a.verdict == StabilityVerdict::Stable) {
        y = SosCascade(a.YoverD, opts.dt).filter(d.values());
        u = SosCascade(a.UoverD, opts.dt).filter(d.values());
        ua = SosCascade(a.UaOverD, opts.dt).filter(d.values());
    } else {
        const LoopModel& m = a.model;
        SosCascade plant(m.G_p, opts.dt);
        SosCascade comp(m.G_c, opts.dt);
        SosCascade act(m.actuators.H, opts.dt);
        SosCascade share(m.actuators.P_a * m.actuators.G_a, opts.dt);
        auto clamp = [&](double x) { return std::isfinite(x) ? std::clamp(x, -limit, limit) : limit; };
        double fed_back = 0.0;
        for (double dk : d.values()) {
            const double yk = clamp(plant.step(dk - fed_back));
            const double uk = clamp(-comp.step(yk));
            fed_back = clamp(-act.step(uk));
            y.push_back(yk);
            u.push_back(uk);
            ua.push_back(clamp(share.step(uk)));
        }
    }

    SimResult r{Signal(std::move(y), opts.dt, d.t0()),
                Signal(std::move(u), opts.dt, d.t0()),
                Signal(std::move(ua), opts.dt, d.t0()),
                a.verdict,
                false,
                0.0,
                0.0,
                0.0};
    r.diverged = exceeds(r.Y.values(), limit) || exceeds(r.U.values(), limit) || exceeds(r.U_a.values(), limit);
    if (a.verdict != StabilityVerdict::Stable && limit > 0.0) {
        // The saturated run reaching its bound is the divergence signature.
        auto at_bound = [&](const Signal& s) {
            return std::any_of(s.values().begin(), s.values().end(), [&](double x) { return std::abs(x) >= limit; });
        };
        r.diverged = r.diverged || at_bound(r.Y) || at_bound(r.U) || at_bound(r.U_a);
    }
    r.rms_Y = tail_rms(r.Y.values(), opts.rms_fraction);
    r.rms_U = tail_rms(r.U.values(), opts.rms_fraction);
    r.rms_Ua = tail_rms(r.U_a.values(), opts.rms_fraction);
    return r;
}

std::vector<MarginRow> stability_boundary(const SystemConfig& cfg_base, Design design,
                                          std::span<const double> omega_co_grid) {
    std::vector<MarginRow> rows;
    SystemConfig cfg = with_design(cfg_base, design);
    cfg.rho = 1.0;
    for (double w : omega_co_grid) {
        cfg.omega_co = w;
        const LoopAnalysis a = analyze_loop(cfg);
        rows.push_back({w, a.verdict, a.max_real_part, a.M_S, a.vector_margin});
    }
    return rows;
}

BandDecomposition decompose_reserves(const Signal& U_r, double lp_cutoff, double hp_cutoff) {
    if (!(lp_cutoff > 0.0) || !(hp_cutoff > lp_cutoff)) {
        throw Error(ErrorCode::InvalidArgument, "need 0 < lp_cutoff < hp_cutoff");
    }
    const Signal lp = zero_phase_filter(U_r, butterworth2_lowpass({lp_cutoff}));
    std::vector<double> rest(U_r.size());
    for (std::size_t k = 0; k < rest.size(); ++k) rest[k] = U_r[k] - lp[k];
    SosCascade hp_filter(butterworth2_highpass({hp_cutoff}), U_r.dt());
    std::vector<double> hp = hp_filter.filter(rest);
    std::vector<double> mp(rest.size());
    for (std::size_t k = 0; k < mp.size(); ++k) mp[k] = U_r[k] - lp[k] - hp[k];
    return {lp, Signal(std::move(mp), U_r.dt(), U_r.t0()), Signal(std::move(hp), U_r.dt(), U_r.t0())};
}

}  // namespace dispatchsim
