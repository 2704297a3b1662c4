#include "dispatchsim/models.hpp"

#include <cmath>
#include <string>

#include "dispatchsim/error.hpp"

namespace dispatchsim {

const char* to_string(PrefilterKind k) noexcept {
    switch (k) {
        case PrefilterKind::None: return "none";
        case PrefilterKind::Lead: return "lead";
        case PrefilterKind::Inverse: return "inverse";
    }
    return "?";
}

const char* to_string(Design d) noexcept {
    switch (d) {
        case Design::None: return "none";
        case Design::Lead: return "lead";
        case Design::Inverse: return "inverse";
        case Design::IdealTcl: return "ideal-tcl";
    }
    return "?";
}

Design parse_design(const std::string& name) {
    if (name == "none") return Design::None;
    if (name == "lead") return Design::Lead;
    if (name == "inverse") return Design::Inverse;
    if (name == "ideal-tcl" || name == "ideal") return Design::IdealTcl;
    throw Error(ErrorCode::InvalidArgument, "unknown design '" + name + "' (none, lead, inverse, ideal-tcl)");
}

namespace {

void check_load(const LoadClassParams& p, const char* name) {
    if (!(p.omega_n > 0.0) || !(p.zeta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + ": omega_n and zeta must be positive");
    }
}

}  // namespace

void SystemConfig::validate() const {
    if (grid.den.degree() < 1) throw Error(ErrorCode::InvalidArgument, "grid denominator must be non-constant");
    if (grid.num.degree() > grid.den.degree()) throw Error(ErrorCode::InvalidArgument, "grid model must be proper");
    check_load(pools, "pools");
    check_load(tcls, "tcls");
    if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1]");
    if (!(omega_co > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega_co must be positive");
    if (omega_co > kOmegaCoCap && !allow_omega_co_above_cap) {
        throw Error(ErrorCode::InvalidArgument, "omega_co exceeds the 0.013 rad/s cap (set allow_omega_co_above_cap)");
    }
    if (!(hp_cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "hp_cutoff must be positive");
    if (!(lp_zeta > 0.0) || !(hp_zeta > 0.0)) throw Error(ErrorCode::InvalidArgument, "filter damping must be positive");
    if (!(compensator_beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "compensator_beta must be positive");
    if (!(crossover_target > 0.0)) throw Error(ErrorCode::InvalidArgument, "crossover_target must be positive");
    if (perfect_actuator && !perfect_actuator->is_proper()) {
        throw Error(ErrorCode::InvalidArgument, "perfect actuator model must be proper");
    }
}

SystemConfig with_design(SystemConfig cfg, Design d) {
    cfg.tcls.ideal = false;
    switch (d) {
        case Design::None: cfg.tcls.prefilter.kind = PrefilterKind::None; break;
        case Design::Lead: cfg.tcls.prefilter.kind = PrefilterKind::Lead; break;
        case Design::Inverse: cfg.tcls.prefilter.kind = PrefilterKind::Inverse; break;
        case Design::IdealTcl: cfg.tcls.ideal = true; break;
    }
    return cfg;
}

SystemConfig lead_preset() { return {}; }

SystemConfig inverse_preset() {
    SystemConfig cfg = with_design({}, Design::Inverse);
    cfg.omega_co = 0.013;
    return cfg;
}

SystemConfig no_prefilter_preset() { return with_design({}, Design::None); }

SystemConfig ideal_tcl_preset() {
    SystemConfig cfg = with_design({}, Design::IdealTcl);
    cfg.omega_co = 0.013;
    return cfg;
}

TransferFunction grid_model(const GridParams& p) { return {p.num, p.den}; }

TransferFunction ercot_grid() { return grid_model({}); }

TransferFunction load_model(const LoadClassParams& p) {
    check_load(p, "load");
    const double w2 = p.omega_n * p.omega_n;
    return {Polynomial::constant(w2), Polynomial{w2, 2.0 * p.zeta * p.omega_n, 1.0}};
}

TransferFunction prefilter(const LoadClassParams& p) {
    switch (p.prefilter.kind) {
        case PrefilterKind::None: return {};
        case PrefilterKind::Lead: return lead2(p.prefilter.lead);
        case PrefilterKind::Inverse: return inverse_prefilter(p.prefilter.inverse_alpha, load_model(p));
    }
    return {};
}

namespace {

// Pre-filtered load M_l G_l, or 1 for an ideal class.
TransferFunction filtered_load(const LoadClassParams& p) {
    if (p.ideal) return {};
    return prefilter(p) * load_model(p);
}

}  // namespace

ActuatorSet build_actuators(const SystemConfig& cfg) {
    cfg.validate();
    ActuatorSet a;
    a.G_a = cfg.perfect_actuator.value_or(TransferFunction{});
    a.H_pl = filtered_load(cfg.pools);
    a.H_tcl = filtered_load(cfg.tcls);
    a.H_LP = butterworth2_lowpass({cfg.omega_co, cfg.lp_zeta});
    a.H_HP = butterworth2_highpass({cfg.hp_cutoff, cfg.hp_zeta});

    const double rho = cfg.rho;
    const Polynomial& nL = a.H_LP.num();
    const Polynomial& dL = a.H_LP.den();
    const Polynomial& nH = a.H_HP.num();
    const Polynomial& dH = a.H_HP.den();
    const Polynomial& np = a.H_pl.num();
    const Polynomial& dp = a.H_pl.den();
    // With no TCL share the TCL factors are left out entirely.
    const Polynomial one{1.0};
    const Polynomial& nt = rho == 0.0 ? one : a.H_tcl.num();
    const Polynomial& dt = rho == 0.0 ? one : a.H_tcl.den();
    const Polynomial& ng = a.G_a.num();
    const Polynomial& dg = a.G_a.den();

    // Each block is formed over the product of the distinct filter
    // denominators, so the LP and HP poles appear once in H.
    const Polynomial hb_num = np * dH * dt + rho * (nH * nt * dp);
    a.H_B = {hb_num, dp * dH * dt};
    const Polynomial pa_num = dL * dH - nL * (dH - (1.0 - rho) * nH);
    a.P_a = {pa_num, dL * dH};
    a.H = {pa_num * ng * dp * dt + nL * hb_num * dg, dL * dH * dp * dt * dg};
    return a;
}

double pi_gain(double beta, double target_wc, const TransferFunction& H, const TransferFunction& G_p) {
    if (!(target_wc > 0.0)) throw Error(ErrorCode::SingularCalibration, "crossover target must be positive");
    const Complex s(0.0, target_wc);
    const double mag = std::abs((s + beta) / s * H(s) * G_p(s));
    if (!std::isfinite(mag) || mag == 0.0) {
        throw Error(ErrorCode::SingularCalibration, "loop magnitude at the crossover target is zero or not finite");
    }
    return 1.0 / mag;
}

TransferFunction pi_compensator(double K, double beta) {
    return {Polynomial{K * beta, K}, Polynomial::monomial(1)};
}

LoopModel build_loop(const SystemConfig& cfg) {
    LoopModel m;
    m.actuators = build_actuators(cfg);
    m.G_p = grid_model(cfg.grid);
    const TransferFunction calib = cfg.fixed_K ? TransferFunction{} : m.actuators.H;
    m.K = pi_gain(cfg.compensator_beta, cfg.crossover_target, calib, m.G_p);
    m.G_c = pi_compensator(m.K, cfg.compensator_beta);
    m.L = m.G_c * m.actuators.H * m.G_p;
    m.L_a = m.G_c * m.actuators.G_a * m.G_p;
    return m;
}

TransferFunction loop_tf(const SystemConfig& cfg) { return build_loop(cfg).L; }

}  // namespace dispatchsim
