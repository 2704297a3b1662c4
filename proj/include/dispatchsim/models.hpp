#pragma once

#include <numbers>
#include <optional>
#include <string>

#include "dispatchsim/filters.hpp"
#include "dispatchsim/transfer_function.hpp"

namespace dispatchsim {

/// Hard cap on the actuator low-pass cut-off (rad/s).
inline constexpr double kOmegaCoCap = 0.013;

struct GridParams {
    Polynomial num{0.147, 0.644};
    Polynomial den{0.147, 0.4797, 1.0};
};

enum class PrefilterKind { None, Lead, Inverse };

const char* to_string(PrefilterKind k) noexcept;

struct Prefilter {
    PrefilterKind kind = PrefilterKind::None;
    LeadParams lead{1.0, 0.5};
    double inverse_alpha = 0.003;
};

/// Second-order aggregate load omega_n^2 / (s^2 + 2 zeta omega_n s + omega_n^2)
/// with its local pre-filter. `ideal` replaces the filtered load by 1.
struct LoadClassParams {
    double omega_n;
    double zeta;
    Prefilter prefilter;
    bool ideal = false;
};

/// Named TCL pre-filter choices used by the sweep and margin drivers.
enum class Design { None, Lead, Inverse, IdealTcl };

const char* to_string(Design d) noexcept;
Design parse_design(const std::string& name);

struct SystemConfig {
    GridParams grid;
    LoadClassParams pools{7.27e-5, 0.5, {PrefilterKind::Lead, {15000.0, 1.0 / 15.0}, 0.003}};
    LoadClassParams tcls{0.003, 0.5, {PrefilterKind::Lead, {350.0, 1.0 / 5.0}, 0.003}};
    double rho = 1.0;
    double omega_co = 0.003;        // rad/s, actuator low-pass cut-off
    bool allow_omega_co_above_cap = false;
    double hp_cutoff = 0.0004;      // rad/s, TCL high-pass cut-off
    double lp_zeta = std::numbers::sqrt2 / 2.0;
    double hp_zeta = std::numbers::sqrt2 / 2.0;
    double compensator_beta = 0.5;  // rad/s
    double crossover_target = 0.05; // rad/s
    /// Calibrate K against H = 1 instead of the configured actuator.
    bool fixed_K = false;
    /// Perfect-actuator model G_a; the constant 1 when unset.
    std::optional<TransferFunction> perfect_actuator;

    void validate() const;
};

/// Configuration with the TCL pre-filter replaced by the named design.
SystemConfig with_design(SystemConfig cfg, Design d);

SystemConfig lead_preset();
SystemConfig inverse_preset();
SystemConfig no_prefilter_preset();
SystemConfig ideal_tcl_preset();

struct ActuatorSet {
    TransferFunction G_a;
    TransferFunction H_pl;
    TransferFunction H_tcl;
    TransferFunction H_LP;
    TransferFunction H_HP;
    TransferFunction H_B;
    TransferFunction P_a;
    TransferFunction H;
};

/// (0.644 s + 0.147) / (s^2 + 0.4797 s + 0.147)
TransferFunction ercot_grid();
TransferFunction grid_model(const GridParams& p);
TransferFunction load_model(const LoadClassParams& p);
/// M_l for the given load class; throws UnstableInverse/ImproperResult.
TransferFunction prefilter(const LoadClassParams& p);
ActuatorSet build_actuators(const SystemConfig& cfg);

/// K such that |K ((jw+beta)/jw) H(jw) G_p(jw)| = 1 at w = target_wc.
/// Throws SingularCalibration when that magnitude is zero or not finite.
double pi_gain(double beta, double target_wc, const TransferFunction& H, const TransferFunction& G_p);
/// K (s + beta) / s
TransferFunction pi_compensator(double K, double beta);

/// Every piece of the loop for one configuration.
struct LoopModel {
    TransferFunction G_p;
    TransferFunction G_c;
    TransferFunction L;    // G_c H G_p
    TransferFunction L_a;  // G_c G_a G_p
    double K;
    ActuatorSet actuators;
};

LoopModel build_loop(const SystemConfig& cfg);
TransferFunction loop_tf(const SystemConfig& cfg);

}  // namespace dispatchsim
