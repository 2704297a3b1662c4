#pragma once

#include <span>
#include <vector>

#include "dispatchsim/analysis.hpp"
#include "dispatchsim/signal.hpp"

namespace dispatchsim {

struct SimOptions {
    double dt = 60.0;            // s; D is linearly resampled when it differs
    double rms_fraction = 0.8;   // metrics use the trailing fraction
};

struct SimResult {
    Signal Y;    // grid-side deviation
    Signal U;    // compensator output
    Signal U_a;  // perfect-actuator share
    StabilityVerdict verdict;
    bool diverged;  // some sample exceeded 1e6 x the input RMS
    double rms_Y;
    double rms_U;
    double rms_Ua;
};

/// Disturbance rejection for Y = G_p (D - G_c H Y). Stable loops filter D
/// through the closed-loop maps Y/D, U/D and U_a/D. Other loops run the
/// interconnection with a one-sample delay, saturated at the blow-up
/// threshold, so the divergence is visible without overflow.
SimResult simulate_closed_loop(const SystemConfig& cfg, const Signal& D, const SimOptions& opts = {});

struct MarginRow {
    double omega_co;
    StabilityVerdict verdict;
    double max_real_part;  // of the closed-loop poles
    double M_S;            // infinite unless stable
    double vector_margin;
};

/// Closed-loop verdict at rho = 1 for each cut-off.
std::vector<MarginRow> stability_boundary(const SystemConfig& cfg_base, Design design,
                                          std::span<const double> omega_co_grid);

struct BandDecomposition {
    Signal U_lp;
    Signal U_mp;
    Signal U_hp;
};

/// U_lp: zero-phase Butterworth low-pass of U_r. U_hp: causal Butterworth
/// high-pass of U_r - U_lp. U_mp: the remainder.
BandDecomposition decompose_reserves(const Signal& U_r, double lp_cutoff = 2e-5, double hp_cutoff = 5e-3);

}  // namespace dispatchsim
