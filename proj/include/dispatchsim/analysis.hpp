#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "dispatchsim/models.hpp"

namespace dispatchsim {

struct PeakGain {
    double value;  // sup |tf(jw)|
    double omega;  // where it is attained, rad/s
};

/// Supremum of |tf(jw)| over [1e-6, 10] rad/s: 200 log-spaced points per
/// decade, then three rounds of 10x zoom around the largest sample.
PeakGain peak_gain(const TransferFunction& tf);

struct LoopAnalysis {
    LoopModel model;
    TransferFunction L;
    TransferFunction S;        // 1 / (1 + L)
    TransferFunction YoverD;   // G_p / (1 + L)
    TransferFunction UoverD;   // -G_c G_p / (1 + L), compensator output
    TransferFunction UaOverD;  // -P_a L_a / (1 + L)
    PoleSet closed_loop;       // roots of den(L) + num(L)
    StabilityVerdict verdict;
    double max_real_part;
    /// Infinite when the loop is not stable.
    double M_S;
    double M_a;
    double vector_margin;  // 1 / M_S
    double omega_peak_S;
    bool norms_valid;
};

LoopAnalysis analyze_loop(const SystemConfig& cfg);

/// L_a = G_c G_a G_p with K calibrated for H = 1 (the all-perfect loop).
TransferFunction perfect_loop(const SystemConfig& cfg);

struct HeterogeneityCurve {
    std::vector<double> rho_grid;
    std::vector<double> k0_values;  // NaN where |1 + L(jw0)| < 1e-9
    std::vector<bool> near_singular;
    double omega0;
    double phi_B;  // degrees
    double slope_at_1;
};

/// Single-frequency cost k0(rho) = (1 - rho) |L_a / (1 + L)|(jw0) with
/// H(jw0) = (1 - rho) + rho e^{j phi_B}. Throws NearSingularLoop when the
/// slope at rho = 1 is undefined.
HeterogeneityCurve heterogeneity_cost(const TransferFunction& L_a, double omega0, double phi_B_deg,
                                      std::span<const double> rho_grid);

/// Log-spaced evaluation with unwrapped phase.
std::vector<FreqPoint> bode_data(const TransferFunction& tf, double omega_min, double omega_max,
                                 int points_per_decade);

struct Crossover {
    double omega;
    bool multiple;  // more than one crossing in [1e-6, 10]
};

/// Lowest w in [1e-6, 10] with |L(jw)| = 1; throws NoCrossover.
Crossover find_crossover(const TransferFunction& L);

/// Columns omega_rad_s,magnitude_db,phase_deg.
void write_bode_csv(std::ostream& out, std::span<const FreqPoint> points);
/// Columns phi_b_deg,rho,k0.
void write_heterogeneity_csv(std::ostream& out, std::span<const HeterogeneityCurve> curves);

}  // namespace dispatchsim
