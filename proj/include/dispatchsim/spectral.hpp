#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dispatchsim/models.hpp"
#include "dispatchsim/signal.hpp"

namespace dispatchsim {

struct PsdMethodSpec {
    enum class Kind { AR, Welch } kind = Kind::AR;
    std::size_t ar_order = 24;
    std::size_t segment = 256;  // Welch segment length, samples
    std::size_t overlap = 128;  // Welch overlap, samples

    static PsdMethodSpec ar(std::size_t order = 24) { return {Kind::AR, order, 256, 128}; }
    static PsdMethodSpec welch(std::size_t segment, std::size_t overlap) {
        return {Kind::Welch, 24, segment, overlap};
    }
};

/// One-sided power spectral density in MW^2 s/rad, normalized so that its
/// integral over [0, nyquist] is the variance of the source.
struct PsdEstimate {
    std::vector<double> omegas;   // rad/s, increasing, starts at 0
    std::vector<double> density;
    PsdMethodSpec method;
    double nyquist;               // pi / dt
    double variance;              // of the mean-removed source

    /// Linear interpolation; zero outside [0, nyquist].
    double at(double omega) const;
};

/// Mean is removed first. AR: Yule-Walker fit via Levinson-Durbin, needs
/// 32 * order samples. Welch: Hann-windowed periodograms, needs 4 segments.
/// Throws TooShort or IllConditioned.
PsdEstimate estimate_psd(const Signal& x, const PsdMethodSpec& method = {});

/// RMS of the output of tf driven by the process with density P_D:
/// J^2 = integral over [0, nyquist] of P_D |tf(jw)|^2. Throws UnstableSystem
/// unless tf is stable, DomainMismatch unless the PSD grid spans
/// [1e-5, nyquist].
double mean_square_cost(const PsdEstimate& P_D, const TransferFunction& tf);

struct CostCell {
    std::string design;
    double rho;
    double omega_co;
    double J;        // NaN when not stable
    bool stable;
};

/// J over rho_grid x omega_co_grid with cfg_base's designs. Cells are
/// independent and are spread over `workers` threads; the output order is
/// omega_co-major and does not depend on the worker count.
std::vector<CostCell> cost_sweep(const SystemConfig& cfg_base, std::span<const double> rho_grid,
                                 std::span<const double> omega_co_grid, const PsdEstimate& P_D,
                                 unsigned workers = 1);

/// Columns design,rho,omega_co_rad_s,J_MW,stable.
void write_sweep_csv(std::ostream& out, std::span<const CostCell> cells);
/// Columns omega_rad_s,density.
void write_psd_csv(std::ostream& out, const PsdEstimate& psd);

}  // namespace dispatchsim
