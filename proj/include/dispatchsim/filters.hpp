#pragma once

#include <numbers>

#include "dispatchsim/signal.hpp"
#include "dispatchsim/transfer_function.hpp"

namespace dispatchsim {

/// Parameters of ((tau s + 1) / (alpha tau s + 1))^2. alpha < 1 gives lead.
struct LeadParams {
    double tau;    // seconds
    double alpha;  // 0 < alpha < 1
};

struct ButterworthParams {
    double omega_co;                              // rad/s
    double zeta = std::numbers::sqrt2 / 2.0;      // Butterworth by default
};

/// omega_co^2 / (s^2 + 2 zeta omega_co s + omega_co^2)
TransferFunction butterworth2_lowpass(const ButterworthParams& p);
/// s^2 / (s^2 + 2 zeta omega_co s + omega_co^2)
TransferFunction butterworth2_highpass(const ButterworthParams& p);
/// Two identical lead stages in series; DC gain 1, high-frequency gain 1/alpha^2.
TransferFunction lead2(const LeadParams& p);

/// Load pre-filter (alpha + G_l)^-1 = d_l / (alpha d_l + n_l).
///
/// Fails with ImproperResult when the result would have more zeros than
/// poles (alpha = 0 with a strictly proper load), and with UnstableInverse
/// when alpha d_l + n_l has a root with real part >= -stability_tol.
TransferFunction inverse_prefilter(double alpha, const TransferFunction& load);

/// Non-causal forward-backward filtering of x through the Tustin
/// discretization of f. The signal is odd-reflected by three of f's slowest
/// time constants at each end and each pass starts from the equilibrium for
/// its first sample; the padding is trimmed afterwards. The net response is
/// |f|^2 with zero phase. Throws UnstableFilter unless f is stable.
Signal zero_phase_filter(const Signal& x, const TransferFunction& f);

}  // namespace dispatchsim
