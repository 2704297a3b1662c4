#include "dispatchsim/filters.hpp"

#include <algorithm>
#include <cmath>

#include "dispatchsim/discrete.hpp"
#include "dispatchsim/error.hpp"

namespace dispatchsim {
namespace {

void check(const ButterworthParams& p) {
    if (!(p.omega_co > 0.0) || !(p.zeta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Butterworth cut-off and damping must be positive");
    }
}

Polynomial butterworth_den(const ButterworthParams& p) {
    return {p.omega_co * p.omega_co, 2.0 * p.zeta * p.omega_co, 1.0};
}

}  // namespace

TransferFunction butterworth2_lowpass(const ButterworthParams& p) {
    check(p);
    return {Polynomial::constant(p.omega_co * p.omega_co), butterworth_den(p)};
}

TransferFunction butterworth2_highpass(const ButterworthParams& p) {
    check(p);
    return {Polynomial::monomial(2), butterworth_den(p)};
}

TransferFunction lead2(const LeadParams& p) {
    if (!(p.tau > 0.0) || !(p.alpha > 0.0) || !(p.alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "lead requires tau > 0 and 0 < alpha < 1");
    }
    const Polynomial zero{1.0, p.tau};
    const Polynomial pole{1.0, p.alpha * p.tau};
    return {zero * zero, pole * pole};
}

TransferFunction inverse_prefilter(double alpha, const TransferFunction& load) {
    if (!(alpha >= 0.0) || !(alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "inverse design requires 0 <= alpha < 1");
    Polynomial den = load.den() * alpha + load.num();
    if (den.is_zero()) throw Error(ErrorCode::UnstableInverse, "alpha + G_l is identically zero");
    if (load.den().degree() > den.degree()) {
        throw Error(ErrorCode::ImproperResult, "inverse pre-filter would be improper");
    }
    if (den.degree() >= 1 && find_roots(den).max_real_part() >= -tolerance::stability) {
        throw Error(ErrorCode::UnstableInverse, "alpha + G_l has zeros in the closed right half-plane");
    }
    return {load.den(), std::move(den)};
}

Signal zero_phase_filter(const Signal& x, const TransferFunction& f) {
    const PoleSet p = poles(f);
    if (classify(p) != StabilityVerdict::Stable) throw Error(ErrorCode::UnstableFilter, "filter is not stable");
    if (x.empty()) return x;

    double slowest = std::numeric_limits<double>::infinity();
    for (const auto& r : p.roots) slowest = std::min(slowest, -r.real());
    const double time_constant = std::isfinite(slowest) ? 1.0 / slowest : 0.0;
    const std::size_t n = x.size();
    const auto pad = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::ceil(3.0 * time_constant / x.dt())));

    // Odd reflection about the end samples keeps value and slope continuous.
    const auto& v = x.values();
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * v.front() - v[k]);
    ext.insert(ext.end(), v.begin(), v.end());
    for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * v.back() - v[n - 1 - k]);

    SosCascade cascade(f, x.dt());
    cascade.reset_to_steady_state(ext.front());
    std::vector<double> forward = cascade.filter(ext);
    std::reverse(forward.begin(), forward.end());
    cascade.reset_to_steady_state(forward.front());
    std::vector<double> backward = cascade.filter(forward);
    std::reverse(backward.begin(), backward.end());

    return Signal(std::vector<double>(backward.begin() + static_cast<std::ptrdiff_t>(pad),
                                      backward.begin() + static_cast<std::ptrdiff_t>(pad + n)),
                  x.dt(), x.t0());
}

}  // namespace dispatchsim
