#include "dispatchsim/transfer_function.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "dispatchsim/error.hpp"

namespace dispatchsim {

const char* to_string(StabilityVerdict v) noexcept {
    switch (v) {
        case StabilityVerdict::Stable: return "stable";
        case StabilityVerdict::Marginal: return "marginal";
        case StabilityVerdict::Unstable: return "unstable";
    }
    return "unknown";
}

TransferFunction::TransferFunction() : num_{1.0}, den_{1.0} {}

TransferFunction::TransferFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(ErrorCode::InvalidArgument, "transfer function denominator is identically zero");
    const double lead = den_.leading();
    if (lead != 1.0) {
        num_ *= 1.0 / lead;
        den_ *= 1.0 / lead;
    }
}

TransferFunction TransferFunction::gain(double k) { return {Polynomial::constant(k), Polynomial::constant(1.0)}; }

TransferFunction tf_add(const TransferFunction& a, const TransferFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den() == b.den()) return {a.num() + b.num(), a.den()};
    return {a.num() * b.den() + b.num() * a.den(), a.den() * b.den()};
}

TransferFunction tf_mul(const TransferFunction& a, const TransferFunction& b) {
    return {a.num() * b.num(), a.den() * b.den()};
}

TransferFunction tf_scale(const TransferFunction& a, double k) { return {a.num() * k, a.den()}; }

TransferFunction tf_feedback(const TransferFunction& forward) {
    Polynomial closed = forward.den() + forward.num();
    if (closed.is_zero()) throw Error(ErrorCode::DegenerateLoop, "1 + forward is identically zero");
    return {forward.num(), std::move(closed)};
}

PoleSet poles(const TransferFunction& tf) {
    if (tf.den().degree() < 1) return {};
    return find_roots(tf.den());
}

PoleSet zeros(const TransferFunction& tf) {
    if (tf.num().degree() < 1) return {};
    return find_roots(tf.num());
}

StabilityVerdict classify(const PoleSet& p) {
    if (p.roots.empty()) return StabilityVerdict::Stable;
    const double worst = p.max_real_part();
    if (worst < -tolerance::stability) return StabilityVerdict::Stable;
    if (worst <= tolerance::stability) return StabilityVerdict::Marginal;
    return StabilityVerdict::Unstable;
}

StabilityVerdict is_stable(const TransferFunction& tf) { return classify(poles(tf)); }

std::vector<FreqPoint> eval_freq(const TransferFunction& tf, std::span<const double> omegas) {
    std::vector<FreqPoint> out;
    out.reserve(omegas.size());
    double previous_omega = 0.0;
    double previous_phase = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double w = omegas[i];
        if (!(w > previous_omega) || !std::isfinite(w)) {
            throw Error(ErrorCode::InvalidArgument, "frequencies must be positive and strictly increasing");
        }
        const Complex s(0.0, w);
        const Complex d = tf.den()(s);
        if (std::abs(d) < tolerance::axis * tf.den().term_scale(w)) {
            throw Error(ErrorCode::PoleOnAxis, "evaluation at an imaginary-axis pole");
        }
        const Complex value = tf.num()(s) / d;
        double phase = std::arg(value) * 180.0 / std::numbers::pi;
        if (i > 0) {
            while (phase - previous_phase > 180.0) phase -= 360.0;
            while (phase - previous_phase < -180.0) phase += 360.0;
        }
        out.push_back({w, value, 20.0 * std::log10(std::abs(value)), phase});
        previous_omega = w;
        previous_phase = phase;
    }
    return out;
}

double dc_gain(const TransferFunction& tf) {
    if (tf.is_zero()) return 0.0;
    const std::size_t zn = tf.num().origin_multiplicity();
    const std::size_t zd = tf.den().origin_multiplicity();
    if (zn > zd) return 0.0;
    const double n = tf.num()[zn];
    const double d = tf.den()[zd];
    if (zn < zd) return std::copysign(std::numeric_limits<double>::infinity(), n * d);
    return n / d;
}

}  // namespace dispatchsim
