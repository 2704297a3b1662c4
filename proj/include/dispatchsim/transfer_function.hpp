#pragma once

#include <span>
#include <vector>

#include "dispatchsim/polynomial.hpp"

namespace dispatchsim {

enum class StabilityVerdict { Stable, Marginal, Unstable };

const char* to_string(StabilityVerdict v) noexcept;

struct FreqPoint {
    double omega;  // rad/s
    Complex value;
    double magnitude_db;
    double phase_deg;  // unwrapped along the evaluated grid
};

/// Ratio of two real polynomials in s. The denominator is normalized to be
/// monic on construction. Common roots of numerator and denominator are
/// never cancelled automatically.
class TransferFunction {
public:
    /// The constant 1.
    TransferFunction();
    TransferFunction(Polynomial num, Polynomial den);

    static TransferFunction gain(double k);

    const Polynomial& num() const noexcept { return num_; }
    const Polynomial& den() const noexcept { return den_; }

    Complex operator()(Complex s) const noexcept { return num_(s) / den_(s); }
    Complex at(double omega) const noexcept { return (*this)(Complex(0.0, omega)); }

    bool is_proper() const noexcept { return num_.degree() <= den_.degree(); }
    bool is_zero() const noexcept { return num_.is_zero(); }

private:
    Polynomial num_;
    Polynomial den_;
};

TransferFunction tf_add(const TransferFunction& a, const TransferFunction& b);
TransferFunction tf_mul(const TransferFunction& a, const TransferFunction& b);
TransferFunction tf_scale(const TransferFunction& a, double k);
/// Unity negative feedback closure forward / (1 + forward).
TransferFunction tf_feedback(const TransferFunction& forward);

inline TransferFunction operator+(const TransferFunction& a, const TransferFunction& b) { return tf_add(a, b); }
inline TransferFunction operator-(const TransferFunction& a, const TransferFunction& b) {
    return tf_add(a, tf_scale(b, -1.0));
}
inline TransferFunction operator*(const TransferFunction& a, const TransferFunction& b) { return tf_mul(a, b); }
inline TransferFunction operator*(double k, const TransferFunction& a) { return tf_scale(a, k); }
inline TransferFunction operator*(const TransferFunction& a, double k) { return tf_scale(a, k); }

PoleSet poles(const TransferFunction& tf);
PoleSet zeros(const TransferFunction& tf);

StabilityVerdict classify(const PoleSet& poles);
StabilityVerdict is_stable(const TransferFunction& tf);

/// Frequency response on a strictly increasing, strictly positive grid.
/// Throws PoleOnAxis where |den(jw)| is below axis_tol relative to the
/// magnitude of its terms.
std::vector<FreqPoint> eval_freq(const TransferFunction& tf, std::span<const double> omegas);

/// Limit of tf(s) as s -> 0 after removing exact s-factors; +/-infinity
/// when a pole at the origin remains.
double dc_gain(const TransferFunction& tf);

}  // namespace dispatchsim
