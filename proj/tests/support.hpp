#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <vector>

#include "dispatchsim/transfer_function.hpp"

namespace testing {

using dispatchsim::Complex;
using dispatchsim::Polynomial;
using dispatchsim::TransferFunction;

inline double rel_err(Complex got, Complex want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

// Roots with negative real parts, complex ones in conjugate pairs.
inline std::vector<Complex> random_stable_roots(std::mt19937_64& rng, int degree) {
    std::uniform_real_distribution<double> re(-2.0, -0.05);
    std::uniform_real_distribution<double> im(0.05, 2.0);
    std::bernoulli_distribution complex_pair(0.5);
    std::vector<Complex> r;
    while (static_cast<int>(r.size()) < degree) {
        if (degree - static_cast<int>(r.size()) >= 2 && complex_pair(rng)) {
            const Complex z(re(rng), im(rng));
            r.push_back(z);
            r.push_back(std::conj(z));
        } else {
            r.emplace_back(re(rng), 0.0);
        }
    }
    return r;
}

inline Polynomial random_poly(std::mt19937_64& rng, int degree) {
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    std::vector<double> v(static_cast<std::size_t>(degree) + 1);
    for (auto& e : v) e = c(rng);
    if (v.back() == 0.0) v.back() = 1.0;
    return Polynomial(v);
}

// Proper, stable, degree 1..6.
inline TransferFunction random_stable_tf(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> deg(1, 6);
    std::uniform_real_distribution<double> gain(0.2, 5.0);
    const int n = deg(rng);
    std::uniform_int_distribution<int> zdeg(0, n);
    const auto poles = random_stable_roots(rng, n);
    return {random_poly(rng, zdeg(rng)), dispatchsim::poly_from_roots(poles, gain(rng))};
}

inline std::vector<double> random_omegas(std::mt19937_64& rng, std::size_t count, double lo = 1e-3, double hi = 1e2) {
    std::uniform_real_distribution<double> u(std::log10(lo), std::log10(hi));
    std::vector<double> w(count);
    for (auto& e : w) e = std::pow(10.0, u(rng));
    return w;
}

struct SineFit {
    double amplitude;
    double phase_rad;  // of x relative to sin(w t)
    double offset;
};

// Least-squares fit x_k ~ c + a sin(w t_k) + b cos(w t_k) over [first, last).
inline SineFit fit_sine(std::span<const double> x, double dt, double omega, std::size_t first, std::size_t last) {
    const auto n = static_cast<Eigen::Index>(last - first);
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(first + static_cast<std::size_t>(i)) * dt;
        A(i, 0) = 1.0;
        A(i, 1) = std::sin(omega * t);
        A(i, 2) = std::cos(omega * t);
        y(i) = x[first + static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
    return {std::hypot(c(1), c(2)), std::atan2(c(2), c(1)), c(0)};
}

inline double wrap_deg(double d) {
    while (d > 180.0) d -= 360.0;
    while (d < -180.0) d += 360.0;
    return d;
}

}  // namespace testing
