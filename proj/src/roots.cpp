#include <Eigen/Eigenvalues>
#include <cmath>

#include "dispatchsim/error.hpp"
#include "dispatchsim/polynomial.hpp"

namespace dispatchsim {
namespace {

constexpr int kPolishIterations = 8;

// Parlett-Reinsch diagonal similarity scaling (radix 2, so exact in binary).
void balance(Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

Complex polish(const Polynomial& p, const Polynomial& dp, Complex r) {
    Complex value = p(r);
    for (int it = 0; it < kPolishIterations && std::abs(value) > 0.0; ++it) {
        const Complex slope = dp(r);
        if (std::abs(slope) == 0.0) break;
        const Complex candidate = r - value / slope;
        const Complex candidate_value = p(candidate);
        if (!(std::abs(candidate_value) < std::abs(value))) break;
        r = candidate;
        value = candidate_value;
    }
    return r;
}

// Make conjugate partners exact mirrors of each other.
void symmetrize(std::vector<Complex>& roots) {
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i] || roots[i].imag() <= 0.0) continue;
        std::size_t best = roots.size();
        double best_dist = 0.0;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j == i || used[j] || roots[j].imag() >= 0.0) continue;
            const double d = std::abs(roots[j] - std::conj(roots[i]));
            if (best == roots.size() || d < best_dist) {
                best = j;
                best_dist = d;
            }
        }
        if (best == roots.size()) continue;
        const Complex mid = 0.5 * (roots[i] + std::conj(roots[best]));
        roots[i] = mid;
        roots[best] = std::conj(mid);
        used[i] = used[best] = true;
    }
}

}  // namespace

PoleSet find_roots(const Polynomial& p) {
    if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "roots of the zero polynomial are undefined");

    PoleSet out;
    const std::size_t at_origin = p.origin_multiplicity();
    out.roots.assign(at_origin, Complex(0.0));

    const Polynomial q = p.shifted_down(at_origin);
    const int n = q.degree();
    if (n == 1) {
        out.roots.emplace_back(-q[0] / q[1]);
    } else if (n >= 2) {
        // Rescale s = c x so that the scaled monic polynomial has unit constant
        // term; c is the geometric mean of the root magnitudes.
        const double log_c = std::log(std::abs(q[0] / q.leading())) / n;
        const double c = std::exp(log_c);
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            const double scaled = (q[static_cast<std::size_t>(k)] / q.leading()) * std::exp((k - n) * log_c);
            companion(0, n - 1 - k) = -scaled;
        }
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        balance(companion);

        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorCode::ConvergenceFailure, "companion eigenvalue iteration did not converge");
        }
        const Polynomial dq = q.derivative();
        std::vector<Complex> found;
        found.reserve(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            found.push_back(polish(q, dq, c * solver.eigenvalues()[i]));
        }
        symmetrize(found);
        out.roots.insert(out.roots.end(), found.begin(), found.end());
    }

    const double scale = p.max_abs_coeff();
    const int degree = p.degree();
    for (const auto& r : out.roots) {
        const double bound = tolerance::root * std::pow(1.0 + std::abs(r), degree) * scale;
        if (!(std::abs(p(r)) <= bound)) {
            throw Error(ErrorCode::ConvergenceFailure, "root backward error exceeds tolerance");
        }
    }
    return out;
}

}  // namespace dispatchsim
