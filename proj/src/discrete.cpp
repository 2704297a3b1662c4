#include "dispatchsim/discrete.hpp"

#include <cmath>
#include <limits>

#include "dispatchsim/error.hpp"

namespace dispatchsim {

Eigen::VectorXd DiscreteStateSpace::steady_state(double u) const {
    const Eigen::Index n = order();
    if (n == 0) return {};
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - A;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (!lu.isInvertible()) throw Error(ErrorCode::InvalidArgument, "no equilibrium: pole at z = 1");
    return lu.solve(B * u);
}

Complex DiscreteStateSpace::frequency_response(double omega) const {
    const Eigen::Index n = order();
    if (n == 0) return D;
    const Complex z = std::polar(1.0, omega * dt);
    const Eigen::MatrixXcd m = z * Eigen::MatrixXcd::Identity(n, n) - A.cast<Complex>();
    const Eigen::VectorXcd x = m.partialPivLu().solve(B.cast<Complex>());
    return (C.cast<Complex>() * x)(0) + D;
}

DiscreteStateSpace discretize(const TransferFunction& tf, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample period must be positive");
    if (!tf.is_proper()) throw Error(ErrorCode::ImproperTF, "numerator degree exceeds denominator degree");

    const int n = tf.den().degree();
    DiscreteStateSpace ss;
    ss.dt = dt;
    if (n == 0) {
        ss.A.resize(0, 0);
        ss.B.resize(0);
        ss.C.resize(0);
        ss.D = tf.num()[0] / tf.den()[0];
        return ss;
    }

    const double k = 2.0 / dt;
    std::vector<Polynomial> minus(static_cast<std::size_t>(n) + 1);
    std::vector<Polynomial> plus(static_cast<std::size_t>(n) + 1);
    minus[0] = plus[0] = Polynomial::constant(1.0);
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) {
        minus[i] = minus[i - 1] * Polynomial{-1.0, 1.0};
        plus[i] = plus[i - 1] * Polynomial{1.0, 1.0};
    }

    // Multiply through by (z+1)^n so both sides are polynomials in z.
    Polynomial num_z;
    Polynomial den_z;
    double den_scale = 0.0;
    double kp = 1.0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
        const Polynomial basis = minus[i] * plus[static_cast<std::size_t>(n) - i];
        num_z += basis * (tf.num()[i] * kp);
        den_z += basis * (tf.den()[i] * kp);
        den_scale += std::abs(tf.den()[i]) * kp;
        kp *= k;
    }
    const double lead = den_z[static_cast<std::size_t>(n)];
    if (std::abs(lead) <= 1e-12 * den_scale) {
        throw Error(ErrorCode::BilinearSingularity, "continuous pole at s = 2/dt");
    }

    // Descending-power coefficients a_j (a_0 = 1) and b_j.
    auto a = [&](int j) { return den_z[static_cast<std::size_t>(n - j)] / lead; };
    auto b = [&](int j) { return num_z[static_cast<std::size_t>(n - j)] / lead; };

    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::VectorXd::Zero(n);
    ss.C = Eigen::RowVectorXd::Zero(n);
    ss.B(0) = 1.0;
    ss.D = b(0);
    for (int j = 1; j <= n; ++j) {
        ss.A(0, j - 1) = -a(j);
        ss.C(j - 1) = b(j) - b(0) * a(j);
    }
    for (int i = 1; i < n; ++i) ss.A(i, i - 1) = 1.0;
    return ss;
}

std::vector<double> simulate(const DiscreteStateSpace& sys, std::span<const double> u) {
    return simulate(sys, u, Eigen::VectorXd::Zero(sys.order()));
}

std::vector<double> simulate(const DiscreteStateSpace& sys, std::span<const double> u, Eigen::VectorXd x) {
    if (x.size() != sys.order()) throw Error(ErrorCode::InvalidArgument, "initial state has wrong dimension");
    std::vector<double> y(u.size());
    Eigen::VectorXd next(sys.order());
    for (std::size_t k = 0; k < u.size(); ++k) {
        y[k] = (sys.order() > 0 ? sys.C.dot(x) : 0.0) + sys.D * u[k];
        if (sys.order() > 0) {
            next.noalias() = sys.A * x;
            next += sys.B * u[k];
            x.swap(next);
        }
    }
    return y;
}

namespace {

struct Group {
    std::vector<Complex> roots;
};

// Conjugate pairs first, then real roots paired two at a time.
std::vector<Group> group_roots(const std::vector<Complex>& roots) {
    std::vector<Group> pairs;
    std::vector<Complex> reals;
    std::vector<Complex> upper;
    std::size_t lower = 0;
    for (const auto& r : roots) {
        if (r.imag() > 0.0) {
            upper.push_back(r);
        } else if (r.imag() < 0.0) {
            ++lower;
        } else {
            reals.push_back(r);
        }
    }
    if (upper.size() != lower) throw Error(ErrorCode::ConvergenceFailure, "roots are not conjugate-symmetric");
    for (const auto& r : upper) pairs.push_back({{r, std::conj(r)}});
    std::sort(reals.begin(), reals.end(), [](Complex x, Complex y) { return x.real() < y.real(); });
    for (std::size_t i = 0; i < reals.size(); i += 2) {
        Group g;
        g.roots.push_back(reals[i]);
        if (i + 1 < reals.size()) g.roots.push_back(reals[i + 1]);
        pairs.push_back(std::move(g));
    }
    return pairs;
}

}  // namespace

SosCascade::SosCascade(const TransferFunction& tf, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample period must be positive");
    if (!tf.is_proper()) throw Error(ErrorCode::ImproperTF, "numerator degree exceeds denominator degree");
    if (tf.is_zero()) {
        gain_ = 0.0;
        return;
    }

    // Exact s-factors common to both sides are removed, as for dc_gain.
    const std::size_t common = std::min(tf.num().origin_multiplicity(), tf.den().origin_multiplicity());
    const Polynomial num = tf.num().shifted_down(common);
    const Polynomial den = tf.den().shifted_down(common);
    gain_ = num.leading() / den.leading();

    const std::vector<Complex> zero_roots = num.degree() >= 1 ? find_roots(num).roots : std::vector<Complex>{};
    const std::vector<Complex> pole_roots = den.degree() >= 1 ? find_roots(den).roots : std::vector<Complex>{};

    const std::vector<Group> pole_groups = group_roots(pole_roots);
    std::vector<Group> zero_groups = group_roots(zero_roots);
    std::vector<std::vector<Complex>> assigned(pole_groups.size());

    // Complex zero pairs need a full second-order slot; place them first.
    std::vector<Complex> leftover_real;
    std::vector<std::vector<Complex>> complex_pairs;
    for (auto& g : zero_groups) {
        if (g.roots.front().imag() != 0.0) {
            complex_pairs.push_back(g.roots);
        } else {
            leftover_real.insert(leftover_real.end(), g.roots.begin(), g.roots.end());
        }
    }
    auto nearest = [&](Complex z, std::size_t needed) {
        std::size_t best = pole_groups.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pole_groups.size(); ++i) {
            if (pole_groups[i].roots.size() - assigned[i].size() < needed) continue;
            for (const auto& p : pole_groups[i].roots) {
                const double d = std::abs(p - z);
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
        }
        if (best == pole_groups.size()) throw Error(ErrorCode::ImproperTF, "cannot pair zeros with poles");
        return best;
    };
    for (const auto& pair : complex_pairs) {
        const std::size_t i = nearest(pair.front(), 2);
        assigned[i].insert(assigned[i].end(), pair.begin(), pair.end());
    }
    for (const auto& z : leftover_real) assigned[nearest(z, 1)].push_back(z);

    for (std::size_t i = 0; i < pole_groups.size(); ++i) {
        const TransferFunction section(poly_from_roots(assigned[i]), poly_from_roots(pole_groups[i].roots));
        Section s{discretize(section, dt), {}};
        s.x = Eigen::VectorXd::Zero(s.ss.order());
        sections_.push_back(std::move(s));
    }
}

void SosCascade::reset() {
    for (auto& s : sections_) s.x.setZero();
}

void SosCascade::reset_to_steady_state(double u) {
    double level = u * gain_;
    for (auto& s : sections_) {
        s.x = s.ss.steady_state(level);
        level = (s.ss.order() > 0 ? s.ss.C.dot(s.x) : 0.0) + s.ss.D * level;
    }
}

double SosCascade::step(double u) {
    double v = u * gain_;
    for (auto& s : sections_) {
        const double y = s.ss.C.dot(s.x) + s.ss.D * v;
        s.x = s.ss.A * s.x + s.ss.B * v;
        v = y;
    }
    return v;
}

std::vector<double> SosCascade::filter(std::span<const double> u) {
    std::vector<double> y(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) y[k] = step(u[k]);
    return y;
}

}  // namespace dispatchsim
