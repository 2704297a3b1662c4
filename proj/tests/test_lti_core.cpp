#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dispatchsim/error.hpp"
#include "dispatchsim/models.hpp"
#include "support.hpp"

using namespace dispatchsim;
using testing::rel_err;

namespace {

bool has_root_near(const PoleSet& p, Complex want, double tol) {
    return std::any_of(p.roots.begin(), p.roots.end(), [&](Complex r) { return std::abs(r - want) <= tol; });
}

}  // namespace

TEST_SUITE("lti_core") {

TEST_CASE("polynomial is kept trimmed") {
    const Polynomial p{1.0, 2.0, 0.0, 0.0};
    CHECK(p.degree() == 1);
    CHECK(p.leading() == 2.0);
    CHECK(Polynomial{0.0, 0.0}.is_zero());
    CHECK(Polynomial{}.degree() == -1);
    CHECK((Polynomial{1.0, 1.0} - Polynomial{1.0, 1.0}).is_zero());
    CHECK_THROWS_AS(Polynomial({1.0, std::nan("")}), Error);
}

TEST_CASE("polynomial arithmetic and evaluation") {
    const Polynomial a{1.0, 1.0};   // s + 1
    const Polynomial b{-1.0, 1.0};  // s - 1
    CHECK(a * b == Polynomial{-1.0, 0.0, 1.0});
    CHECK(a(2.0) == 3.0);
    CHECK((a * b)(Complex(0.0, 1.0)) == Complex(-2.0, 0.0));
    CHECK(Polynomial{0.0, 0.0, 3.0}.origin_multiplicity() == 2);
    CHECK(Polynomial{0.0, 0.0, 3.0}.shifted_down(2) == Polynomial{3.0});
    CHECK(Polynomial{1.0, 2.0, 3.0}.derivative() == Polynomial{2.0, 6.0});
}

TEST_CASE("transfer functions are stored with a monic denominator") {
    const TransferFunction g(Polynomial{2.0}, Polynomial{4.0, 2.0});
    CHECK(g.den().leading() == 1.0);
    CHECK(g.num()[0] == doctest::Approx(1.0));
    CHECK(g.den()[0] == doctest::Approx(2.0));
    CHECK_THROWS_AS(TransferFunction(Polynomial{1.0}, Polynomial{}), Error);
}

TEST_CASE("tf_add examples") {
    const TransferFunction g(Polynomial{1.0}, Polynomial{1.0, 1.0});
    const TransferFunction twice = g + g;
    for (double w : {0.01, 0.3, 1.0, 7.0}) CHECK(rel_err(twice.at(w), Complex(2.0) / Complex(1.0, w)) < 1e-12);

    const TransferFunction zero = TransferFunction::gain(0.0);
    const TransferFunction same = g + zero;
    for (double w : {0.01, 0.3, 1.0, 7.0}) CHECK(rel_err(same.at(w), g.at(w)) < 1e-15);

    // (1 - rho) 1 + rho G_b with G_b = -1 at rho = 1/2.
    const TransferFunction mix = tf_scale(TransferFunction{}, 0.5) + tf_scale(TransferFunction::gain(-1.0), 0.5);
    for (int k = 0; k < 20; ++k) CHECK(std::abs(mix.at(0.01 * (k + 1))) == 0.0);
}

TEST_CASE("tf_mul and tf_scale examples") {
    const TransferFunction integrator(Polynomial{1.0}, Polynomial::monomial(1));
    const TransferFunction differentiator(Polynomial::monomial(1), Polynomial{1.0});
    const TransferFunction g = integrator * differentiator;
    for (double w : {1e-3, 0.5, 20.0}) CHECK(rel_err(g.at(w), Complex(1.0)) < 1e-15);

    const TransferFunction p = ercot_grid();
    for (double w : {1e-3, 0.5, 20.0}) {
        CHECK(rel_err((p * TransferFunction{}).at(w), p.at(w)) < 1e-15);
        CHECK(rel_err(tf_scale(p, 0.7).at(w), 0.7 * p.at(w)) < 1e-15);
        CHECK(std::abs(tf_scale(p, 0.0).at(w)) == 0.0);
    }
}

TEST_CASE("tf_feedback examples") {
    const TransferFunction half = tf_feedback(TransferFunction{});
    CHECK(half.at(1.0).real() == doctest::Approx(0.5));
    const TransferFunction closed = tf_feedback({Polynomial{1.0}, Polynomial::monomial(1)});
    CHECK(closed.num() == Polynomial{1.0});
    CHECK(closed.den() == (Polynomial{1.0, 1.0}));
    CHECK_THROWS_AS(tf_feedback(TransferFunction::gain(-1.0)), Error);
}

TEST_CASE("poles of the grid denominator match the quadratic formula") {
    const double b = 0.4797;
    const double c = 0.147;
    const Complex disc = std::sqrt(Complex(b * b - 4.0 * c));
    const Complex r1 = (-b + disc) / 2.0;
    const Complex r2 = (-b - disc) / 2.0;
    const PoleSet p = poles(ercot_grid());
    REQUIRE(p.roots.size() == 2);
    CHECK(has_root_near(p, r1, 1e-12));
    CHECK(has_root_near(p, r2, 1e-12));
    CHECK(std::abs(p.roots[0]) == doctest::Approx(0.3834).epsilon(1e-4));
    CHECK(r1.real() == doctest::Approx(-0.23985).epsilon(1e-4));
    CHECK(std::abs(r1.imag()) == doctest::Approx(std::sqrt(0.147 - 0.23985 * 0.23985)).epsilon(1e-4));
}

TEST_CASE("repeated and undamped roots") {
    const PoleSet dbl = find_roots(Polynomial{1.0, 2.0, 1.0});
    REQUIRE(dbl.roots.size() == 2);
    for (const auto& r : dbl.roots) CHECK(std::abs(r - Complex(-1.0)) < 1e-7);

    const PoleSet pair = find_roots(Polynomial{9e-6, 0.0, 1.0});
    CHECK(has_root_near(pair, Complex(0.0, 0.003), 1e-15));
    CHECK(has_root_near(pair, Complex(0.0, -0.003), 1e-15));
    CHECK(classify(pair) == StabilityVerdict::Marginal);

    const PoleSet origin = find_roots(Polynomial{0.0, 0.0, 1.0, 1.0});
    CHECK(std::count(origin.roots.begin(), origin.roots.end(), Complex(0.0)) == 2);
}

TEST_CASE("stability verdicts") {
    CHECK(is_stable({Polynomial{1.0}, Polynomial{1.0, 1.0}}) == StabilityVerdict::Stable);
    CHECK(is_stable({Polynomial{1.0}, Polynomial{-0.1, 1.0}}) == StabilityVerdict::Unstable);
    CHECK(is_stable({Polynomial{1.0}, Polynomial{1e-8, 1.0}}) == StabilityVerdict::Marginal);
    CHECK(is_stable(TransferFunction{}) == StabilityVerdict::Stable);
}

TEST_CASE("eval_freq examples") {
    const std::vector<double> w{100.0};
    const auto hi = eval_freq(ercot_grid(), w);
    CHECK(std::abs(hi[0].value) == doctest::Approx(0.644 / 100.0).epsilon(0.05));

    const std::vector<double> one{1.0};
    const auto p = eval_freq({Polynomial{1.0}, Polynomial{1.0, 1.0}}, one);
    CHECK(std::abs(p[0].value) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(p[0].phase_deg == doctest::Approx(-45.0));

    const std::vector<double> wc{0.0004};
    const auto hp = eval_freq(butterworth2_highpass({0.0004}), wc);
    CHECK(hp[0].magnitude_db == doctest::Approx(-3.0103).epsilon(1e-4));
}

TEST_CASE("eval_freq rejects bad grids and axis poles") {
    const TransferFunction osc(Polynomial{1.0}, Polynomial{1.0, 0.0, 1.0});
    const std::vector<double> at_pole{1.0};
    CHECK_THROWS_AS(eval_freq(osc, at_pole), Error);
    try {
        (void)eval_freq(osc, at_pole);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PoleOnAxis);
    }
    const std::vector<double> decreasing{2.0, 1.0};
    CHECK_THROWS_AS(eval_freq(ercot_grid(), decreasing), Error);
    const std::vector<double> nonpositive{0.0};
    CHECK_THROWS_AS(eval_freq(ercot_grid(), nonpositive), Error);
}

TEST_CASE("phase is unwrapped along the grid") {
    // Fourth-order lag passes -180 degrees without jumping.
    const Polynomial d = Polynomial{1.0, 1.0} * Polynomial{1.0, 1.0} * Polynomial{1.0, 1.0} * Polynomial{1.0, 1.0};
    std::vector<double> w;
    for (int k = 0; k <= 60; ++k) w.push_back(std::pow(10.0, -2.0 + k / 15.0));
    const auto pts = eval_freq({Polynomial{1.0}, d}, w);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].phase_deg == doctest::Approx(-4.0 * std::atan(w[i]) * 180.0 / std::numbers::pi).epsilon(1e-9));
    }
}

TEST_CASE("dc_gain examples") {
    CHECK(dc_gain(ercot_grid()) == 1.0);
    CHECK(dc_gain(pi_compensator(1.0, 0.5)) == std::numeric_limits<double>::infinity());
    CHECK(dc_gain(butterworth2_highpass({0.0004})) == 0.0);
    // s / (s (s + 2)) -> 1/2 once the exact s-factor is removed.
    CHECK(dc_gain({Polynomial::monomial(1), Polynomial{0.0, 2.0, 1.0}}) == doctest::Approx(0.5));
}

TEST_CASE("randomized algebra, feedback, root and dc invariants") {
    std::mt19937_64 rng(11);
    double worst_add = 0.0;
    double worst_mul = 0.0;
    double worst_fb = 0.0;
    double worst_dc = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const TransferFunction a = testing::random_stable_tf(rng);
        const TransferFunction b = testing::random_stable_tf(rng);
        const TransferFunction sum = a + b;
        const TransferFunction prod = a * b;
        const TransferFunction fb = tf_feedback(a);
        for (double w : testing::random_omegas(rng, 50)) {
            const Complex av = a.at(w);
            const Complex bv = b.at(w);
            worst_add = std::max(worst_add, rel_err(sum.at(w), av + bv));
            worst_mul = std::max(worst_mul, rel_err(prod.at(w), av * bv));
            if (std::abs(1.0 + av) > 1e-6) worst_fb = std::max(worst_fb, rel_err(fb.at(w), av / (1.0 + av)));
        }
        if (a.num()[0] != 0.0) {
            worst_dc = std::max(worst_dc, std::abs(dc_gain(a) - a.at(1e-9).real()) / std::abs(dc_gain(a)));
        }

        const PoleSet p = poles(prod);
        CHECK(p.roots.size() == static_cast<std::size_t>(prod.den().degree()));
        for (const auto& r : p.roots) {
            const double bound =
                tolerance::root * std::pow(1.0 + std::abs(r), prod.den().degree()) * prod.den().max_abs_coeff();
            CHECK(std::abs(prod.den()(r)) <= bound);
            const bool paired = std::any_of(p.roots.begin(), p.roots.end(),
                                            [&](Complex q) { return std::abs(q - std::conj(r)) <= 1e-9; });
            CHECK(paired);
        }
        CHECK(is_stable(prod) == StabilityVerdict::Stable);
    }
    CHECK(worst_add <= 1e-10);
    CHECK(worst_mul <= 1e-10);
    CHECK(worst_fb <= 1e-10);
    CHECK(worst_dc <= 1e-6);
}

TEST_CASE("freq point fields are consistent") {
    std::mt19937_64 rng(5);
    const TransferFunction g = testing::random_stable_tf(rng);
    auto w = testing::random_omegas(rng, 30);
    std::sort(w.begin(), w.end());
    for (const auto& p : eval_freq(g, w)) {
        CHECK(std::pow(10.0, p.magnitude_db / 20.0) == doctest::Approx(std::abs(p.value)).epsilon(1e-9));
        CHECK(testing::wrap_deg(p.phase_deg - std::arg(p.value) * 180.0 / std::numbers::pi) ==
              doctest::Approx(0.0).epsilon(1e-9));
    }
}

}  // TEST_SUITE
