#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dispatchsim {

using Complex = std::complex<double>;

/// Real polynomial in s, coefficients stored in ascending order
/// (coeffs()[k] multiplies s^k).
///
/// Always held in trimmed form: the highest stored coefficient is nonzero,
/// and the zero polynomial has no coefficients at all.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending);
    Polynomial(std::initializer_list<double> ascending);

    static Polynomial constant(double c);
    /// s^k
    static Polynomial monomial(std::size_t k, double c = 1.0);

    const std::vector<double>& coeffs() const noexcept { return coeffs_; }

    /// Degree of the polynomial, -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
    /// Coefficient of s^k, zero past the degree.
    double operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

    /// Largest absolute coefficient.
    double max_abs_coeff() const noexcept;

    /// Number of exact zero roots (multiplicity of the s-factor).
    std::size_t origin_multiplicity() const noexcept;
    /// Divide out s^k; the lowest k coefficients must be exactly zero.
    Polynomial shifted_down(std::size_t k) const;

    double operator()(double s) const noexcept;
    Complex operator()(Complex s) const noexcept;
    /// Sum of |c_k| |s|^k, the magnitude scale of the evaluated terms.
    double term_scale(double abs_s) const noexcept;

    Polynomial derivative() const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(double k);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double k) { return a *= k; }
    friend Polynomial operator*(double k, Polynomial a) { return a *= k; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();

    std::vector<double> coeffs_;
};

/// Complex roots of a polynomial, repeated according to multiplicity.
struct PoleSet {
    std::vector<Complex> roots;

    double max_real_part() const;
};

namespace tolerance {
inline constexpr double stability = 1e-7;  // rad/s, on pole real parts
inline constexpr double axis = 1e-12;      // relative, on |den(jw)|
inline constexpr double root = 1e-8;       // backward error bound
}  // namespace tolerance

/// Roots of p via eigenvalues of its balanced companion matrix, followed by
/// Newton polishing against the original coefficients. Exact zero roots are
/// split off before the eigenproblem. Throws ConvergenceFailure when the
/// backward-error bound |p(r)| <= root_tol (1+|r|)^n max|c| is not met.
PoleSet find_roots(const Polynomial& p);

/// Polynomial with the given roots and leading coefficient. Roots must
/// appear in conjugate pairs; the result is real.
Polynomial poly_from_roots(std::span<const Complex> roots, double leading = 1.0);

}  // namespace dispatchsim
