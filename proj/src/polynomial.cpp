#include "dispatchsim/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dispatchsim/error.hpp"

namespace dispatchsim {

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite polynomial coefficient");
    }
    trim();
}

Polynomial::Polynomial(std::initializer_list<double> ascending)
    : Polynomial(std::vector<double>(ascending)) {}

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<double>{c}); }

Polynomial Polynomial::monomial(std::size_t k, double c) {
    std::vector<double> v(k + 1, 0.0);
    v[k] = c;
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

std::size_t Polynomial::origin_multiplicity() const noexcept {
    std::size_t k = 0;
    while (k < coeffs_.size() && coeffs_[k] == 0.0) ++k;
    return coeffs_.empty() ? 0 : k;
}

Polynomial Polynomial::shifted_down(std::size_t k) const {
    if (k == 0) return *this;
    if (k > origin_multiplicity()) {
        throw Error(ErrorCode::InvalidArgument, "polynomial does not contain the requested s-factor");
    }
    return Polynomial(std::vector<double>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()));
}

double Polynomial::operator()(double s) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Complex Polynomial::operator()(Complex s) const noexcept {
    Complex acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Polynomial::term_scale(double abs_s) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * abs_s + std::abs(*it);
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(double k) {
    for (double& c : coeffs_) c *= k;
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> r(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(r));
}

double PoleSet::max_real_part() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& r : roots) m = std::max(m, r.real());
    return m;
}

Polynomial poly_from_roots(std::span<const Complex> roots, double leading) {
    std::vector<Complex> c{Complex(leading)};
    for (const auto& r : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    std::vector<double> real(c.size());
    std::transform(c.begin(), c.end(), real.begin(), [](Complex z) { return z.real(); });
    return Polynomial(std::move(real));
}

}  // namespace dispatchsim
