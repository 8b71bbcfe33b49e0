#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace freedisc {

using Rational = mpq_class;

/// Converts an exact rational to the nearest double.
inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

/// Polynomial on the symmetric interval [center - half_width, center + half_width],
/// stored in monomials of the centered variable s = t - center.
///
/// The coefficient type is either `Rational` (every operation exact) or `double`.
template <class Scalar>
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::vector<Scalar> coeffs, Scalar half_width, Scalar center = Scalar(0))
      : coeffs_(std::move(coeffs)), half_width_(std::move(half_width)), center_(std::move(center)) {
    if (!(half_width_ > 0)) {
      throw std::invalid_argument("Polynomial: half-width must be positive");
    }
  }

  const std::vector<Scalar>& coefficients() const { return coeffs_; }
  const Scalar& half_width() const { return half_width_; }
  const Scalar& center() const { return center_; }
  Scalar left() const { return center_ - half_width_; }
  Scalar right() const { return center_ + half_width_; }

  /// Highest index with a nonzero coefficient; -1 for the zero polynomial.
  int degree() const {
    for (int j = static_cast<int>(coeffs_.size()) - 1; j >= 0; --j) {
      if (coeffs_[j] != 0) return j;
    }
    return -1;
  }

  Scalar operator()(const Scalar& t) const { return derivative_at(t, 0); }

  /// Value of the derivative of the given order at the absolute position t.
  Scalar derivative_at(const Scalar& t, int order) const {
    const Scalar s = t - center_;
    Scalar acc(0);
    for (int j = static_cast<int>(coeffs_.size()) - 1; j >= order; --j) {
      acc = acc * s + coeffs_[j] * falling_factorial(j, order);
    }
    return acc;
  }

  Polynomial derivative(int order) const {
    std::vector<Scalar> out;
    for (std::size_t j = order; j < coeffs_.size(); ++j) {
      out.push_back(coeffs_[j] * falling_factorial(static_cast<int>(j), order));
    }
    if (out.empty()) out.push_back(Scalar(0));
    return Polynomial(std::move(out), half_width_, center_);
  }

  /// Integral of the polynomial over its own interval.
  Scalar integrate() const {
    // Odd powers of s cancel on the symmetric interval.
    Scalar acc(0);
    Scalar hp = half_width_;  // half_width^(j+1)
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      if (j % 2 == 0) acc += Scalar(2) * coeffs_[j] * hp / Scalar(static_cast<long>(j + 1));
      hp *= half_width_;
    }
    return acc;
  }

  /// Integral over [a, b] (absolute coordinates), not restricted to the own interval.
  Scalar integrate(const Scalar& a, const Scalar& b) const {
    Scalar fa(0), fb(0);
    const Scalar sa = a - center_, sb = b - center_;
    for (int j = static_cast<int>(coeffs_.size()) - 1; j >= 0; --j) {
      fa = fa * sa + coeffs_[j] / Scalar(j + 1);
      fb = fb * sb + coeffs_[j] / Scalar(j + 1);
    }
    return fb * sb - fa * sa;
  }

  /// Integral of (p^(order))^2 over the polynomial's interval.
  Scalar integrate_square(int order) const {
    const Polynomial d = derivative(order);
    return (d * d).integrate();
  }

  Polynomial operator*(const Polynomial& other) const {
    std::vector<Scalar> out(coeffs_.size() + other.coeffs_.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
    }
    return Polynomial(std::move(out), half_width_, center_);
  }

  static Scalar falling_factorial(int j, int order) {
    Scalar f(1);
    for (int m = 0; m < order; ++m) f *= Scalar(j - m);
    return f;
  }

 private:
  std::vector<Scalar> coeffs_{Scalar(0)};
  Scalar half_width_{1};
  Scalar center_{0};
};

/// Converts a rational polynomial to floating coefficients.
inline Polynomial<double> to_double(const Polynomial<Rational>& p) {
  std::vector<double> c;
  c.reserve(p.coefficients().size());
  for (const auto& q : p.coefficients()) c.push_back(q.get_d());
  return Polynomial<double>(std::move(c), p.half_width().get_d(), p.center().get_d());
}

}  // namespace freedisc
