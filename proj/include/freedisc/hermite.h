#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "freedisc/polynomial.h"

namespace freedisc {

/// Largest k for which the exact Hermite machinery is run (degree 2k-1 <= 31).
inline constexpr int kExactOrderCap = 16;

namespace detail {

inline double magnitude(double x) { return std::fabs(x); }
inline double magnitude(const Rational& q) { return std::fabs(q.get_d()); }

}  // namespace detail

/// Gaussian elimination with partial pivoting.
/// With `Rational` entries the elimination is exact; any nonzero pivot would do, the
/// largest one is still picked to keep intermediate fractions small.
template <class Scalar>
std::vector<Scalar> eliminate(std::vector<std::vector<Scalar>> a, std::vector<Scalar> b) {
  const std::size_t n = b.size();
  if (a.size() != n) throw std::invalid_argument("solve_dense: dimension mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = detail::magnitude(a[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = detail::magnitude(a[r][col]);
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (a[piv][col] == 0) throw std::runtime_error("solve_dense: singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Scalar f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Scalar> x(n, Scalar(0));
  for (std::size_t i = n; i-- > 0;) {
    Scalar acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

/// Solves the square system A x = b by Gaussian elimination with partial pivoting.
/// Floating solves get two rounds of iterative refinement with long double residuals.
template <class Scalar>
std::vector<Scalar> solve_dense(const std::vector<std::vector<Scalar>>& a, const std::vector<Scalar>& b) {
  std::vector<Scalar> x = eliminate(a, b);
  if constexpr (std::is_floating_point_v<Scalar>) {
    const std::size_t n = b.size();
    for (int round = 0; round < 2; ++round) {
      std::vector<Scalar> r(n);
      for (std::size_t i = 0; i < n; ++i) {
        long double acc = b[i];
        for (std::size_t j = 0; j < n; ++j) acc -= static_cast<long double>(a[i][j]) * x[j];
        r[i] = static_cast<Scalar>(acc);
      }
      const std::vector<Scalar> dx = eliminate(a, r);
      for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
    }
  }
  return x;
}

/// Degree <= 2k-1 polynomial on an interval of the given length whose derivatives of
/// orders 0..k-1 match `left_jet` at the left endpoint and `right_jet` at the right one.
/// This is the minimizer of the integral of (v^(k))^2 among H^k functions with that jet.
template <class Scalar>
Polynomial<Scalar> hermite_interpolant(const std::vector<Scalar>& left_jet,
                                       const std::vector<Scalar>& right_jet, const Scalar& length,
                                       const Scalar& center = Scalar(0)) {
  const int k = static_cast<int>(left_jet.size());
  if (k < 1 || right_jet.size() != left_jet.size()) {
    throw std::invalid_argument("hermite_interpolant: jets must have equal nonzero length");
  }
  if (!(length > 0)) throw std::invalid_argument("hermite_interpolant: interval length must be positive");
  const Scalar h = length / Scalar(2);
  // Unknowns are the coefficients d_j of x^j with x = s/h in [-1, 1].
  const int m = 2 * k;
  std::vector<std::vector<Scalar>> a(m, std::vector<Scalar>(m, Scalar(0)));
  std::vector<Scalar> rhs(m, Scalar(0));
  Scalar hl(1);
  for (int l = 0; l < k; ++l) {
    for (int j = l; j < m; ++j) {
      const Scalar ff = Polynomial<Scalar>::falling_factorial(j, l);
      a[l][j] = ((j - l) % 2 == 0) ? Scalar(ff) : Scalar(-ff);  // x = -1
      a[k + l][j] = ff;                                          // x = +1
    }
    rhs[l] = hl * left_jet[l];
    rhs[k + l] = hl * right_jet[l];
    hl *= h;
  }
  std::vector<Scalar> d = solve_dense(std::move(a), std::move(rhs));
  Scalar hj(1);
  for (int j = 0; j < m; ++j) {
    d[j] /= hj;
    hj *= h;
  }
  return Polynomial<Scalar>(std::move(d), h, center);
}

/// Odd Hermite profile on [-length/2, length/2]: v(+-length/2) = +-jump/2 and all
/// derivatives of orders 1..k-1 vanish at both endpoints. Only odd coefficients are
/// unknown, which halves the system; the result is checked against the full jet.
template <class Scalar>
Polynomial<Scalar> odd_hermite_profile(int k, const Scalar& jump, const Scalar& length) {
  if (k < 1) throw std::invalid_argument("odd_hermite_profile: k must be >= 1");
  if (!(length > 0)) throw std::invalid_argument("odd_hermite_profile: T must be positive");
  const Scalar h = length / Scalar(2);
  std::vector<std::vector<Scalar>> a(k, std::vector<Scalar>(k, Scalar(0)));
  std::vector<Scalar> rhs(k, Scalar(0));
  rhs[0] = jump / Scalar(2);
  for (int l = 0; l < k; ++l) {
    for (int i = 0; i < k; ++i) {
      const int j = 2 * i + 1;
      if (j >= l) a[l][i] = Polynomial<Scalar>::falling_factorial(j, l);
    }
  }
  const std::vector<Scalar> odd = solve_dense(std::move(a), std::move(rhs));
  std::vector<Scalar> coeffs(2 * k, Scalar(0));
  Scalar hj = h;
  for (int i = 0; i < k; ++i) {
    coeffs[2 * i + 1] = odd[i] / hj;
    hj *= h * h;
  }
  return Polynomial<Scalar>(std::move(coeffs), h, Scalar(0));
}

/// Exact Gram matrix of the k-th derivatives of the Hermite basis on the unit interval.
///
/// Index i < k is the left-endpoint derivative of order i, index k + i the right one.
/// For an interval of length L with unscaled jet d, the profile energy is
///   integral (v^(k))^2 = L^(1-2k) * y^T H y,   y_i = L^(order(i)) * d_i.
/// Results are cached per k; the cache is thread-safe.
const std::vector<std::vector<Rational>>& hermite_energy_matrix(int k);

/// Floating copy of `hermite_energy_matrix`.
const std::vector<std::vector<double>>& hermite_energy_matrix_double(int k);

/// Integral of (v^(k))^2 for the Hermite interpolant with the given (unscaled) jets on an
/// interval of the given length, evaluated through the energy matrix.
double hermite_energy(const std::vector<double>& left_jet, const std::vector<double>& right_jet,
                      double length);

}  // namespace freedisc
