#pragma once

// Reference computations used only by the tests. Nothing here calls into the library.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Plain golden-section search, written independently of the library's search.
inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  const double r = 0.6180339887498949;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 400 && (b - a) > tol * (1.0 + std::fabs(a) + std::fabs(b)); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

/// Bisection for an increasing function.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Derivative of given order of sum_j c[j] t^j at t.
template <class T>
T poly_derivative(const std::vector<T>& c, T t, int order) {
  T acc(0);
  for (int j = static_cast<int>(c.size()) - 1; j >= order; --j) {
    T ff(1);
    for (int m = 0; m < order; ++m) ff *= T(j - m);
    acc = acc * t + c[j] * ff;
  }
  return acc;
}

}  // namespace oracle
