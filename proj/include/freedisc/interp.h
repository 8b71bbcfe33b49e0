#pragma once

#include <cstdint>
#include <vector>

#include "freedisc/grid.h"
#include "freedisc/polynomial.h"

namespace freedisc {

/// Test function on an interval, stored in the local variable s = (t - left) / |I| on [0, 1].
/// Either a single polynomial (norms in exact rational arithmetic) or a C^(k-1) spline of
/// Hermite pieces (norms by polynomial integration in floating point).
struct InterpFunction {
  std::vector<double> polynomial;
  std::vector<Polynomial<double>> spline;

  /// Squared L^2(0,1) norm of the derivative of the given order, in the local variable.
  double local_norm2(int order) const;
  /// Sup of |d/ds| sampled on a fine grid.
  double local_sup_slope() const;
};

struct InterpCase {
  int k = 3;
  int ell = 2;
  double eps = 0.5;
  double left = 0.0;
  double right = 1.0;
  InterpFunction u;
  /// Multiplies u; the ratio lhs/rhs does not depend on it.
  double amplitude = 1.0;

  double length() const { return right - left; }
  /// (2k-1)(ell-1)/(k-1).
  double gamma() const;
  /// Throws std::invalid_argument for k < 3, ell outside {2..k-1}, eps outside (0,1) or an
  /// empty interval.
  void validate() const;
};

struct InterpSides {
  double lhs = 0.0;
  /// Right-hand side without the constant R_k.
  double rhs = 0.0;
  double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

/// lhs = eps^gamma ||u^(ell)||^2, rhs = ||u'||^2 + eps^(2k-1) ||u^(k)||^2
/// + eps^gamma / |I|^(2(ell-1)) ||u'||^2, all norms on I.
InterpSides interp_sides(const InterpCase& c);

/// Same sides for a sampled signal on its whole grid, derivatives by ell-fold and k-fold
/// forward differences.
InterpSides interp_sides(const GridSignal& u, int k, int ell, double eps);

/// Localized form: lhs = ||u^(ell)||^2, rhs = eps^(-gamma) F_eps(u, I) + |I|^(-2(ell-1)) ||u'||^2
/// with F_eps(u, I) = integral min{u'^2, 1/eps} + eps^(2k-1) ||u^(k)||^2 by quadrature.
InterpSides localized_sides(const InterpCase& c);

struct InterpRecord {
  int k = 0;
  int ell = 0;
  double eps = 0.0;
  double length = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

struct RkEstimate {
  int k = 0;
  double R_hat = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<InterpRecord> records;
};

/// Random case number `index` of the stream for `seed`: a random polynomial of degree
/// <= 2k+2 (even index) or a Hermite spline with random knots (odd index), eps
/// log-uniform in (1e-4, 1), |I| log-uniform in (1e-3, 1).
InterpCase random_interp_case(int k, std::uint64_t seed, int index);

/// Max of lhs/rhs over `samples` random cases and all ell in {2..k-1}. Deterministic for a
/// given seed regardless of thread count.
RkEstimate estimate_Rk(int k, int samples, std::uint64_t seed, bool keep_records = false, int threads = 0);

}  // namespace freedisc
