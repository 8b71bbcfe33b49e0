#pragma once

#include <map>
#include <optional>
#include <vector>

#include "freedisc/hermite.h"
#include "freedisc/polynomial.h"

namespace freedisc {

/// How a derivative order is treated at both endpoints of a transition profile.
enum class OrderConstraint { kFree, kFixed, kBoxed };

/// Boundary data for the optimal-profile problems on (-T/2, T/2).
///
/// The profile always takes the values -jump/2 and +jump/2 at the endpoints. Each
/// derivative order 1..k-1 is either fixed (to `fixed_values[order]`, default 0), boxed
/// (|v^(order)| <= bound at both ends) or free.
struct BoundarySpec {
  int k = 1;
  Rational jump{1};
  /// Entry l describes derivative order l; entry 0 is unused. Size k.
  std::vector<OrderConstraint> orders;
  double bound = 0.0;
  std::map<int, double> fixed_values;

  /// All derivative orders 1..k-1 fixed to zero.
  static BoundarySpec equality(int k, Rational jump = Rational(1));
  /// Orders 1..n boxed by 1/N, orders n+1..k-1 free.
  static BoundarySpec boxed(int k, int n, int N);
  /// Orders 1..n fixed to zero, orders n+1..k-1 free.
  static BoundarySpec partial(int k, int n);

  /// Throws std::invalid_argument naming the violated condition.
  void validate() const;
  bool is_equality() const;
};

struct ProfileResult {
  int k = 1;
  /// Highest constrained derivative order (k-1 for the equality problem).
  int n = 0;
  /// Box parameter; empty when the constraints are equalities.
  std::optional<int> N;
  double b = 1.0;
  double c = 1.0;
  double optimal_T = 0.0;
  double energy = 0.0;
  /// A_k: integral of (v^(k))^2 for the unit-length equality profile.
  Rational normalization;
  /// Optimal profile on (-optimal_T/2, optimal_T/2).
  Polynomial<double> profile;
  /// False when the outer search or an inner QP did not meet its tolerance.
  bool converged = true;
};

/// Unique degree <= 2k-1 minimizer of the integral of (v^(k))^2 for an equality spec on
/// an interval of length T. Exact in the rational overload.
Polynomial<Rational> hermite_profile(const BoundarySpec& spec, const Rational& T);
Polynomial<double> hermite_profile(const BoundarySpec& spec, double T);

/// A_k computed in exact arithmetic (k <= kExactOrderCap).
Rational profile_energy_constant(int k);
/// A_k from the floating backend; used to cross-check the exact value.
double profile_energy_constant_double(int k);

/// E(T) = b T + c A_k T^(1-2k), the energy of the scaled equality profile of length T.
double profile_length_energy(int k, double T, double b = 1.0, double c = 1.0);

/// m_k: minimum over T of T + A_k T^(1-2k), solved in closed form.
ProfileResult m_k(int k);
/// m_k^{b,c}: minimum over T of b T + c A_k T^(1-2k).
ProfileResult m_k_general(int k, double b, double c);
/// m_k^n(N): derivative orders 1..n boxed by 1/N, the others free (n = k-1 gives m_k(N)).
ProfileResult m_k_constrained(int k, int n, int N);
/// m_k^n: derivative orders 1..n fixed to zero, the others free; the N -> infinity limit.
ProfileResult m_k_partial(int k, int n);

/// For fixed T, the minimum of the integral of (v^(k))^2 under `spec` (a convex QP in the
/// endpoint derivatives). Returns the optimal left/right jets through the out-parameters.
double constrained_profile_energy(const BoundarySpec& spec, double T,
                                  std::vector<double>* left_jet = nullptr,
                                  std::vector<double>* right_jet = nullptr,
                                  bool* converged = nullptr);

/// Localized minimum |I|/eps + eps^(2k-1) * min integral of (v^(k))^2 over v with the
/// given jets (orders 0..k-1) at the two ends of an interval of the given length.
double transition_cost(int k, double eps, double length, const std::vector<double>& left_jet,
                       const std::vector<double>& right_jet);

/// c such that m_k^{1,c} = mu, closed form (mu / m_k)^(2k).
double calibrate_c_k(int k, double mu);
/// Same calibration by root finding on c -> m_k^{1,c}; independent of the closed form.
double calibrate_c_k_by_root(int k, double mu);

}  // namespace freedisc
