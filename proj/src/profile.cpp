#include "freedisc/profile.h"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "freedisc/box_qp.h"
#include "freedisc/scalar_search.h"

namespace freedisc {

namespace {

constexpr int kSeedCount = 64;
constexpr double kBracketFactor = 1e3;
constexpr double kLogTolerance = 1e-10;

void require_order(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
  if (k > kExactOrderCap) {
    throw std::domain_error("k=" + std::to_string(k) + " exceeds the exact-arithmetic cap " +
                            std::to_string(kExactOrderCap));
  }
}

bool all_fixed_zero(const BoundarySpec& spec) {
  for (int l = 1; l < spec.k; ++l) {
    auto it = spec.fixed_values.find(l);
    if (it != spec.fixed_values.end() && it->second != 0.0) return false;
  }
  return true;
}

template <class Scalar>
Polynomial<Scalar> equality_profile(const BoundarySpec& spec, const Scalar& T, const Scalar& jump) {
  spec.validate();
  if (!spec.is_equality()) {
    throw std::invalid_argument("hermite_profile: every derivative order must be fixed");
  }
  if (!(T > 0)) throw std::invalid_argument("hermite_profile: T must be positive");
  if (all_fixed_zero(spec)) return odd_hermite_profile<Scalar>(spec.k, jump, T);
  std::vector<Scalar> left(spec.k), right(spec.k);
  left[0] = -jump / Scalar(2);
  right[0] = jump / Scalar(2);
  for (int l = 1; l < spec.k; ++l) {
    auto it = spec.fixed_values.find(l);
    const double v = it == spec.fixed_values.end() ? 0.0 : it->second;
    left[l] = Scalar(v);
    right[l] = Scalar(v);
  }
  return hermite_interpolant(left, right, T);
}

}  // namespace

BoundarySpec BoundarySpec::equality(int k, Rational jump) {
  BoundarySpec spec;
  spec.k = k;
  spec.jump = std::move(jump);
  spec.orders.assign(std::max(k, 1), OrderConstraint::kFixed);
  return spec;
}

BoundarySpec BoundarySpec::boxed(int k, int n, int N) {
  if (N < 1) throw std::invalid_argument("N must be a positive integer, got " + std::to_string(N));
  BoundarySpec spec;
  spec.k = k;
  spec.orders.assign(std::max(k, 1), OrderConstraint::kFree);
  for (int l = 1; l <= n && l < k; ++l) spec.orders[l] = OrderConstraint::kBoxed;
  spec.bound = 1.0 / N;
  if (n < 1 || n > k - 1) {
    throw std::invalid_argument("constrained orders must satisfy 1 <= n <= k-1 (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  if (2 * n < k) {
    throw std::invalid_argument("positivity requires 2n >= k (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  return spec;
}

BoundarySpec BoundarySpec::partial(int k, int n) {
  BoundarySpec spec = boxed(k, n, 1);
  for (int l = 1; l <= n; ++l) spec.orders[l] = OrderConstraint::kFixed;
  spec.bound = 0.0;
  return spec;
}

void BoundarySpec::validate() const {
  if (k < 1) throw std::invalid_argument("BoundarySpec: k must be >= 1");
  if (static_cast<int>(orders.size()) != k) {
    throw std::invalid_argument("BoundarySpec: expected one constraint entry per order 0..k-1");
  }
  if (bound < 0.0) throw std::invalid_argument("BoundarySpec: box bound must be nonnegative");
  for (const auto& [order, value] : fixed_values) {
    if (order < 1 || order > k - 1) {
      throw std::invalid_argument("BoundarySpec: fixed order " + std::to_string(order) + " outside 1..k-1");
    }
    (void)value;
  }
}

bool BoundarySpec::is_equality() const {
  for (int l = 1; l < k; ++l) {
    if (orders[l] != OrderConstraint::kFixed) return false;
  }
  return true;
}

Polynomial<Rational> hermite_profile(const BoundarySpec& spec, const Rational& T) {
  require_order(spec.k);
  Polynomial<Rational> p = equality_profile<Rational>(spec, T, spec.jump);
  // The interpolant is unique, so matching the full jet exactly certifies it.
  const Rational half = T / 2;
  for (int l = 0; l < spec.k; ++l) {
    Rational expected_right(0), expected_left(0);
    if (l == 0) {
      expected_right = spec.jump / 2;
      expected_left = -spec.jump / 2;
    } else if (auto it = spec.fixed_values.find(l); it != spec.fixed_values.end()) {
      expected_right = expected_left = Rational(it->second);
    }
    if (p.derivative_at(half, l) != expected_right || p.derivative_at(-half, l) != expected_left) {
      throw std::logic_error("hermite_profile: boundary condition of order " + std::to_string(l) +
                             " not reproduced");
    }
  }
  return p;
}

Polynomial<double> hermite_profile(const BoundarySpec& spec, double T) {
  if (spec.k < 1) throw std::invalid_argument("k must be >= 1");
  return equality_profile<double>(spec, T, spec.jump.get_d());
}

Rational profile_energy_constant(int k) {
  require_order(k);
  static std::mutex mutex;
  static std::map<int, Rational> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(k);
  if (it == cache.end()) {
    it = cache.emplace(k, odd_hermite_profile<Rational>(k, Rational(1), Rational(1)).integrate_square(k)).first;
  }
  return it->second;
}

double profile_energy_constant_double(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  // With v^(l)(+-1/2) = 0 for 1 <= l < k, integrating by parts k-1 times leaves
  // A_k = (-1)^(k-1) v^(2k-1) * (v(1/2) - v(-1/2)), and v^(2k-1) is constant.
  const auto v = odd_hermite_profile<double>(k, 1.0, 1.0);
  return std::fabs(v.derivative_at(0.0, 2 * k - 1));
}

double profile_length_energy(int k, double T, double b, double c) {
  const double a_k = profile_energy_constant(k).get_d();
  return b * T + c * a_k * std::pow(T, 1 - 2 * k);
}

ProfileResult m_k_general(int k, double b, double c) {
  require_order(k);
  if (!(b > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("m_k_general: b and c must be positive (b=" + std::to_string(b) +
                                ", c=" + std::to_string(c) + ")");
  }
  ProfileResult r;
  r.k = k;
  r.n = k - 1;
  r.b = b;
  r.c = c;
  r.normalization = profile_energy_constant(k);
  const double a_k = r.normalization.get_d();
  // E'(T) = b - (2k-1) c A_k T^(-2k) vanishes at the unique critical point.
  r.optimal_T = std::pow((2 * k - 1) * c * a_k / b, 1.0 / (2 * k));
  r.energy = b * r.optimal_T + c * a_k * std::pow(r.optimal_T, 1 - 2 * k);
  r.profile = hermite_profile(BoundarySpec::equality(k), r.optimal_T);
  return r;
}

ProfileResult m_k(int k) { return m_k_general(k, 1.0, 1.0); }

double constrained_profile_energy(const BoundarySpec& spec, double T, std::vector<double>* left_jet,
                                  std::vector<double>* right_jet, bool* converged) {
  spec.validate();
  require_order(spec.k);
  if (!(T > 0.0)) throw std::invalid_argument("constrained_profile_energy: T must be positive");
  const int k = spec.k;
  const auto& h = hermite_energy_matrix_double(k);
  const double jump = spec.jump.get_d();

  // Unknowns: scaled derivatives y = T^l v^(l) of orders 1..k-1 at both ends.
  const int m = 2 * (k - 1);
  std::vector<int> index;  // position in the 2k Hermite basis
  index.reserve(m);
  for (int side = 0; side < 2; ++side) {
    for (int l = 1; l < k; ++l) index.push_back(side * k + l);
  }
  Eigen::VectorXd values = Eigen::VectorXd::Zero(2 * k);
  values[0] = -jump / 2;
  values[k] = jump / 2;

  Eigen::MatrixXd P(m, m);
  Eigen::VectorXd q(m), lo(m), hi(m);
  const double inf = std::numeric_limits<double>::infinity();
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) P(a, b) = 2.0 * h[index[a]][index[b]];
    q[a] = 2.0 * (h[index[a]][0] * values[0] + h[index[a]][k] * values[k]);
    const int order = index[a] % k;
    const double scale = std::pow(T, order);
    switch (spec.orders[order]) {
      case OrderConstraint::kFree:
        lo[a] = -inf;
        hi[a] = inf;
        break;
      case OrderConstraint::kBoxed:
        lo[a] = -spec.bound * scale;
        hi[a] = spec.bound * scale;
        break;
      case OrderConstraint::kFixed: {
        auto it = spec.fixed_values.find(order);
        lo[a] = hi[a] = (it == spec.fixed_values.end() ? 0.0 : it->second) * scale;
        break;
      }
    }
  }
  const double constant = h[0][0] * values[0] * values[0] + 2.0 * h[0][k] * values[0] * values[k] +
                          h[k][k] * values[k] * values[k];
  double value = constant;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  bool ok = true;
  if (m > 0) {
    const BoxQpResult qp = solve_box_qp(P, q, lo, hi);
    value += qp.value;
    y = qp.x;
    ok = qp.converged;
  }
  if (converged != nullptr) *converged = ok;
  if (left_jet != nullptr || right_jet != nullptr) {
    std::vector<double> left(k), right(k);
    left[0] = -jump / 2;
    right[0] = jump / 2;
    for (int a = 0; a < m; ++a) {
      const int order = index[a] % k;
      (index[a] < k ? left : right)[order] = y[a] / std::pow(T, order);
    }
    if (left_jet != nullptr) *left_jet = left;
    if (right_jet != nullptr) *right_jet = right;
  }
  return std::pow(T, 1 - 2 * k) * std::max(value, 0.0);
}

namespace {

ProfileResult minimize_over_length(const BoundarySpec& spec, int n, std::optional<int> N) {
  const int k = spec.k;
  const ProfileResult reference = m_k(k);
  bool all_converged = true;
  const auto energy = [&](double T) {
    bool ok = true;
    const double e = T + constrained_profile_energy(spec, T, nullptr, nullptr, &ok);
    all_converged = all_converged && ok;
    return e;
  };
  const ScalarMinimum best = log_seeded_minimize(energy, reference.optimal_T / kBracketFactor,
                                                 reference.optimal_T * kBracketFactor, kSeedCount,
                                                 kLogTolerance);
  ProfileResult r;
  r.k = k;
  r.n = n;
  r.N = N;
  r.normalization = reference.normalization;
  r.optimal_T = best.x;
  std::vector<double> left, right;
  bool ok = true;
  r.energy = r.optimal_T + constrained_profile_energy(spec, r.optimal_T, &left, &right, &ok);
  r.profile = hermite_interpolant(left, right, r.optimal_T);
  r.converged = all_converged && ok;
  return r;
}

}  // namespace

ProfileResult m_k_constrained(int k, int n, int N) {
  require_order(k);
  return minimize_over_length(BoundarySpec::boxed(k, n, N), n, N);
}

ProfileResult m_k_partial(int k, int n) {
  require_order(k);
  return minimize_over_length(BoundarySpec::partial(k, n), n, std::nullopt);
}

double transition_cost(int k, double eps, double length, const std::vector<double>& left_jet,
                       const std::vector<double>& right_jet) {
  require_order(k);
  if (!(eps > 0.0)) throw std::invalid_argument("transition_cost: eps must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("transition_cost: interval length must be positive");
  if (static_cast<int>(left_jet.size()) != k || static_cast<int>(right_jet.size()) != k) {
    throw std::invalid_argument("transition_cost: jets must contain orders 0..k-1");
  }
  return length / eps + std::pow(eps, 2 * k - 1) * hermite_energy(left_jet, right_jet, length);
}

double calibrate_c_k(int k, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("calibrate_c_k: mu must be positive");
  return std::pow(mu / m_k(k).energy, 2 * k);
}

double calibrate_c_k_by_root(int k, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("calibrate_c_k: mu must be positive");
  require_order(k);
  // c -> m_k^{1,c} is increasing; bracket the root in log c.
  const auto residual = [&](double log_c) { return m_k_general(k, 1.0, std::exp(log_c)).energy - mu; };
  double lo = -1.0, hi = 1.0;
  while (residual(lo) > 0.0) lo *= 2.0;
  while (residual(hi) < 0.0) hi *= 2.0;
  const auto f = [&](double c) { return m_k_general(k, 1.0, c).energy - mu; };
  return bracketed_root(f, std::exp(lo), std::exp(hi), 1e-15);
}

}  // namespace freedisc
