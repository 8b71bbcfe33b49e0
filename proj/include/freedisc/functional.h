#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "freedisc/grid.h"

namespace freedisc {

/// Bulk integrand phi_eps acting on a slope z.
///
/// Truncated: min{a z^2, b/eps}. General: (1/eps) f(eps z^2) for a nondecreasing f with
/// f(0) = 0, alpha = f'(0) and beta = lim f. `f_prime` is needed for gradients.
struct Potential {
  enum class Kind { kTruncated, kGeneral };

  Kind kind = Kind::kTruncated;
  double a = 1.0;
  double b = 1.0;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  double alpha = 1.0;
  double beta = 1.0;

  static Potential truncated(double a = 1.0, double b = 1.0);
  static Potential general(std::function<double(double)> f, std::function<double(double)> f_prime,
                           double alpha, double beta);

  /// `smoothing` > 0 replaces the kink of the truncated min by a C^1 blend over the
  /// relative width `smoothing` around a z^2 = b/eps.
  double value(double z, double eps, double smoothing = 0.0) const;
  /// d/dz of value(); at the kink the quadratic branch is used.
  double slope(double z, double eps, double smoothing = 0.0) const;
  /// slope(z) / (2 z), the weight of the tangent quadratic majorant (concave in z^2).
  double weight(double z, double eps, double smoothing = 0.0) const;
  /// Slope magnitude at which the truncated potential saturates (1/sqrt(eps) for a = b = 1).
  double threshold(double eps) const;
};

struct EnergyParams {
  int k = 2;
  double eps = 0.1;
  Potential potential = Potential::truncated();
  /// Weight c of the singular perturbation c eps^(2k-1) (u^(k))^2.
  double derivative_weight = 1.0;
  double lambda = 0.0;
  std::optional<GridSignal> data;
  double smoothing = 0.0;

  /// Throws std::invalid_argument on bad parameters or a grid too small for the stencils.
  void validate(const GridSignal& u) const;
};

/// Coefficients of the k-fold forward difference, sum_j coeff[j] u[i+j].
std::vector<double> difference_stencil(int k);

/// Discrete F_eps: sum over cells of phi(Du) h + c eps^(2k-1) sum over windows (D^k u)^2 h
/// + lambda sum over nodes (u - g)^2 h, with D the forward difference and D^k the k-fold
/// forward difference scaled by h^-k.
double evaluate(const GridSignal& u, const EnergyParams& p);

/// The three parts of evaluate(): bulk, singular perturbation, fidelity.
struct EnergyParts {
  double bulk = 0.0;
  double perturbation = 0.0;
  double fidelity = 0.0;
  double total() const { return bulk + perturbation + fidelity; }
};
EnergyParts evaluate_parts(const GridSignal& u, const EnergyParams& p);

/// Gradient of evaluate() with respect to the node values.
std::vector<double> gradient(const GridSignal& u, const EnergyParams& p);

struct MinimizeOptions {
  double tolerance = 1e-8;
  int max_iterations = 2000;
  bool pin_left = false;
  bool pin_right = false;
  double armijo = 1e-4;
  /// Also restart from seeded saturation windows around the transitions of u0 and keep
  /// the lowest-energy result.
  bool multistart = true;
};

/// kStationary: the majorant step vanished to rounding while the gradient norm stayed above
/// the tolerance, which happens when the perturbation's stiffness puts the gradient's
/// rounding floor above it.
enum class MinimizeStatus { kConverged, kStationary, kIterationCap, kLineSearchFailure };

struct MinimizeResult {
  GridSignal u;
  double energy = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  MinimizeStatus status = MinimizeStatus::kConverged;
  std::vector<double> energy_trace;
  bool converged() const { return status == MinimizeStatus::kConverged || status == MinimizeStatus::kStationary; }
};

std::string to_string(MinimizeStatus s);

/// Descent on evaluate() from u0. Each step minimizes the quadratic majorant built from
/// the tangent weights of the potential (a banded SPD solve) and is accepted through an
/// Armijo backtracking line search. Pinned endpoints keep their u0 values.
MinimizeResult minimize(const GridSignal& u0, const EnergyParams& p, const MinimizeOptions& opts = {});

struct TransitionInterval {
  std::size_t first_node = 0;
  std::size_t last_node = 0;
  double tau = 0.0;
  double sigma = 0.0;
  double jump = 0.0;
};

struct TransitionReport {
  std::vector<TransitionInterval> intervals;
  double below_threshold_measure = 0.0;
  double above_threshold_measure = 0.0;
};

/// Maximal runs of cells with |Du| >= threshold, merged across gaps shorter than
/// `merge_gap` (default 2h). Each run spans the nodes tau..sigma; its jump estimate is
/// u(sigma) - u(tau).
TransitionReport detect_transitions(const GridSignal& u, const EnergyParams& p,
                                    std::optional<double> merge_gap = std::nullopt);

/// Order-(k-1) functional with calibrated weight c_{k-1} applied to the slopes Du, which
/// is the discrete G_k of the Blake-Zisserman approximation.
double bz_functional(const GridSignal& u, int k, double eps);

}  // namespace freedisc
