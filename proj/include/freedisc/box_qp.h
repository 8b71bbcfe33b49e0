#pragma once

#include <Eigen/Dense>

namespace freedisc {

struct BoxQpOptions {
  int max_iterations = 20000;
  /// Stop when the projected-gradient step is below tolerance * (1 + |q|_inf).
  double tolerance = 1e-13;
  /// Run the active-set polish after the projected-gradient phase.
  bool polish = true;
};

struct BoxQpResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Infinity norm of proj(x - g) - x at the returned point.
  double projected_gradient = 0.0;
};

/// Minimizes 0.5 x^T P x + q^T x subject to lower <= x <= upper, with P symmetric positive
/// semidefinite. Bounds may be infinite and may coincide (fixed variables).
///
/// Projected gradient with Barzilai-Borwein steps and a nonmonotone safeguard, followed by a
/// primal active-set polish on the face identified by the gradient phase. Intended for
/// small dense problems; the problem must be bounded below on the box.
BoxQpResult solve_box_qp(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                         const BoxQpOptions& options = {});

}  // namespace freedisc
