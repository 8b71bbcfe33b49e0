#include "freedisc/box_qp.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

namespace freedisc {

namespace {

double objective(const Eigen::MatrixXd& P, const Eigen::VectorXd& q, const Eigen::VectorXd& x) {
  return 0.5 * x.dot(P * x) + q.dot(x);
}

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

double projected_gradient_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return (project(x - g, lo, hi) - x).lpNorm<Eigen::Infinity>();
}

// Primal active-set iterations started from the face of x. Each round either moves to the
// minimizer of the current face or stops at the first blocking bound.
Eigen::VectorXd active_set_polish(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                                  const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                  Eigen::VectorXd x) {
  const Eigen::Index n = x.size();
  const double scale = 1.0 + q.lpNorm<Eigen::Infinity>() + P.lpNorm<Eigen::Infinity>();
  const double bound_tol = 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>());
  // 0 free, -1 at lower, +1 at upper
  std::vector<int> state(n, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] <= lo[i] + bound_tol) {
      state[i] = -1;
      x[i] = lo[i];
    } else if (x[i] >= hi[i] - bound_tol) {
      state[i] = 1;
      x[i] = hi[i];
    }
  }
  for (int round = 0; round < 8 * (n + 1); ++round) {
    const Eigen::VectorXd g = P * x + q;
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (state[i] == 0) free.push_back(i);
    }
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    bool kernel_direction = false;
    if (!free.empty()) {
      const auto nf = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd pff(nf, nf);
      Eigen::VectorXd gf(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        gf[a] = g[free[a]];
        for (Eigen::Index b = 0; b < nf; ++b) pff(a, b) = P(free[a], free[b]);
      }
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(pff);
      cod.setThreshold(1e-13);
      Eigen::VectorXd pf = cod.solve(-gf);
      // On a singular face an inconsistent system means the objective decreases linearly
      // along the kernel; follow the negative gradient's kernel component to a bound.
      const Eigen::VectorXd residual = pff * pf + gf;
      if (residual.lpNorm<Eigen::Infinity>() > 1e-10 * scale) {
        pf = -residual;
        kernel_direction = true;
      }
      for (Eigen::Index a = 0; a < nf; ++a) p[free[a]] = pf[a];
    }
    double t = kernel_direction ? std::numeric_limits<double>::infinity() : 1.0;
    Eigen::Index blocking = -1;
    int blocking_side = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (state[i] != 0 || p[i] == 0.0) continue;
      if (p[i] < 0.0 && std::isfinite(lo[i])) {
        const double ti = (lo[i] - x[i]) / p[i];
        if (ti < t) {
          t = std::max(ti, 0.0);
          blocking = i;
          blocking_side = -1;
        }
      } else if (p[i] > 0.0 && std::isfinite(hi[i])) {
        const double ti = (hi[i] - x[i]) / p[i];
        if (ti < t) {
          t = std::max(ti, 0.0);
          blocking = i;
          blocking_side = 1;
        }
      }
    }
    if (!std::isfinite(t)) throw std::runtime_error("solve_box_qp: objective unbounded below on the box");
    x += t * p;
    if (blocking >= 0) {
      state[blocking] = blocking_side;
      x[blocking] = blocking_side < 0 ? lo[blocking] : hi[blocking];
      continue;
    }
    // Face minimizer reached: release the bound with the worst multiplier sign.
    const Eigen::VectorXd g2 = P * x + q;
    Eigen::Index worst = -1;
    double worst_violation = 1e-12 * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lo[i] == hi[i]) continue;
      const double violation = state[i] < 0 ? -g2[i] : (state[i] > 0 ? g2[i] : 0.0);
      if (violation > worst_violation) {
        worst_violation = violation;
        worst = i;
      }
    }
    if (worst < 0) break;
    state[worst] = 0;
  }
  return x;
}

}  // namespace

BoxQpResult solve_box_qp(const Eigen::MatrixXd& P, const Eigen::VectorXd& q,
                         const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                         const BoxQpOptions& options) {
  const Eigen::Index n = q.size();
  if (P.rows() != n || P.cols() != n || lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("solve_box_qp: dimension mismatch");
  }
  if ((lower.array() > upper.array()).any()) throw std::invalid_argument("solve_box_qp: empty box");

  BoxQpResult result;
  if (n == 0) {
    result.x = Eigen::VectorXd(0);
    result.converged = true;
    return result;
  }
  const double q_scale = 1.0 + q.lpNorm<Eigen::Infinity>();
  const double p_norm = std::max(P.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  const double alpha_min = 1e-12 / p_norm, alpha_max = 1e12 / p_norm;

  Eigen::VectorXd x = project(Eigen::VectorXd::Zero(n), lower, upper);
  Eigen::VectorXd g = P * x + q;
  double f = objective(P, q, x);
  double alpha = 1.0 / p_norm;
  std::deque<double> history{f};
  constexpr std::size_t kMemory = 10;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (projected_gradient_norm(x, g, lower, upper) <= options.tolerance * q_scale) {
      result.converged = true;
      break;
    }
    const double reference = *std::max_element(history.begin(), history.end());
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    double step = alpha;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      x_new = project(x - step * g, lower, upper);
      f_new = objective(P, q, x_new);
      if (f_new <= reference + 1e-4 * g.dot(x_new - x)) break;
      step *= 0.5;
    }
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd g_new = P * x_new + q;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    alpha = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, alpha_min, alpha_max) : alpha_max;
    x = x_new;
    g = g_new;
    f = f_new;
    history.push_back(f);
    if (history.size() > kMemory) history.pop_front();
    if (s.lpNorm<Eigen::Infinity>() == 0.0) break;
  }
  result.iterations = it;

  if (options.polish) {
    // A failed polish (numerically misjudged kernel) leaves the gradient-phase iterate.
    try {
      const Eigen::VectorXd polished = active_set_polish(P, q, lower, upper, x);
      const double fp = objective(P, q, polished);
      if (fp <= f + 1e-15 * std::fabs(f)) {
        x = polished;
        f = fp;
        g = P * x + q;
      }
    } catch (const std::runtime_error&) {
    }
  }
  result.x = x;
  result.value = f;
  result.projected_gradient = projected_gradient_norm(x, g, lower, upper);
  result.converged = result.converged || result.projected_gradient <= 1e-9 * q_scale;
  return result;
}

}  // namespace freedisc
