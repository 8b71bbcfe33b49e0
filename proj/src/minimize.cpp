#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "freedisc/functional.h"

namespace freedisc {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double inf_norm(const std::vector<double>& g, const std::vector<bool>& pinned) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!pinned[i]) m = std::max(m, std::fabs(g[i]));
  }
  return m;
}

// Per-cell override of the tangent weight: the saturated branch (weight 0, constant b/eps)
// or the quadratic branch. Both still majorize the potential.
enum class CellMode : signed char { kTangent, kSaturated, kQuadratic };

// Minimizes the quadratic majorant at u: tangent weights on the cells, plus the fixed
// perturbation block and fidelity diagonal. Pinned rows become identity rows.
class MajorantSolver {
 public:
  MajorantSolver(const GridSignal& u0, const EnergyParams& p, const MinimizeOptions& opts)
      : p_(p), pinned_(u0.size(), false) {
    const std::size_t n = u0.size();
    pinned_.front() = opts.pin_left;
    pinned_.back() = opts.pin_right;
    const auto st = difference_stencil(p.k);
    const double pert = 2.0 * p.derivative_weight * std::pow(p.eps, 2 * p.k - 1) * u0.h * std::pow(u0.h, -2 * p.k);
    std::vector<Triplet> fixed;
    fixed.reserve((n - p.k) * (p.k + 1) * (p.k + 1) + n);
    for (std::size_t i = 0; i + p.k < n; ++i) {
      for (int a = 0; a <= p.k; ++a) {
        for (int b = 0; b <= p.k; ++b) {
          fixed.emplace_back(static_cast<int>(i + a), static_cast<int>(i + b), pert * st[a] * st[b]);
        }
      }
    }
    fixed_rhs_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      // explicit zeros keep the diagonal in the pattern when lambda = 0
      fixed.emplace_back(static_cast<int>(i), static_cast<int>(i), 2.0 * p.lambda * u0.h);
      if (p.lambda > 0.0) fixed_rhs_[static_cast<Eigen::Index>(i)] = 2.0 * p.lambda * u0.h * p.data->values[i];
    }
    fixed_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    fixed_.setFromTriplets(fixed.begin(), fixed.end());
  }

  const std::vector<bool>& pinned() const { return pinned_; }

  // Minimizer of the majorant at u; empty on factorization failure.
  std::vector<double> solve(const GridSignal& u, const std::vector<CellMode>* mode = nullptr) {
    const auto n = static_cast<Eigen::Index>(u.size());
    const double h = u.h;
    // tridiagonal cell part, assembled column by column
    SparseMatrix cells(n, n);
    cells.reserve(Eigen::VectorXi::Constant(n, 3));
    std::vector<double> c(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const CellMode m = mode ? (*mode)[i] : CellMode::kTangent;
      const double w = m == CellMode::kSaturated   ? 0.0
                       : m == CellMode::kQuadratic ? p_.potential.weight(0.0, p_.eps, p_.smoothing)
                                                   : p_.potential.weight((u.values[i + 1] - u.values[i]) / h, p_.eps, p_.smoothing);
      c[i] = 2.0 * w / h;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double left = j > 0 ? c[j - 1] : 0.0, right = j + 1 < n ? c[j] : 0.0;
      if (j > 0) cells.insert(j - 1, j) = -left;
      cells.insert(j, j) = left + right;
      if (j + 1 < n) cells.insert(j + 1, j) = -right;
    }
    SparseMatrix matrix = fixed_ + cells;
    Eigen::VectorXd rhs = fixed_rhs_;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!pinned_[i]) continue;
      // move the pinned column to the right-hand side, then make row and column identity
      for (SparseMatrix::InnerIterator it(matrix, i); it; ++it) {
        if (it.row() != i && !pinned_[it.row()]) rhs[it.row()] -= it.value() * u.values[i];
      }
      for (Eigen::Index j = std::max<Eigen::Index>(0, i - p_.k); j <= std::min(n - 1, i + p_.k); ++j) {
        for (SparseMatrix::InnerIterator it(matrix, j); it; ++it) {
          if (j == i || it.row() == i) it.valueRef() = (j == i && it.row() == i) ? 1.0 : 0.0;
        }
      }
      rhs[i] = u.values[i];
    }
    if (!pattern_ready_) {
      solver_.analyzePattern(matrix);
      pattern_ready_ = true;
    }
    solver_.factorize(matrix);
    if (solver_.info() != Eigen::Success) return {};
    Eigen::VectorXd x = solver_.solve(rhs);
    // one step of iterative refinement; the system is stiff at small eps
    x += solver_.solve(rhs - matrix * x);
    return std::vector<double>(x.data(), x.data() + x.size());
  }

 private:
  const EnergyParams& p_;
  std::vector<bool> pinned_;
  SparseMatrix fixed_;
  Eigen::VectorXd fixed_rhs_;
  // banded matrix: the natural ordering has no fill outside the band
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>> solver_;
  bool pattern_ready_ = false;
};

void descend(MinimizeResult& result, const EnergyParams& p, const MinimizeOptions& opts, MajorantSolver& solver) {
  const std::size_t n = result.u.size();
  const auto& pinned = solver.pinned();
  double energy = result.energy_trace.back();
  std::vector<double> g = gradient(result.u, p);
  result.gradient_norm = inf_norm(g, pinned);
  result.status = MinimizeStatus::kIterationCap;
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (result.gradient_norm <= opts.tolerance) {
      result.status = MinimizeStatus::kConverged;
      break;
    }
    result.iterations = it + 1;
    const std::vector<double> x = solver.solve(result.u);
    if (x.empty()) {
      result.status = MinimizeStatus::kLineSearchFailure;
      break;
    }
    std::vector<double> d(n);
    double slope = 0.0, step_norm = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = pinned[i] ? 0.0 : x[i] - result.u.values[i];
      slope += g[i] * d[i];
      step_norm = std::max(step_norm, std::fabs(d[i]));
      scale = std::max(scale, std::fabs(result.u.values[i]));
    }
    // u reproduces itself through the majorant: the remaining gradient is rounding noise
    if (step_norm <= 8.0 * std::numeric_limits<double>::epsilon() * scale) {
      result.status = MinimizeStatus::kStationary;
      break;
    }
    if (!(slope < 0.0)) {
      result.status = MinimizeStatus::kLineSearchFailure;
      break;
    }
    double step = 1.0;
    bool accepted = false;
    GridSignal trial = result.u;
    double trial_energy = energy;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) trial.values[i] = result.u.values[i] + step * d[i];
      trial_energy = evaluate(trial, p);
      if (trial_energy <= energy + opts.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.status = MinimizeStatus::kLineSearchFailure;
      break;
    }
    result.u = std::move(trial);
    energy = trial_energy;
    result.energy_trace.push_back(energy);
    g = gradient(result.u, p);
    result.gradient_norm = inf_norm(g, pinned);
  }
  if (result.status == MinimizeStatus::kIterationCap && result.gradient_norm <= opts.tolerance) {
    result.status = MinimizeStatus::kConverged;
  }
  result.energy = energy;
}

// Fixed points of the MM iteration keep their saturated set, so the width of a transition
// stays where the start put it. Moves each end of every saturated run by one cell while
// that lowers the energy.
void refine_saturation(MinimizeResult& best, const EnergyParams& p, const MinimizeOptions& opts, MajorantSolver& solver) {
  if (!best.converged()) return;
  const std::size_t cells = best.u.size() - 1;
  const auto saturated_cells = [&](const GridSignal& u) {
    std::vector<CellMode> mode(cells, CellMode::kTangent);
    for (std::size_t c = 0; c < cells; ++c) {
      if (p.potential.weight((u.values[c + 1] - u.values[c]) / u.h, p.eps, p.smoothing) == 0.0) {
        mode[c] = CellMode::kSaturated;
      }
    }
    return mode;
  };
  // Moves are tried for the run ends in a fixed order; the last successful kind goes first.
  enum Move { kGrowLeft, kGrowRight, kShrinkLeft, kShrinkRight };
  int preferred = kGrowLeft;
  const int max_moves = 4 * static_cast<int>(cells);
  for (int moves = 0; moves < max_moves;) {
    const std::vector<CellMode> base = saturated_cells(best.u);
    struct Candidate {
      int kind;
      std::size_t cell;
      CellMode mode;
    };
    std::vector<Candidate> candidates;
    for (std::size_t c = 0; c < cells;) {
      if (base[c] != CellMode::kSaturated) {
        ++c;
        continue;
      }
      std::size_t e = c;
      while (e + 1 < cells && base[e + 1] == CellMode::kSaturated) ++e;
      if (c > 0) candidates.push_back({kGrowLeft, c - 1, CellMode::kSaturated});
      if (e + 1 < cells) candidates.push_back({kGrowRight, e + 1, CellMode::kSaturated});
      candidates.push_back({kShrinkLeft, c, CellMode::kQuadratic});
      if (e > c) candidates.push_back({kShrinkRight, e, CellMode::kQuadratic});
      c = e + 1;
    }
    std::stable_partition(candidates.begin(), candidates.end(), [&](const Candidate& cand) { return cand.kind == preferred; });
    bool improved = false;
    std::vector<CellMode> mode = base;
    for (const auto& cand : candidates) {
      mode[cand.cell] = cand.mode;
      std::vector<double> x = solver.solve(best.u, &mode);
      mode[cand.cell] = base[cand.cell];
      if (x.empty()) continue;
      MinimizeResult trial;
      trial.u = best.u;
      trial.u.values = std::move(x);
      const double e = evaluate(trial.u, p);
      if (!(e < best.energy - 1e-14 * std::fabs(best.energy))) continue;
      trial.energy_trace = best.energy_trace;
      trial.energy_trace.push_back(e);
      descend(trial, p, opts, solver);
      if (!trial.converged() || !(trial.energy < best.energy)) continue;
      trial.iterations += best.iterations + 1;
      best = std::move(trial);
      preferred = cand.kind;
      improved = true;
      ++moves;
      break;
    }
    if (!improved) break;
  }
}

bool better(const MinimizeResult& a, const MinimizeResult& b) {
  if (a.converged() != b.converged()) return a.converged();
  return a.energy < b.energy;
}

}  // namespace

MinimizeResult minimize(const GridSignal& u0, const EnergyParams& p, const MinimizeOptions& opts) {
  p.validate(u0);
  if (p.lambda == 0.0 && !opts.pin_left && !opts.pin_right) {
    throw std::invalid_argument("minimize: lambda = 0 needs a pinned endpoint");
  }
  if (!(opts.tolerance > 0.0) || opts.max_iterations < 1) {
    throw std::invalid_argument("minimize: tolerance and max_iterations must be positive");
  }
  MajorantSolver solver(u0, p, opts);
  const double e0 = evaluate(u0, p);

  MinimizeResult best;
  best.u = u0;
  best.energy_trace = {e0};
  descend(best, p, opts, solver);
  if (!opts.multistart) return best;

  // Restarts: the first majorant treats every cell within w/2 of an above-threshold run of
  // u0 as saturated, for w = 2h, 4h, ... up to a quarter of the domain.
  const auto runs = detect_transitions(u0, p).intervals;
  if (runs.empty()) return best;
  const std::size_t cells = u0.size() - 1;
  std::vector<MinimizeResult> seeds;
  for (double w = 2.0 * u0.h; w <= 0.25 * u0.length(); w *= 2.0) {
    const auto reach = static_cast<std::size_t>(std::ceil(0.5 * w / u0.h));
    std::vector<CellMode> mode(cells, CellMode::kTangent);
    for (const auto& r : runs) {
      const std::size_t lo = r.first_node > reach ? r.first_node - reach : 0;
      const std::size_t hi = std::min(cells - 1, r.last_node - 1 + reach);
      for (std::size_t c = lo; c <= hi; ++c) mode[c] = CellMode::kSaturated;
    }
    std::vector<double> x = solver.solve(u0, &mode);
    if (x.empty()) continue;
    MinimizeResult seed;
    seed.u = u0;
    seed.u.values = std::move(x);
    const double e = evaluate(seed.u, p);
    if (!(e < e0)) continue;
    seed.energy_trace = {e0, e};
    seeds.push_back(std::move(seed));
  }
  // Only the most promising seeds are descended.
  std::sort(seeds.begin(), seeds.end(),
            [](const MinimizeResult& a, const MinimizeResult& b) { return a.energy_trace.back() < b.energy_trace.back(); });
  if (seeds.size() > 3) seeds.resize(3);
  for (auto& candidate : seeds) {
    descend(candidate, p, opts, solver);
    candidate.iterations += 1;
    if (better(candidate, best)) best = std::move(candidate);
  }
  refine_saturation(best, p, opts, solver);
  return best;
}

}  // namespace freedisc
