#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freedisc/functional.h"

namespace freedisc {

struct SignalSpec {
  /// Height z of the step g = z 1_{t >= position} on [0, 1].
  double jump = 1.0;
  double position = 0.5;
  /// Half-width of uniform noise added to g (0 for clean data).
  double noise = 0.0;
};

struct SweepPlan {
  int k = 2;
  std::vector<double> eps_list;
  /// h = eps |z|^(1/k) T* / cells_per_transition (|z| = 1 when z = 0).
  double cells_per_transition = 64.0;
  SignalSpec signal;
  /// Fidelity lambda = lambda_scale * max(1, (m / m_2)^2) * max(1, |z|^-3) with m the jump
  /// constant m_k^{1,c}.
  double lambda_scale = 64.0;
  /// Weight c of the singular perturbation; T* is that of m_k^{1,c}.
  double derivative_weight = 1.0;
  /// Relative width of the C^1 blend at the potential's kink (0 = exact truncation).
  double smoothing = 0.0;
  int repetitions = 1;
  std::uint64_t seed = 0;
  MinimizeOptions options;
  /// Worker count for the per-eps jobs (0 = hardware concurrency).
  int threads = 0;

  /// eps_i = 2^-(i+3) for i = 1..count.
  static std::vector<double> default_eps_list(int count);

  /// Throws std::invalid_argument unless eps_list is nonempty, positive and strictly
  /// decreasing and cells_per_transition >= 32.
  void validate() const;
  double lambda() const;
  double optimal_T() const;
  double grid_step(double eps) const;
  /// The data for one repetition; noise is drawn from a stream fixed by seed and repetition.
  GridSignal data(double eps, int repetition) const;
};

struct SweepRecord {
  int k = 2;
  double eps = 0.0;
  double h = 0.0;
  std::size_t nodes = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::string status;
  int iterations = 0;
  /// Energy with the fidelity term.
  double energy = 0.0;
  std::vector<TransitionInterval> intervals;
  /// Energy without fidelity minus the potential on cells outside the transition intervals.
  double transition_energy = 0.0;
  /// transition_energy / sum over intervals of |jump|^(1/k); 0 without intervals.
  double density = 0.0;
  std::optional<double> fit_error;
  /// Set when the interval count is not one, so no profile fit was made.
  bool flagged = false;
};

struct ReportSummary {
  std::string label;
  int k = 0;
  double target = 0.0;
  double finest = 0.0;
  /// Two-point extrapolation in eps^(1/2) from the two finest values.
  double extrapolated = 0.0;
  double relative_error = 0.0;
  /// Nonincreasing distance to the target along the list.
  bool monotone = false;
};

struct BzRecord {
  std::string target;
  int k = 3;
  double eps = 0.0;
  std::size_t nodes = 0;
  double energy = 0.0;
  double expected = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<SweepRecord> records;
  std::vector<BzRecord> bz_records;
  std::vector<ReportSummary> summary;
  std::string config_hash;
  std::vector<std::uint64_t> seeds;
  std::string timestamp;
};

/// Canonical key-value text of a plan; its FNV-1a hash is the report's config hash.
std::string canonical_plan(const SweepPlan& plan);
std::string config_hash(const std::string& text);

/// Sup-norm distance between (u - mid) / z_t on the interval's center window, rescaled by
/// beta = eps |z_t|^(1/k), and the optimal profile of m_k^{1,c}. z_t solves the fixed point
/// z_t = u(c + beta T/2) - u(c - beta T/2).
double profile_fit_error(const GridSignal& u, const TransitionInterval& interval, int k, double eps,
                         double derivative_weight = 1.0);

/// Minimizes the denoising energy for each eps and repetition (in parallel) and records
/// transition energies, densities and fit errors. Solver failures are recorded per record.
ExperimentReport run_jump_density_sweep(const SweepPlan& plan);

/// The sweep with the summary on profile-fit errors instead of densities.
ExperimentReport run_profile_fit(const SweepPlan& plan);

/// For each k calibrates c_k for mu, runs the unit-jump sweep with that weight and reports
/// the jump cost against mu |z|^(1/k). `base` supplies eps rule, signal and options.
ExperimentReport run_ms_approximation(double mu, const std::vector<int>& k_list, const SweepPlan& base);

struct BzOptions {
  double cells_per_transition = 64.0;
  /// Width of the slope bump that realizes a jump of u.
  double bump_width = 0.125;
};

/// Discrete G_k along constructed sequences: one crease (expected 1), one jump realized as
/// two unit slope transitions (expected 2) and a flat signal (expected 0).
ExperimentReport run_bz_approximation(int k, const std::vector<double>& eps_list, const BzOptions& opts = {});

/// The three constructed signals at one eps.
GridSignal bz_crease_signal(int k, double eps, double cells_per_transition = 64.0);
GridSignal bz_jump_signal(int k, double eps, double bump_width = 0.125, double cells_per_transition = 64.0);

}  // namespace freedisc
