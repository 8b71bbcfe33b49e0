#include "freedisc/experiments.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <future>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "freedisc/piecewise.h"
#include "freedisc/profile.h"

namespace freedisc {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

double effective_height(double z) { return z == 0.0 ? 1.0 : std::fabs(z); }

// Runs job(i) for i in [0, count) on up to `threads` workers, largest index first.
template <typename Job>
void parallel_for(std::size_t count, int threads, Job job) {
  const std::size_t workers = std::min<std::size_t>(
      count, static_cast<std::size_t>(std::max(1, threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()))));
  std::atomic<std::size_t> next{0};
  const auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) job(count - 1 - i);
  };
  std::vector<std::future<void>> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.push_back(std::async(std::launch::async, run));
  run();
  for (auto& f : pool) f.get();
}

// Linear interpolation of a grid signal, clamped to its domain.
double sample_at(const GridSignal& u, double t) {
  const double x = std::clamp((t - u.left) / u.h, 0.0, static_cast<double>(u.size() - 1));
  const std::size_t i = std::min(u.size() - 2, static_cast<std::size_t>(x));
  const double f = x - static_cast<double>(i);
  return u.values[i] * (1.0 - f) + u.values[i + 1] * f;
}

SweepRecord run_one(const SweepPlan& plan, double eps, int repetition) {
  SweepRecord rec;
  rec.k = plan.k;
  rec.eps = eps;
  rec.repetition = repetition;
  rec.seed = plan.seed + static_cast<std::uint64_t>(repetition);
  try {
    const GridSignal g = plan.data(eps, repetition);
    rec.h = g.h;
    rec.nodes = g.size();
    EnergyParams p;
    p.k = plan.k;
    p.eps = eps;
    p.derivative_weight = plan.derivative_weight;
    p.lambda = plan.lambda();
    p.data = g;
    p.smoothing = plan.smoothing;
    const MinimizeResult r = minimize(g, p, plan.options);
    rec.status = to_string(r.status);
    rec.iterations = r.iterations;
    rec.energy = r.energy;
    rec.ok = r.converged();
    if (!rec.ok) rec.error = "minimizer did not converge: " + rec.status;

    const TransitionReport tr = detect_transitions(r.u, p);
    rec.intervals = tr.intervals;
    EnergyParams q = p;
    q.lambda = 0.0;
    q.data.reset();
    double outside = 0.0;
    std::vector<char> inside(r.u.size() - 1, 0);
    for (const auto& I : tr.intervals) std::fill(inside.begin() + I.first_node, inside.begin() + I.last_node, 1);
    for (std::size_t c = 0; c + 1 < r.u.size(); ++c) {
      if (inside[c]) continue;
      const double s = (r.u.values[c + 1] - r.u.values[c]) / r.u.h;
      outside += p.potential.value(s, eps) * r.u.h;
    }
    rec.transition_energy = tr.intervals.empty() ? 0.0 : evaluate(r.u, q) - outside;
    double heights = 0.0;
    for (const auto& I : tr.intervals) heights += std::pow(std::fabs(I.jump), 1.0 / plan.k);
    rec.density = heights > 0.0 ? rec.transition_energy / heights : 0.0;
    if (tr.intervals.size() == 1) {
      rec.fit_error = profile_fit_error(r.u, tr.intervals[0], plan.k, eps, plan.derivative_weight);
    } else {
      rec.flagged = true;
    }
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

// Mean of `field` over the usable records at each eps, in plan order.
std::vector<std::pair<double, double>> per_eps(const std::vector<SweepRecord>& records, double (*field)(const SweepRecord&),
                                               bool need_fit) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < records.size();) {
    std::size_t j = i;
    double sum = 0.0;
    int count = 0;
    for (; j < records.size() && records[j].eps == records[i].eps; ++j) {
      if (!records[j].ok || (need_fit && !records[j].fit_error)) continue;
      sum += field(records[j]);
      ++count;
    }
    if (count > 0) out.emplace_back(records[i].eps, sum / count);
    i = j;
  }
  return out;
}

ReportSummary summarize(std::string label, int k, double target, const std::vector<std::pair<double, double>>& series) {
  ReportSummary s;
  s.label = std::move(label);
  s.k = k;
  s.target = target;
  if (series.empty()) return s;
  s.finest = series.back().second;
  s.extrapolated = s.finest;
  if (series.size() >= 2) {
    const auto& [e1, d1] = series[series.size() - 2];
    const auto& [e2, d2] = series.back();
    const double r = std::sqrt(e2 / e1);
    s.extrapolated = (d2 - r * d1) / (1.0 - r);
  }
  s.relative_error = target != 0.0 ? s.finest / target - 1.0 : s.finest;
  s.monotone = true;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (std::fabs(series[i].second - target) > std::fabs(series[i - 1].second - target)) s.monotone = false;
  }
  return s;
}

std::vector<SweepRecord> sweep_records(const SweepPlan& plan) {
  plan.validate();
  const std::size_t reps = static_cast<std::size_t>(plan.repetitions);
  std::vector<SweepRecord> records(plan.eps_list.size() * reps);
  parallel_for(records.size(), plan.threads, [&](std::size_t idx) {
    records[idx] = run_one(plan, plan.eps_list[idx / reps], static_cast<int>(idx % reps));
  });
  return records;
}

void fill_provenance(ExperimentReport& rep, const SweepPlan& plan, const std::string& extra = "") {
  rep.config_hash = config_hash(canonical_plan(plan) + extra);
  for (int r = 0; r < plan.repetitions; ++r) rep.seeds.push_back(plan.seed + static_cast<std::uint64_t>(r));
  rep.timestamp = utc_timestamp();
}

}  // namespace

std::vector<double> SweepPlan::default_eps_list(int count) {
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(std::ldexp(1.0, -(i + 3)));
  return out;
}

void SweepPlan::validate() const {
  if (k < 2) throw std::invalid_argument("SweepPlan: k must be >= 2");
  if (eps_list.empty()) throw std::invalid_argument("SweepPlan: empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw std::invalid_argument("SweepPlan: eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw std::invalid_argument("SweepPlan: eps list must be strictly decreasing");
    }
  }
  if (!(cells_per_transition >= 32.0)) {
    throw std::invalid_argument("SweepPlan: resolution contract needs cells_per_transition >= 32");
  }
  if (!(lambda_scale > 0.0)) throw std::invalid_argument("SweepPlan: lambda_scale must be positive");
  if (!(derivative_weight > 0.0)) throw std::invalid_argument("SweepPlan: derivative_weight must be positive");
  if (!(signal.position > 0.0 && signal.position < 1.0)) throw std::invalid_argument("SweepPlan: step position outside (0, 1)");
  if (!(smoothing >= 0.0 && smoothing < 1.0)) throw std::invalid_argument("SweepPlan: smoothing must lie in [0, 1)");
  if (!(signal.noise >= 0.0)) throw std::invalid_argument("SweepPlan: noise must be >= 0");
  if (repetitions < 1) throw std::invalid_argument("SweepPlan: repetitions must be >= 1");
}

double SweepPlan::lambda() const {
  // keeps the smooth competitor's cost z^2 sqrt(lambda) / 2 above the jump cost
  const double m = m_k_general(k, 1.0, derivative_weight).energy / m_k(2).energy;
  return lambda_scale * std::max(1.0, m * m) * std::max(1.0, std::pow(effective_height(signal.jump), -3.0));
}

double SweepPlan::optimal_T() const { return m_k_general(k, 1.0, derivative_weight).optimal_T; }

double SweepPlan::grid_step(double eps) const {
  return eps * std::pow(effective_height(signal.jump), 1.0 / k) * optimal_T() / cells_per_transition;
}

GridSignal SweepPlan::data(double eps, int repetition) const {
  const std::size_t n = static_cast<std::size_t>(std::ceil(1.0 / grid_step(eps))) + 1;
  GridSignal g = GridSignal::sample([&](double t) { return t < signal.position ? 0.0 : signal.jump; }, n);
  if (signal.noise > 0.0) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(repetition));
    std::uniform_real_distribution<double> noise(-signal.noise, signal.noise);
    for (auto& v : g.values) v += noise(rng);
  }
  return g;
}

std::string canonical_plan(const SweepPlan& plan) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "k=" << plan.k << "\neps=";
  for (double e : plan.eps_list) os << e << ',';
  os << "\ncells=" << plan.cells_per_transition << "\njump=" << plan.signal.jump << "\nposition=" << plan.signal.position
     << "\nnoise=" << plan.signal.noise << "\nlambda_scale=" << plan.lambda_scale << "\nweight=" << plan.derivative_weight
     << "\nsmoothing=" << plan.smoothing
     << "\nrepetitions=" << plan.repetitions << "\nseed=" << plan.seed << "\ntolerance=" << plan.options.tolerance
     << "\nmax_iterations=" << plan.options.max_iterations << "\nmultistart=" << plan.options.multistart << '\n';
  return os.str();
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

double profile_fit_error(const GridSignal& u, const TransitionInterval& interval, int k, double eps,
                         double derivative_weight) {
  const ProfileResult opt = m_k_general(k, 1.0, derivative_weight);
  const double T = opt.optimal_T;
  const double c = 0.5 * (interval.tau + interval.sigma);
  double zt = interval.jump;
  for (int it = 0; it < 50; ++it) {
    const double beta = eps * std::pow(std::fabs(zt), 1.0 / k);
    const double next = sample_at(u, c + 0.5 * beta * T) - sample_at(u, c - 0.5 * beta * T);
    if (next == zt) break;
    zt = next;
  }
  if (zt == 0.0) throw std::runtime_error("profile_fit_error: zero transition height");
  const double beta = eps * std::pow(std::fabs(zt), 1.0 / k);
  const double mid = 0.5 * (sample_at(u, c + 0.5 * beta * T) + sample_at(u, c - 0.5 * beta * T));
  double err = 0.0;
  const int samples = 400;
  for (int j = 0; j <= samples; ++j) {
    const double s = -0.5 * T + T * j / samples;
    err = std::max(err, std::fabs((sample_at(u, c + beta * s) - mid) / zt - opt.profile(s)));
  }
  return err;
}

ExperimentReport run_jump_density_sweep(const SweepPlan& plan) {
  ExperimentReport rep;
  rep.experiment = "jump_density_sweep";
  rep.records = sweep_records(plan);
  const double m = m_k_general(plan.k, 1.0, plan.derivative_weight).energy;
  rep.summary.push_back(summarize("density", plan.k, plan.signal.jump == 0.0 ? 0.0 : m,
                                  per_eps(rep.records, [](const SweepRecord& r) { return r.density; }, false)));
  fill_provenance(rep, plan);
  return rep;
}

ExperimentReport run_profile_fit(const SweepPlan& plan) {
  ExperimentReport rep;
  rep.experiment = "profile_fit";
  rep.records = sweep_records(plan);
  rep.summary.push_back(
      summarize("fit_error", plan.k, 0.0, per_eps(rep.records, [](const SweepRecord& r) { return *r.fit_error; }, true)));
  fill_provenance(rep, plan);
  return rep;
}

ExperimentReport run_ms_approximation(double mu, const std::vector<int>& k_list, const SweepPlan& base) {
  if (!(mu > 0.0)) throw std::invalid_argument("run_ms_approximation: mu must be positive");
  if (k_list.empty()) throw std::invalid_argument("run_ms_approximation: empty k list");
  ExperimentReport rep;
  rep.experiment = "ms_approximation";
  std::ostringstream extra;
  extra << std::setprecision(17) << "mu=" << mu << "\nks=";
  for (int k : k_list) {
    SweepPlan plan = base;
    plan.k = k;
    plan.derivative_weight = calibrate_c_k(k, mu);
    auto records = sweep_records(plan);
    const double target = mu * std::pow(std::fabs(plan.signal.jump), 1.0 / k);
    rep.summary.push_back(summarize("jump_cost", k, target,
                                    per_eps(records, [](const SweepRecord& r) { return r.transition_energy; }, false)));
    rep.records.insert(rep.records.end(), records.begin(), records.end());
    extra << k << ',';
  }
  fill_provenance(rep, base, extra.str());
  return rep;
}

namespace {

// Slope nodes for the order-(k-1) transition of a unit slope jump.
std::size_t bz_slope_nodes(int k, double eps, double cells_per_transition) {
  const double h = eps * m_k_general(k - 1, 1.0, calibrate_c_k(k - 1, 1.0)).optimal_T / cells_per_transition;
  return static_cast<std::size_t>(std::ceil(1.0 / h)) + 1;
}

// Running sum of the slope samples, placed so that its forward differences sit on the
// slope nodes.
GridSignal integrate_slope(const GridSignal& slope) {
  std::vector<double> v(slope.size() + 1, 0.0);
  for (std::size_t i = 0; i < slope.size(); ++i) v[i + 1] = v[i] + slope.h * slope.values[i];
  return GridSignal(slope.left - 0.5 * slope.h, slope.right() + 0.5 * slope.h, std::move(v));
}

}  // namespace

GridSignal bz_crease_signal(int k, double eps, double cells_per_transition) {
  if (k < 3) throw std::invalid_argument("bz_crease_signal: k must be >= 3");
  const std::size_t n = bz_slope_nodes(k, eps, cells_per_transition);
  return integrate_slope(
      recovery_sequence(PiecewiseFunction::step(0.5, 0.0, 1.0), k - 1, eps, n, calibrate_c_k(k - 1, 1.0)));
}

GridSignal bz_jump_signal(int k, double eps, double bump_width, double cells_per_transition) {
  if (k < 3) throw std::invalid_argument("bz_jump_signal: k must be >= 3");
  if (!(bump_width > 0.0 && bump_width < 0.5)) throw std::invalid_argument("bz_jump_signal: bump width outside (0, 1/2)");
  PiecewiseFunction bump;
  const double a = 0.5 - 0.5 * bump_width, b = 0.5 + 0.5 * bump_width;
  bump.pieces = {{0.0, a, {0.0}}, {a, b, {1.0}}, {b, 1.0, {0.0}}};
  bump.jumps = {{a, 0.0, 1.0}, {b, 1.0, 0.0}};
  const std::size_t n = bz_slope_nodes(k, eps, cells_per_transition);
  return integrate_slope(recovery_sequence(bump, k - 1, eps, n, calibrate_c_k(k - 1, 1.0)));
}

ExperimentReport run_bz_approximation(int k, const std::vector<double>& eps_list, const BzOptions& opts) {
  if (k < 3) throw std::invalid_argument("run_bz_approximation: k must be >= 3");
  SweepPlan check;
  check.k = k;
  check.eps_list = eps_list;
  check.cells_per_transition = opts.cells_per_transition;
  check.validate();

  ExperimentReport rep;
  rep.experiment = "bz_approximation";
  const std::size_t m = eps_list.size();
  rep.bz_records.resize(3 * m);
  parallel_for(3 * m, 0, [&](std::size_t idx) {
    const double eps = eps_list[idx / 3];
    BzRecord r;
    r.k = k;
    r.eps = eps;
    GridSignal u;
    switch (idx % 3) {
      case 0:
        r.target = "crease";
        r.expected = 1.0;
        u = bz_crease_signal(k, eps, opts.cells_per_transition);
        break;
      case 1:
        r.target = "jump";
        r.expected = 2.0;
        u = bz_jump_signal(k, eps, opts.bump_width, opts.cells_per_transition);
        break;
      default:
        r.target = "flat";
        r.expected = 0.0;
        u = GridSignal::sample([](double) { return 0.0; }, bz_slope_nodes(k, eps, opts.cells_per_transition) + 1);
    }
    r.nodes = u.size();
    r.energy = bz_functional(u, k, eps);
    rep.bz_records[idx] = r;
  });
  for (const char* target : {"crease", "jump", "flat"}) {
    std::vector<std::pair<double, double>> series;
    double expected = 0.0;
    for (const auto& r : rep.bz_records) {
      if (r.target != target) continue;
      series.emplace_back(r.eps, r.energy);
      expected = r.expected;
    }
    rep.summary.push_back(summarize(target, k, expected, series));
  }
  std::ostringstream os;
  os << std::setprecision(17) << "bz k=" << k << " bump=" << opts.bump_width << " cells=" << opts.cells_per_transition
     << " eps=";
  for (double e : eps_list) os << e << ',';
  rep.config_hash = config_hash(os.str());
  rep.timestamp = utc_timestamp();
  return rep;
}

}  // namespace freedisc
