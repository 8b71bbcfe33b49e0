// One line per acceptance criterion: PASS/FAIL, the measured quantity, runtime and budget.
// Exits with 1 if any criterion fails.

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "freedisc/experiments.h"
#include "freedisc/functional.h"
#include "freedisc/interp.h"
#include "freedisc/piecewise.h"
#include "freedisc/profile.h"
#include "freedisc/scalar_search.h"

namespace fd = freedisc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s <= budget_s;
  const bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %2d. %s: %s (%.2f s, budget %.0f s%s)\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), s,
              budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// minimum of b T + c A T^(1-2k) by golden section in log T; never uses the closed form
double oracle_m(int k, double A, double b = 1.0, double c = 1.0) {
  const auto f = [&](double x) {
    const double T = std::exp(x);
    return b * T + c * A * std::pow(T, 1.0 - 2.0 * k);
  };
  const auto r = fd::golden_section_minimize(f, std::log(1e-4), std::log(1e4), 1e-12);
  return r.value;
}

Outcome exact_constants() {
  const fd::Rational expect[] = {1, 12, 720};
  double worst = 0.0;
  bool exact = true;
  for (int k = 1; k <= 3; ++k) {
    const auto A = fd::profile_energy_constant(k);
    exact = exact && A == expect[k - 1];
    worst = std::max(worst, rel(fd::m_k(k).energy, oracle_m(k, A.get_d())));
  }
  const double m2 = fd::m_k(2).energy, m3 = fd::m_k(3).energy;
  worst = std::max(worst, rel(m2, 4.0 / 3.0 * std::pow(36.0, 0.25)));
  worst = std::max(worst, rel(m3, 6.0 / 5.0 * std::pow(3600.0, 1.0 / 6.0)));
  worst = std::max(worst, rel(fd::m_k(1).energy, 2.0));
  return {exact && worst <= 1e-9, std::string(exact ? "A_1..A_3 = 1, 12, 720 exact" : "A_k mismatch") +
                                       fmt("; m_2 = %.9f, m_3 = %.9f; worst rel. error vs oracle %.1e", m2, m3, worst)};
}

Outcome scaling_law() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> kd(1, 6);
  std::uniform_real_distribution<double> ld(std::log(0.1), std::log(10.0));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int k = kd(rng);
    const double b = std::exp(ld(rng)), c = std::exp(ld(rng));
    const double law = std::pow(b, (2.0 * k - 1) / (2.0 * k)) * std::pow(c, 1.0 / (2.0 * k)) * fd::m_k(k).energy;
    const double direct = oracle_m(k, fd::profile_energy_constant(k).get_d(), b, c);
    worst = std::max({worst, rel(law, direct), rel(fd::m_k_general(k, b, c).energy, direct)});
  }
  return {worst <= 1e-8, fmt("20 random (k, b, c); worst rel. error vs direct minimization %.1e", worst)};
}

Outcome monotone_constrained() {
  bool ok = true;
  std::string detail;
  for (int k = 2; k <= 3; ++k) {
    const double mk = fd::m_k(k).energy;
    double prev = 0.0, last = 0.0;
    for (int N = 1; N <= 1024; N *= 2) {
      const auto r = fd::m_k_constrained(k, k - 1, N);
      ok = ok && r.converged && r.energy >= prev * (1.0 - 1e-12) && r.energy <= mk * (1.0 + 1e-12);
      prev = r.energy;
      last = r.energy;
    }
    ok = ok && rel(last, mk) <= 0.01;
    detail += fmt("%sm_%d(1024)/m_k - 1 = %.2e", detail.empty() ? "" : "; ", k, last / mk - 1.0);
  }
  return {ok, "nondecreasing over N = 1..1024, bounded; " + detail};
}

Outcome positivity() {
  double least = std::numeric_limits<double>::infinity();
  int count = 0;
  std::vector<int> Ns;
  for (int N = 1; N <= 512; N *= 2) Ns.push_back(N);
  Ns.push_back(1000);
  for (int k = 2; k <= 5; ++k) {
    for (int n = (k + 1) / 2; n <= k - 1; ++n) {
      for (int N : Ns) {
        least = std::min(least, fd::m_k_constrained(k, n, N).energy);
        ++count;
      }
    }
  }
  return {least > 1e-6, fmt("%d cases (2 <= k <= 5, 2n >= k, N <= 1000); min m_k^n(N) = %.4f", count, least)};
}

// random walk with slopes on both sides of 1/sqrt(eps), kept away from the kink
fd::GridSignal kink_free_signal(std::mt19937_64& rng, std::size_t n, double eps) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double thr = 1.0 / std::sqrt(eps), h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double s = u(rng) * thr;
    if (std::fabs(std::fabs(s) - thr) < 1e-3 * thr) s *= 1.004;
    v[i] = v[i - 1] + s * h;
  }
  return fd::GridSignal(0.0, 1.0, std::move(v));
}

Outcome gradient_check() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    fd::EnergyParams p;
    p.k = 2 + trial % 2;
    p.eps = 0.02 + 0.001 * (trial % 17);
    auto u = kink_free_signal(rng, 512, p.eps);
    if (trial % 3 == 0) {
      p.lambda = 5.0;
      p.data = kink_free_signal(rng, 512, p.eps);
    }
    const auto g = fd::gradient(u, p);
    const double delta = 1e-6;
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double keep = u.values[i];
      u.values[i] = keep + delta;
      const double ep = fd::evaluate(u, p);
      u.values[i] = keep - delta;
      const double em = fd::evaluate(u, p);
      u.values[i] = keep;
      err = std::max(err, std::fabs(g[i] - (ep - em) / (2.0 * delta)));
      scale = std::max(scale, std::fabs(g[i]));
    }
    worst = std::max(worst, err / scale);
  }
  return {worst <= 1e-6, fmt("100 signals, n = 512, k = 2, 3; worst sup-norm rel. error %.1e", worst)};
}

Outcome threshold_bound() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ed(0.005, 0.2);
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    fd::EnergyParams p;
    p.k = 2 + i % 3;
    p.eps = ed(rng);
    const auto u = kink_free_signal(rng, 128 + i % 200, p.eps);
    const auto rep = fd::detect_transitions(u, p);
    const double bound = p.eps * fd::evaluate(u, p);
    if (rep.above_threshold_measure > bound) ++violations;
    worst = std::max(worst, rep.above_threshold_measure / bound);
  }
  return {violations == 0, fmt("1000 signals; %d violations; max measure / (eps F) = %.4f", violations, worst)};
}

Outcome recovery_energy() {
  const double eps = 1.0 / 256;
  bool ok = true;
  std::string detail;
  for (int k = 2; k <= 3; ++k) {
    const auto opt = fd::m_k(k);
    const double h = eps * opt.optimal_T / 64.0;
    const auto n = static_cast<std::size_t>(std::ceil(1.0 / h)) + 1;
    const auto u = fd::recovery_sequence(fd::PiecewiseFunction::step(0.5, 0.0, 1.0), k, eps, n);
    fd::EnergyParams p;
    p.k = k;
    p.eps = eps;
    const double e = fd::evaluate(u, p);
    const double target = fd::limit_energy(fd::PiecewiseFunction::step(0.5, 0.0, 1.0), 1.0, opt.energy, k);
    ok = ok && rel(e, target) <= 0.02;
    detail += fmt("%sk = %d: %+.2f%%", detail.empty() ? "" : ", ", k, 100.0 * (e / target - 1.0));
  }
  return {ok, "eps = 2^-8, unit jump, energy vs int(u')^2 + m_k: " + detail};
}

fd::ExperimentReport sweep_z1, sweep_z16;

Outcome jump_density() {
  // the cost is divided by the data height, so the fidelity must hold u's jump near z:
  // the deficit decays like lambda^(-1/2) while the cost per jump of u barely moves
  fd::SweepPlan plan;
  plan.k = 2;
  plan.eps_list = fd::SweepPlan::default_eps_list(11);
  plan.lambda_scale = 4096.0;
  plan.signal.jump = 1.0;
  sweep_z1 = fd::run_jump_density_sweep(plan);
  plan.signal.jump = 1.0 / 16;
  sweep_z16 = fd::run_jump_density_sweep(plan);
  const double m2 = fd::m_k(2).energy;
  const auto& a = sweep_z1.records.back();
  const auto& b = sweep_z16.records.back();
  if (!a.ok || !b.ok || a.intervals.size() != 1 || b.intervals.size() != 1) {
    return {false, "finest-eps minimizer failed or has no single transition"};
  }
  const double d1 = a.transition_energy / std::sqrt(1.0);
  const double d16 = b.transition_energy / std::sqrt(1.0 / 16);
  const double ratio = d16 / d1;
  const bool ok = rel(d1, m2) <= 0.05 && rel(d16, m2) <= 0.05 && std::fabs(ratio - 1.0) <= 0.05;
  return {ok, fmt("eps = 2^-14: E_t/|z|^(1/2) = %.4f (z = 1), %.4f (z = 1/16) vs m_2 = %.4f", d1, d16, m2) +
                  fmt("; homogeneity ratio %.4f; per jump of u %.4f, %.4f", ratio, a.density, b.density)};
}

Outcome profile_shape() {
  if (sweep_z1.records.empty()) return {false, "sweep of criterion 8 missing"};
  const auto& a = sweep_z1.records.back();
  const auto& b = sweep_z16.records.back();
  if (!a.fit_error || !b.fit_error) return {false, "no single transition to fit"};
  return {*a.fit_error <= 0.05 && *b.fit_error <= 0.05,
          fmt("k = 2, eps = 2^-14: sup-norm fit error %.4f (z = 1), %.4f (z = 1/16)", *a.fit_error, *b.fit_error)};
}

Outcome ms_calibration() {
  double worst = 0.0;
  for (int k = 1; k <= 6; ++k) {
    for (double mu : {0.5, 1.0, 3.0}) {
      const double closed = std::pow(mu / fd::m_k(k).energy, 2.0 * k);
      worst = std::max(worst, rel(fd::calibrate_c_k_by_root(k, mu), closed));
    }
  }
  return {worst <= 1e-10, fmt("k = 1..6, mu in {0.5, 1, 3}; worst rel. error root vs closed form %.1e", worst)};
}

Outcome bz_normalization() {
  const auto rep = fd::run_bz_approximation(3, {1.0 / 128});
  double crease = -1.0, jump = -1.0;
  for (const auto& r : rep.bz_records) {
    if (r.target == "crease") crease = r.energy;
    if (r.target == "jump") jump = r.energy;
  }
  return {rel(crease, 1.0) <= 0.1 && rel(jump, 2.0) <= 0.1,
          fmt("k = 3, eps = 2^-7: crease %.4f (target 1), jump %.4f (target 2)", crease, jump)};
}

Outcome interpolation() {
  bool ok = true;
  std::string detail;
  for (int k = 3; k <= 4; ++k) {
    const auto a = fd::estimate_Rk(k, 10000, 42, true);
    const auto b = fd::estimate_Rk(k, 20000, 42, true);
    const auto again = fd::estimate_Rk(k, 1000, 42, false, 1);
    const auto other = fd::estimate_Rk(k, 1000, 42, false, 2);
    const bool finite = std::isfinite(a.R_hat) && std::isfinite(b.R_hat);
    const bool deterministic = again.R_hat == other.R_hat;
    const double change = rel(b.R_hat, a.R_hat);
    bool bounded = true;
    for (const auto* e : {&a, &b}) {
      // R_hat is the largest sampled ratio, so the product can miss lhs by an ulp
      for (const auto& r : e->records) bounded = bounded && r.lhs <= b.R_hat * r.rhs * (1.0 + 4.0 * DBL_EPSILON);
    }
    ok = ok && finite && deterministic && change < 0.1 && bounded;
    detail += fmt("%sR_%d: %.4g", detail.empty() ? "" : "; ", k, a.R_hat) +
              fmt(" -> %.4g (%.2f%%)", b.R_hat, 100.0 * change) + (bounded ? "" : " bound violated") +
              (deterministic ? "" : " nondeterministic");
  }
  return {ok, "10^4 -> 2*10^4 samples, seed 42; " + detail};
}

}  // namespace

int main() {
  criterion(1, "exact constants A_k, m_k", 1, exact_constants);
  criterion(2, "scaling law m_k^{b,c}", 1, scaling_law);
  criterion(3, "monotone convergence of m_k(N)", 10, monotone_constrained);
  criterion(4, "positivity of m_k^n(N)", 30, positivity);
  criterion(5, "gradient vs central differences", 10, gradient_check);
  criterion(6, "threshold measure bound", 5, threshold_bound);
  criterion(7, "recovery-sequence energy", 30, recovery_energy);
  criterion(8, "jump density, k = 2, z in {1/16, 1}", 600, jump_density);
  criterion(9, "profile-shape convergence, k = 2", 600, profile_shape);
  criterion(10, "MS calibration c_k", 1, ms_calibration);
  criterion(11, "BZ normalization, k = 3", 300, bz_normalization);
  criterion(12, "interpolation harness R_3, R_4", 120, interpolation);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
