#include "freedisc/interp.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "freedisc/functional.h"
#include "freedisc/hermite.h"
#include "freedisc/piecewise.h"

namespace freedisc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double horner(const std::vector<double>& c, double s, int order) {
  double acc = 0.0;
  for (int j = static_cast<int>(c.size()) - 1; j >= order; --j) {
    double ff = 1.0;
    for (int m = 0; m < order; ++m) ff *= j - m;
    acc = acc * s + c[j] * ff;
  }
  return acc;
}

// Derivative of the test function in the local variable.
double local_derivative(const InterpFunction& u, double s, int order) {
  if (!u.polynomial.empty()) return horner(u.polynomial, s, order);
  for (const auto& p : u.spline) {
    if (s <= p.right()) return p.derivative_at(s, order);
  }
  return u.spline.back().derivative_at(s, order);
}

}  // namespace

double InterpFunction::local_norm2(int order) const {
  if (!polynomial.empty()) {
    std::vector<Rational> d;
    for (std::size_t j = order; j < polynomial.size(); ++j) {
      d.push_back(Rational(polynomial[j]) * Polynomial<Rational>::falling_factorial(static_cast<int>(j), order));
    }
    Rational total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t j = 0; j < d.size(); ++j) total += d[i] * d[j] / static_cast<long>(i + j + 1);
    }
    return total.get_d();
  }
  double total = 0.0;
  for (const auto& p : spline) total += p.integrate_square(order);
  return total;
}

double InterpFunction::local_sup_slope() const {
  double m = 0.0;
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    m = std::max(m, std::fabs(local_derivative(*this, static_cast<double>(i) / samples, 1)));
  }
  return m;
}

double InterpCase::gamma() const { return (2.0 * k - 1.0) * (ell - 1.0) / (k - 1.0); }

void InterpCase::validate() const {
  if (k < 3) throw std::invalid_argument("InterpCase: k must be >= 3");
  if (ell < 2 || ell > k - 1) {
    throw std::invalid_argument("InterpCase: ell must lie in {2..k-1} (got " + std::to_string(ell) + ")");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("InterpCase: eps must lie in (0, 1)");
  if (!(right > left)) throw std::invalid_argument("InterpCase: empty interval");
  if (u.polynomial.empty() && u.spline.empty()) throw std::invalid_argument("InterpCase: no test function");
}

InterpSides interp_sides(const InterpCase& c) {
  c.validate();
  const double L = c.length(), a2 = c.amplitude * c.amplitude;
  // ||u^(j)||^2 on I = |I|^(1 - 2j) times the local norm
  const auto norm2 = [&](int j) { return a2 * std::pow(L, 1.0 - 2.0 * j) * c.u.local_norm2(j); };
  const double g = c.gamma();
  const double d1 = norm2(1);
  InterpSides s;
  s.lhs = std::pow(c.eps, g) * norm2(c.ell);
  s.rhs = d1 + std::pow(c.eps, 2 * c.k - 1) * norm2(c.k) + std::pow(c.eps, g) / std::pow(L, 2.0 * (c.ell - 1)) * d1;
  return s;
}

InterpSides interp_sides(const GridSignal& u, int k, int ell, double eps) {
  InterpCase probe;
  probe.k = k;
  probe.ell = ell;
  probe.eps = eps;
  probe.u.polynomial = {0.0};
  probe.validate();
  if (u.size() < static_cast<std::size_t>(k + 2)) throw std::invalid_argument("interp_sides: grid too small");
  const auto norm2 = [&](int order) {
    const auto st = difference_stencil(order);
    const double inv = std::pow(u.h, -order);
    double acc = 0.0;
    for (std::size_t i = 0; i + order < u.size(); ++i) {
      double d = 0.0;
      for (int j = 0; j <= order; ++j) d += st[j] * u.values[i + j];
      acc += (d * inv) * (d * inv);
    }
    return acc * u.h;
  };
  const double g = probe.gamma(), d1 = norm2(1), L = u.length();
  InterpSides s;
  s.lhs = std::pow(eps, g) * norm2(ell);
  s.rhs = d1 + std::pow(eps, 2 * k - 1) * norm2(k) + std::pow(eps, g) / std::pow(L, 2.0 * (ell - 1)) * d1;
  return s;
}

InterpSides localized_sides(const InterpCase& c) {
  c.validate();
  const double L = c.length(), amp = c.amplitude;
  const double cap = 1.0 / c.eps;
  const auto bulk_integrand = [&](double s) {
    const double d = amp * local_derivative(c.u, s, 1) / L;
    return std::min(d * d, cap);
  };
  double bulk = 0.0;
  if (!c.u.polynomial.empty()) {
    bulk = adaptive_simpson(bulk_integrand, 0.0, 1.0, 1e-12);
  } else {
    for (const auto& p : c.u.spline) bulk += adaptive_simpson(bulk_integrand, p.left(), p.right(), 1e-12);
  }
  bulk *= L;
  const auto norm2 = [&](int j) { return amp * amp * std::pow(L, 1.0 - 2.0 * j) * c.u.local_norm2(j); };
  const double energy = bulk + std::pow(c.eps, 2 * c.k - 1) * norm2(c.k);
  InterpSides s;
  s.lhs = norm2(c.ell);
  s.rhs = std::pow(c.eps, -c.gamma()) * energy + std::pow(L, -2.0 * (c.ell - 1)) * norm2(1);
  return s;
}

InterpCase random_interp_case(int k, std::uint64_t seed, int index) {
  if (k < 3) throw std::invalid_argument("random_interp_case: k must be >= 3");
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index))));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  InterpCase c;
  c.k = k;
  c.ell = 2;
  c.eps = std::pow(10.0, -4.0 * unit(rng));
  if (c.eps >= 1.0) c.eps = 0.5;
  const double length = std::pow(10.0, -3.0 * unit(rng));
  c.left = unit(rng) * (1.0 - length);
  c.right = c.left + length;
  if (index % 2 == 0) {
    const int degree = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(2 * k + 2));
    c.u.polynomial.resize(degree + 1);
    for (auto& x : c.u.polynomial) x = normal(rng);
  } else {
    const int pieces = 2 + static_cast<int>(rng() % 7);
    std::vector<double> knots{0.0, 1.0};
    for (int i = 1; i < pieces; ++i) knots.push_back(0.02 + 0.96 * unit(rng));
    std::sort(knots.begin(), knots.end());
    std::vector<std::vector<double>> jets(knots.size(), std::vector<double>(k));
    for (auto& jet : jets) {
      for (int l = 0; l < k; ++l) jet[l] = normal(rng) * std::pow(static_cast<double>(pieces), l);
    }
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double len = knots[i + 1] - knots[i];
      if (len <= 1e-9) continue;
      c.u.spline.push_back(hermite_interpolant(jets[i], jets[i + 1], len, 0.5 * (knots[i] + knots[i + 1])));
    }
  }
  return c;
}

RkEstimate estimate_Rk(int k, int samples, std::uint64_t seed, bool keep_records, int threads) {
  if (k < 3) throw std::invalid_argument("estimate_Rk: k must be >= 3");
  if (samples < 1) throw std::invalid_argument("estimate_Rk: sample count must be >= 1");
  const int ells = k - 2;
  std::vector<InterpRecord> records(static_cast<std::size_t>(samples) * ells);
  const int workers = std::max(1, threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()));
  const auto work = [&](int first) {
    for (int i = first; i < samples; i += workers) {
      InterpCase c = random_interp_case(k, seed, i);
      for (int ell = 2; ell <= k - 1; ++ell) {
        c.ell = ell;
        const InterpSides s = interp_sides(c);
        records[static_cast<std::size_t>(i) * ells + (ell - 2)] = {k, ell, c.eps, c.length(), s.lhs, s.rhs};
      }
    }
  };
  std::vector<std::future<void>> jobs;
  for (int w = 1; w < workers; ++w) jobs.push_back(std::async(std::launch::async, work, w));
  work(0);
  for (auto& j : jobs) j.get();

  RkEstimate est;
  est.k = k;
  est.samples = samples;
  est.seed = seed;
  for (const auto& r : records) est.R_hat = std::max(est.R_hat, r.ratio());
  if (keep_records) est.records = std::move(records);
  return est;
}

}  // namespace freedisc
