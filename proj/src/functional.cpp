#include "freedisc/functional.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "freedisc/profile.h"

namespace freedisc {

GridSignal::GridSignal(double left_end, double right_end, std::vector<double> v)
    : left(left_end), values(std::move(v)) {
  if (values.size() < 2) throw std::invalid_argument("GridSignal: need at least 2 nodes");
  if (!(right_end > left_end)) throw std::invalid_argument("GridSignal: empty domain");
  h = (right_end - left_end) / static_cast<double>(values.size() - 1);
}

GridSignal GridSignal::sample(const std::function<double(double)>& f, std::size_t n, double left_end,
                              double right_end) {
  if (n < 2) throw std::invalid_argument("GridSignal::sample: need at least 2 nodes");
  std::vector<double> v(n);
  const double h = (right_end - left_end) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(left_end + h * static_cast<double>(i));
  return GridSignal(left_end, right_end, std::move(v));
}

GridSignal GridSignal::forward_difference() const {
  GridSignal d;
  d.left = left + 0.5 * h;
  d.h = h;
  d.values.resize(values.size() - 1);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) d.values[i] = (values[i + 1] - values[i]) / h;
  return d;
}

Potential Potential::truncated(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("Potential::truncated: a and b must be positive");
  Potential p;
  p.kind = Kind::kTruncated;
  p.a = a;
  p.b = b;
  p.alpha = a;
  p.beta = b;
  return p;
}

Potential Potential::general(std::function<double(double)> f, std::function<double(double)> f_prime,
                             double alpha, double beta) {
  if (!f) throw std::invalid_argument("Potential::general: missing f");
  if (f(0.0) != 0.0) throw std::invalid_argument("Potential::general: f(0) must be 0");
  Potential p;
  p.kind = Kind::kGeneral;
  p.f = std::move(f);
  p.f_prime = std::move(f_prime);
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

namespace {

// Blend of min{q, s}: q - (q - s + ws)^2 / (4 ws) on |q - s| < ws.
double blend_value(double q, double s, double w) {
  const double ws = w * s;
  if (ws <= 0.0) return std::min(q, s);
  if (q <= s - ws) return q;
  if (q >= s + ws) return s;
  const double d = q - s + ws;
  return q - d * d / (4.0 * ws);
}

double blend_derivative(double q, double s, double w) {
  const double ws = w * s;
  if (ws <= 0.0) return q <= s ? 1.0 : 0.0;
  if (q <= s - ws) return 1.0;
  if (q >= s + ws) return 0.0;
  return 1.0 - (q - s + ws) / (2.0 * ws);
}

}  // namespace

double Potential::value(double z, double eps, double smoothing) const {
  if (kind == Kind::kTruncated) return blend_value(a * z * z, b / eps, smoothing);
  return f(eps * z * z) / eps;
}

double Potential::weight(double z, double eps, double smoothing) const {
  if (kind == Kind::kTruncated) return a * blend_derivative(a * z * z, b / eps, smoothing);
  if (!f_prime) throw std::logic_error("Potential: general f without derivative");
  return f_prime(eps * z * z);
}

double Potential::slope(double z, double eps, double smoothing) const {
  return 2.0 * z * weight(z, eps, smoothing);
}

double Potential::threshold(double eps) const {
  if (kind == Kind::kTruncated) return std::sqrt(b / (a * eps));
  return 1.0 / std::sqrt(eps);
}

void EnergyParams::validate(const GridSignal& u) const {
  if (k < 2) throw std::invalid_argument("EnergyParams: k must be >= 2 (got " + std::to_string(k) + ")");
  if (!(eps > 0.0)) throw std::invalid_argument("EnergyParams: eps must be positive");
  if (!(derivative_weight > 0.0)) throw std::invalid_argument("EnergyParams: derivative weight must be positive");
  if (!(lambda >= 0.0)) throw std::invalid_argument("EnergyParams: lambda must be nonnegative");
  if (!(smoothing >= 0.0)) throw std::invalid_argument("EnergyParams: smoothing must be nonnegative");
  if (u.size() < static_cast<std::size_t>(2 * k + 2)) {
    throw std::invalid_argument("EnergyParams: grid has " + std::to_string(u.size()) + " nodes, order-" +
                                std::to_string(k) + " stencils need at least " + std::to_string(2 * k + 2));
  }
  if (lambda > 0.0) {
    if (!data) throw std::invalid_argument("EnergyParams: lambda > 0 requires fidelity data");
    if (data->size() != u.size()) throw std::invalid_argument("EnergyParams: fidelity data size mismatch");
  }
}

std::vector<double> difference_stencil(int k) {
  std::vector<double> c(k + 1);
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    c[j] = ((k - j) % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * (k - j) / (j + 1);
  }
  return c;
}

EnergyParts evaluate_parts(const GridSignal& u, const EnergyParams& p) {
  p.validate(u);
  const std::size_t n = u.size();
  const double h = u.h;
  const auto& v = u.values;
  EnergyParts parts;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    parts.bulk += p.potential.value((v[i + 1] - v[i]) / h, p.eps, p.smoothing) * h;
  }
  const auto st = difference_stencil(p.k);
  const double inv_hk = std::pow(h, -p.k);
  double sq = 0.0;
  for (std::size_t i = 0; i + p.k < n; ++i) {
    double d = 0.0;
    for (int j = 0; j <= p.k; ++j) d += st[j] * v[i + j];
    d *= inv_hk;
    sq += d * d;
  }
  parts.perturbation = p.derivative_weight * std::pow(p.eps, 2 * p.k - 1) * sq * h;
  if (p.lambda > 0.0) {
    const auto& g = p.data->values;
    double fid = 0.0;
    for (std::size_t i = 0; i < n; ++i) fid += (v[i] - g[i]) * (v[i] - g[i]);
    parts.fidelity = p.lambda * fid * h;
  }
  return parts;
}

double evaluate(const GridSignal& u, const EnergyParams& p) { return evaluate_parts(u, p).total(); }

std::vector<double> gradient(const GridSignal& u, const EnergyParams& p) {
  p.validate(u);
  const std::size_t n = u.size();
  const double h = u.h;
  const auto& v = u.values;
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double s = p.potential.slope((v[i + 1] - v[i]) / h, p.eps, p.smoothing);
    g[i] -= s;
    g[i + 1] += s;
  }
  const auto st = difference_stencil(p.k);
  const double inv_hk = std::pow(h, -p.k);
  const double scale = 2.0 * p.derivative_weight * std::pow(p.eps, 2 * p.k - 1) * h * inv_hk;
  for (std::size_t i = 0; i + p.k < n; ++i) {
    double d = 0.0;
    for (int j = 0; j <= p.k; ++j) d += st[j] * v[i + j];
    d *= inv_hk;
    for (int j = 0; j <= p.k; ++j) g[i + j] += scale * d * st[j];
  }
  if (p.lambda > 0.0) {
    const auto& data = p.data->values;
    for (std::size_t i = 0; i < n; ++i) g[i] += 2.0 * p.lambda * h * (v[i] - data[i]);
  }
  return g;
}

TransitionReport detect_transitions(const GridSignal& u, const EnergyParams& p, std::optional<double> merge_gap) {
  p.validate(u);
  const double gap = merge_gap.value_or(2.0 * u.h);
  const double thr = p.potential.threshold(p.eps);
  const std::size_t cells = u.size() - 1;
  const auto& v = u.values;
  TransitionReport report;
  std::vector<std::pair<std::size_t, std::size_t>> runs;  // [first cell, last cell]
  std::size_t above = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    if (std::fabs((v[c + 1] - v[c]) / u.h) < thr) continue;
    ++above;
    if (!runs.empty()) {
      const std::size_t gap_cells = c - runs.back().second - 1;
      if (static_cast<double>(gap_cells) * u.h < gap) {
        runs.back().second = c;
        continue;
      }
    }
    runs.emplace_back(c, c);
  }
  report.above_threshold_measure = static_cast<double>(above) * u.h;
  report.below_threshold_measure = static_cast<double>(cells - above) * u.h;
  for (const auto& [c0, c1] : runs) {
    TransitionInterval t;
    t.first_node = c0;
    t.last_node = c1 + 1;
    t.tau = u.t(t.first_node);
    t.sigma = u.t(t.last_node);
    t.jump = v[t.last_node] - v[t.first_node];
    report.intervals.push_back(t);
  }
  return report;
}

double bz_functional(const GridSignal& u, int k, double eps) {
  if (k < 3) throw std::invalid_argument("bz_functional: k must be >= 3");
  EnergyParams p;
  p.k = k - 1;
  p.eps = eps;
  p.derivative_weight = calibrate_c_k(k - 1, 1.0);
  return evaluate(u.forward_difference(), p);
}

std::string to_string(MinimizeStatus s) {
  switch (s) {
    case MinimizeStatus::kConverged:
      return "converged";
    case MinimizeStatus::kStationary:
      return "stationary at working precision";
    case MinimizeStatus::kIterationCap:
      return "iteration cap reached";
    case MinimizeStatus::kLineSearchFailure:
      return "line search failure";
  }
  return "unknown";
}

}  // namespace freedisc
