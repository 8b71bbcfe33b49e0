#include "freedisc/scalar_search.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/tools/roots.hpp>

namespace freedisc {

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double tolerance) {
  if (!(hi > lo)) throw std::invalid_argument("golden_section_minimize: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (b - a > tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
    if (evals > 10000) break;
  }
  return fc <= fd ? ScalarMinimum{c, fc, evals} : ScalarMinimum{d, fd, evals};
}

ScalarMinimum log_seeded_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  int seeds, double log_tolerance) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_seeded_minimize: need 0 < lo < hi");
  if (seeds < 3) throw std::invalid_argument("log_seeded_minimize: need at least 3 seeds");
  const double llo = std::log(lo), lhi = std::log(hi);
  const double step = (lhi - llo) / (seeds - 1);
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < seeds; ++i) {
    const double v = f(std::exp(llo + i * step));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = llo + std::max(best - 1, 0) * step;
  const double b = llo + std::min(best + 1, seeds - 1) * step;
  ScalarMinimum refined =
      golden_section_minimize([&](double lx) { return f(std::exp(lx)); }, a, b, log_tolerance);
  refined.evaluations += seeds;
  refined.x = std::exp(refined.x);
  if (best_value < refined.value) {
    refined.value = best_value;
    refined.x = std::exp(llo + best * step);
  }
  return refined;
}

double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double relative_tolerance) {
  std::uintmax_t max_iter = 500;
  const auto tol = [relative_tolerance](double a, double b) {
    return std::fabs(b - a) <= relative_tolerance * std::min(std::fabs(a), std::fabs(b));
  };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, max_iter);
  return 0.5 * (r.first + r.second);
}

}  // namespace freedisc
