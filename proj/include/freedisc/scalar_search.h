#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace freedisc {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimizer of f on [lo, hi]; stops when the bracket is
/// narrower than `tolerance`. Assumes f is unimodal on the bracket.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                      double tolerance);

/// Minimizes f over [lo, hi] (0 < lo < hi) working in log(x): samples `seeds` log-spaced
/// points, keeps the best one and refines it by golden-section search between its
/// neighbouring seeds. The reported minimum is the best value seen.
ScalarMinimum log_seeded_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  int seeds, double log_tolerance);

/// Root of a monotone function on [lo, hi] by TOMS 748, to relative tolerance in x.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi,
                      double relative_tolerance);

}  // namespace freedisc
