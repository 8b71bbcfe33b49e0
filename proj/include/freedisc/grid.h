#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace freedisc {

/// Node values on a uniform grid over [left, left + h (n - 1)].
struct GridSignal {
  double left = 0.0;
  double h = 1.0;
  std::vector<double> values;

  GridSignal() = default;
  /// Grid over [left, right] carrying `values`; h = (right - left) / (n - 1).
  GridSignal(double left, double right, std::vector<double> values);

  static GridSignal sample(const std::function<double(double)>& f, std::size_t n, double left = 0.0,
                           double right = 1.0);

  std::size_t size() const { return values.size(); }
  double t(std::size_t i) const { return left + h * static_cast<double>(i); }
  double right() const { return t(values.size() - 1); }
  double length() const { return h * static_cast<double>(values.size() - 1); }

  /// Cell slopes (u[i+1] - u[i]) / h as a signal on the cell midpoints.
  GridSignal forward_difference() const;
};

}  // namespace freedisc
