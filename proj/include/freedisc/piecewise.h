#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "freedisc/grid.h"

namespace freedisc {

/// Polynomial piece on [a, b]; coefficients are in powers of the global variable t.
struct Piece {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> coeffs;

  double derivative(double t, int order = 0) const;
};

struct Jump {
  double t = 0.0;
  double left = 0.0;
  double right = 0.0;
  double size() const { return right - left; }
};

/// Discontinuity of u' (for Blake-Zisserman energies).
struct Crease {
  double t = 0.0;
  double dleft = 0.0;
  double dright = 0.0;
};

/// Piecewise-smooth function with its jump set S(u) and crease set S(u').
struct PiecewiseFunction {
  std::vector<Piece> pieces;
  std::vector<Jump> jumps;
  std::vector<Crease> creases;

  double left() const;
  double right() const;
  /// Drops zero jumps, then checks that pieces tile the domain and that jump and crease
  /// locations are strictly increasing and interior. Throws std::invalid_argument.
  void normalize();
  void validate() const;

  /// Value or derivative on the piece containing t; `from_left` picks the piece ending at
  /// t when t is a breakpoint.
  double derivative(double t, int order = 0, bool from_left = false) const;
  double operator()(double t) const { return derivative(t, 0, false); }

  /// Flat pieces with one jump from `low` to `high` at t0 on [a, b].
  static PiecewiseFunction step(double t0, double low, double high, double a = 0.0, double b = 1.0);
  /// A single polynomial on [a, b] without jumps.
  static PiecewiseFunction smooth(std::vector<double> coeffs, double a = 0.0, double b = 1.0);
};

/// Adaptive Simpson quadrature to the given absolute tolerance; throws std::runtime_error
/// if the recursion depth is exhausted.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tolerance = 1e-10);

/// a * integral (u')^2 + jump_constant * sum |z|^(1/k).
double limit_energy(const PiecewiseFunction& u, double a, double jump_constant, int k);

/// Recovery sequence sampled on n nodes over u's domain: each jump z at t0 is replaced by
/// the scaled optimal profile on a window of length eps |z|^(1/k) T, where (T, w) is the
/// minimal pair for m_k^{1,c} with c = derivative_weight; the pieces between windows are
/// reparametrized affinely onto the shortened intervals. Throws std::invalid_argument when
/// windows overlap or leave the domain.
GridSignal recovery_sequence(const PiecewiseFunction& u, int k, double eps, std::size_t n,
                             double derivative_weight = 1.0);

/// integral (u'')^2 + 2 #S(u) + #(S(u') \ S(u)).
double blake_zisserman_energy(const PiecewiseFunction& u);

}  // namespace freedisc
