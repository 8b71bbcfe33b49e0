#include "freedisc/piecewise.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "freedisc/profile.h"

namespace freedisc {

double Piece::derivative(double t, int order) const {
  double acc = 0.0;
  for (int j = static_cast<int>(coeffs.size()) - 1; j >= order; --j) {
    double ff = 1.0;
    for (int m = 0; m < order; ++m) ff *= j - m;
    acc = acc * t + coeffs[j] * ff;
  }
  return acc;
}

double PiecewiseFunction::left() const {
  if (pieces.empty()) throw std::invalid_argument("PiecewiseFunction: no pieces");
  return pieces.front().a;
}

double PiecewiseFunction::right() const {
  if (pieces.empty()) throw std::invalid_argument("PiecewiseFunction: no pieces");
  return pieces.back().b;
}

void PiecewiseFunction::normalize() {
  jumps.erase(std::remove_if(jumps.begin(), jumps.end(), [](const Jump& j) { return j.size() == 0.0; }),
              jumps.end());
  validate();
}

void PiecewiseFunction::validate() const {
  if (pieces.empty()) throw std::invalid_argument("PiecewiseFunction: no pieces");
  const double scale = 1e-12 * (1.0 + std::fabs(left()) + std::fabs(right()));
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!(pieces[i].b > pieces[i].a)) throw std::invalid_argument("PiecewiseFunction: empty piece");
    if (i + 1 < pieces.size() && std::fabs(pieces[i].b - pieces[i + 1].a) > scale) {
      throw std::invalid_argument("PiecewiseFunction: pieces do not tile the domain");
    }
  }
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const auto& j = jumps[i];
    if (!(j.t > left() && j.t < right())) throw std::invalid_argument("PiecewiseFunction: jump outside the open domain");
    if (i > 0 && !(j.t > jumps[i - 1].t)) throw std::invalid_argument("PiecewiseFunction: jumps not increasing");
    if (j.size() == 0.0) throw std::invalid_argument("PiecewiseFunction: zero jump");
    const double lv = derivative(j.t, 0, true), rv = derivative(j.t, 0, false);
    if (std::fabs(lv - j.left) > 1e-9 * (1.0 + std::fabs(j.left)) ||
        std::fabs(rv - j.right) > 1e-9 * (1.0 + std::fabs(j.right))) {
      throw std::invalid_argument("PiecewiseFunction: jump traces at t=" + std::to_string(j.t) +
                                  " disagree with the pieces");
    }
  }
  for (std::size_t i = 0; i < creases.size(); ++i) {
    const auto& c = creases[i];
    if (!(c.t > left() && c.t < right())) throw std::invalid_argument("PiecewiseFunction: crease outside the open domain");
    if (i > 0 && !(c.t > creases[i - 1].t)) throw std::invalid_argument("PiecewiseFunction: creases not increasing");
  }
}

double PiecewiseFunction::derivative(double t, int order, bool from_left) const {
  if (pieces.empty()) throw std::invalid_argument("PiecewiseFunction: no pieces");
  const Piece* chosen = nullptr;
  for (const auto& p : pieces) {
    if (from_left ? (t > p.a && t <= p.b) : (t >= p.a && t < p.b)) {
      chosen = &p;
      break;
    }
  }
  if (!chosen) chosen = t <= pieces.front().a ? &pieces.front() : &pieces.back();
  return chosen->derivative(t, order);
}

PiecewiseFunction PiecewiseFunction::step(double t0, double low, double high, double a, double b) {
  PiecewiseFunction u;
  u.pieces = {Piece{a, t0, {low}}, Piece{t0, b, {high}}};
  u.jumps = {Jump{t0, low, high}};
  u.normalize();
  return u;
}

PiecewiseFunction PiecewiseFunction::smooth(std::vector<double> coeffs, double a, double b) {
  PiecewiseFunction u;
  u.pieces = {Piece{a, b, std::move(coeffs)}};
  u.validate();
  return u;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw std::runtime_error("adaptive_simpson: recursion depth exhausted");
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tolerance) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tolerance, 48);
}

double limit_energy(const PiecewiseFunction& u, double a, double jump_constant, int k) {
  u.validate();
  if (k < 1) throw std::invalid_argument("limit_energy: k must be >= 1");
  double bulk = 0.0;
  const double tol = 1e-10 / static_cast<double>(u.pieces.size());
  for (const auto& p : u.pieces) {
    bulk += adaptive_simpson(
        [&](double t) {
          const double d = p.derivative(t, 1);
          return d * d;
        },
        p.a, p.b, tol);
  }
  double jumps = 0.0;
  for (const auto& j : u.jumps) jumps += std::pow(std::fabs(j.size()), 1.0 / k);
  return a * bulk + jump_constant * jumps;
}

GridSignal recovery_sequence(const PiecewiseFunction& u, int k, double eps, std::size_t n, double derivative_weight) {
  u.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("recovery_sequence: eps must be positive");
  if (n < 2) throw std::invalid_argument("recovery_sequence: need at least 2 nodes");
  const ProfileResult opt = m_k_general(k, 1.0, derivative_weight);
  const double A = u.left(), B = u.right();

  // Windows [t - half, t + half] around each jump.
  std::vector<double> half(u.jumps.size()), beta(u.jumps.size());
  for (std::size_t i = 0; i < u.jumps.size(); ++i) {
    beta[i] = eps * std::pow(std::fabs(u.jumps[i].size()), 1.0 / k);
    half[i] = 0.5 * beta[i] * opt.optimal_T;
    const double lo = u.jumps[i].t - half[i], hi = u.jumps[i].t + half[i];
    if (lo <= A || hi >= B) throw std::invalid_argument("recovery_sequence: jump window leaves the domain");
    if (i > 0 && lo <= u.jumps[i - 1].t + half[i - 1]) {
      throw std::invalid_argument("recovery_sequence: jump windows overlap (eps too large)");
    }
  }

  // Segment j runs between windows j-1 and j; new_* are its ends on the output grid,
  // old_* the ends of the matching piece of the original domain.
  const std::size_t segments = u.jumps.size() + 1;
  std::vector<double> new_lo(segments), new_hi(segments), old_lo(segments), old_hi(segments);
  for (std::size_t j = 0; j < segments; ++j) {
    old_lo[j] = j == 0 ? A : u.jumps[j - 1].t;
    old_hi[j] = j + 1 == segments ? B : u.jumps[j].t;
    new_lo[j] = j == 0 ? A : u.jumps[j - 1].t + half[j - 1];
    new_hi[j] = j + 1 == segments ? B : u.jumps[j].t - half[j];
  }

  const auto value = [&](double t) {
    for (std::size_t i = 0; i < u.jumps.size(); ++i) {
      const auto& jump = u.jumps[i];
      if (t > jump.t - half[i] && t < jump.t + half[i]) {
        const double mid = 0.5 * (jump.left + jump.right);
        return mid + jump.size() * opt.profile((t - jump.t) / beta[i]);
      }
    }
    std::size_t j = 0;
    while (j + 1 < segments && t >= new_hi[j]) ++j;
    const double s = std::clamp((t - new_lo[j]) / (new_hi[j] - new_lo[j]), 0.0, 1.0);
    const double mapped = s >= 1.0 ? old_hi[j] : old_lo[j] + s * (old_hi[j] - old_lo[j]);
    return u.derivative(mapped, 0, s >= 1.0 && j + 1 < segments);
  };
  return GridSignal::sample(value, n, A, B);
}

double blake_zisserman_energy(const PiecewiseFunction& u) {
  u.validate();
  double bulk = 0.0;
  for (const auto& p : u.pieces) {
    bulk += adaptive_simpson(
        [&](double t) {
          const double d = p.derivative(t, 2);
          return d * d;
        },
        p.a, p.b, 1e-10 / static_cast<double>(u.pieces.size()));
  }
  std::size_t lone_creases = 0;
  for (const auto& c : u.creases) {
    const bool at_jump = std::any_of(u.jumps.begin(), u.jumps.end(),
                                     [&](const Jump& j) { return std::fabs(j.t - c.t) <= 1e-12; });
    if (!at_jump) ++lone_creases;
  }
  return bulk + 2.0 * static_cast<double>(u.jumps.size()) + static_cast<double>(lone_creases);
}

}  // namespace freedisc
