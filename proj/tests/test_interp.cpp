#include <cmath>
#include <random>

#include "doctest.h"
#include "freedisc/interp.h"

using freedisc::InterpCase;

namespace {

InterpCase poly_case(int k, int ell, double eps, std::vector<double> coeffs, double left = 0.0, double right = 1.0) {
  InterpCase c;
  c.k = k;
  c.ell = ell;
  c.eps = eps;
  c.left = left;
  c.right = right;
  c.u.polynomial = std::move(coeffs);
  return c;
}

}  // namespace

TEST_CASE("gamma_ell is (2k-1)(ell-1)/(k-1)") {
  CHECK(poly_case(3, 2, 0.5, {0, 1}).gamma() == 2.5);
  CHECK(poly_case(4, 3, 0.5, {0, 1}).gamma() == doctest::Approx(14.0 / 3.0));
  CHECK(poly_case(5, 2, 0.5, {0, 1}).gamma() == 2.25);
}

TEST_CASE("linear u has a zero left side") {
  const auto s = freedisc::interp_sides(poly_case(4, 3, 0.1, {1.0, -2.0}, 0.2, 0.7));
  CHECK(s.lhs == 0.0);
  CHECK(s.rhs > 0.0);
}

TEST_CASE("u = t^2 on (0,1), k = 3, ell = 2, eps = 1/2") {
  const auto s = freedisc::interp_sides(poly_case(3, 2, 0.5, {0.0, 0.0, 1.0}));
  // ||u''||^2 = 4, ||u'||^2 = 4/3, u''' = 0, gamma = 5/2
  const double e = std::pow(0.5, 2.5);
  CHECK(s.lhs == doctest::Approx(4.0 * e).epsilon(1e-14));
  CHECK(s.rhs == doctest::Approx(4.0 / 3.0 + e * 4.0 / 3.0).epsilon(1e-14));
  CHECK(std::isfinite(s.ratio()));
}

TEST_CASE("norms rescale with the interval") {
  // u(t) = ((t - a) / L)^3 on (a, a + L): ||u''||^2 = 36 / L^3 * integral s^2 = 12 / L^3
  const double a = 0.3, L = 0.01;
  auto c = poly_case(4, 2, 0.2, {0.0, 0.0, 0.0, 1.0}, a, a + L);
  const auto s = freedisc::interp_sides(c);
  CHECK(s.lhs == doctest::Approx(std::pow(0.2, c.gamma()) * 12.0 / std::pow(L, 3)).epsilon(1e-12));
}

TEST_CASE("sampled sin(pi t) matches the Fourier norms") {
  const double pi = std::acos(-1.0);
  const auto u = freedisc::GridSignal::sample([=](double t) { return std::sin(pi * t); }, 4096);
  const double eps = 0.1;
  const auto s = freedisc::interp_sides(u, 3, 2, eps);
  const double g = 2.5;
  const double d1 = pi * pi / 2, d2 = std::pow(pi, 4) / 2, d3 = std::pow(pi, 6) / 2;
  CHECK(s.lhs == doctest::Approx(std::pow(eps, g) * d2).epsilon(2e-3));
  CHECK(s.rhs == doctest::Approx(d1 + std::pow(eps, 5) * d3 + std::pow(eps, g) * d1).epsilon(2e-3));
  const auto est = freedisc::estimate_Rk(3, 2000, 1);
  CHECK(s.ratio() <= est.R_hat);
}

TEST_CASE("argument errors") {
  CHECK_THROWS_AS(freedisc::interp_sides(poly_case(3, 3, 0.5, {0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(freedisc::interp_sides(poly_case(3, 1, 0.5, {0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(freedisc::interp_sides(poly_case(3, 2, 1.0, {0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(freedisc::interp_sides(poly_case(2, 2, 0.5, {0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(freedisc::estimate_Rk(3, 0, 1), std::invalid_argument);
}

TEST_CASE("ratio is invariant under u -> c u") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> amp(-50.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const int k = 3 + i % 3;
    auto c = freedisc::random_interp_case(k, 77, i);
    c.ell = 2 + i % (k - 2);
    const double r1 = freedisc::interp_sides(c).ratio();
    c.amplitude = amp(rng);
    const double r2 = freedisc::interp_sides(c).ratio();
    CHECK(std::fabs(r1 - r2) <= 1e-12 * r1);
  }
}

TEST_CASE("estimate_Rk is deterministic and self-consistent") {
  for (int k : {3, 4}) {
    const auto a = freedisc::estimate_Rk(k, 3000, 5, true, 1);
    const auto b = freedisc::estimate_Rk(k, 3000, 5, true, 3);
    CHECK(a.R_hat == b.R_hat);
    CHECK(std::isfinite(a.R_hat));
    CHECK(a.R_hat > 0.0);
    REQUIRE(a.records.size() == static_cast<std::size_t>(3000 * (k - 2)));
    for (const auto& r : a.records) CHECK(r.lhs <= a.R_hat * r.rhs);
  }
  CHECK(freedisc::estimate_Rk(3, 500, 1).R_hat != freedisc::estimate_Rk(3, 500, 2).R_hat);
}

TEST_CASE("localized form holds below the threshold") {
  const auto est = freedisc::estimate_Rk(3, 4000, 9);
  int tested = 0;
  for (int i = 0; i < 300; ++i) {
    auto c = freedisc::random_interp_case(3, 9, i);
    // scale so that |u'|^2 <= 1/eps on I
    const double slope = c.u.local_sup_slope() / c.length();
    if (slope == 0.0) continue;
    c.amplitude = 0.9 / (std::sqrt(c.eps) * slope);
    const auto s = freedisc::localized_sides(c);
    CHECK(s.lhs <= est.R_hat * s.rhs);
    // below the threshold the two forms agree after dividing by eps^gamma
    const auto full = freedisc::interp_sides(c);
    CHECK(s.lhs == doctest::Approx(full.lhs * std::pow(c.eps, -c.gamma())).epsilon(1e-10));
    CHECK(s.rhs == doctest::Approx(full.rhs * std::pow(c.eps, -c.gamma())).epsilon(1e-6));
    ++tested;
  }
  CHECK(tested > 250);
}
