#include <random>

#include "doctest.h"
#include "freedisc/hermite.h"
#include "freedisc/profile.h"
#include "oracles.h"

using freedisc::Polynomial;
using freedisc::Rational;

namespace {

// Exact integral over (-1/2, 1/2) of (p^(k))^2 for monomial coefficients p.
Rational exact_square_integral(const std::vector<Rational>& p, int k) {
  std::vector<Rational> d;
  for (std::size_t j = k; j < p.size(); ++j) {
    Rational ff = 1;
    for (int m = 0; m < k; ++m) ff *= static_cast<long>(j) - m;
    d.push_back(p[j] * ff);
  }
  Rational total = 0;
  const Rational half(1, 2);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      const std::size_t e = i + j + 1;
      Rational pw = 1;
      for (std::size_t m = 0; m < e; ++m) pw *= half;
      const Rational upper = pw, lower = (e % 2 == 0) ? pw : Rational(-pw);
      total += d[i] * d[j] * (upper - lower) / static_cast<long>(e);
    }
  }
  return total;
}

std::vector<Rational> profile_coefficients(int k) {
  return freedisc::hermite_profile(freedisc::BoundarySpec::equality(k), Rational(1)).coefficients();
}

}  // namespace

TEST_CASE("k=1 profile is the linear ramp") {
  const auto c = profile_coefficients(1);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 0);
  CHECK(c[1] == 1);
}

TEST_CASE("k=2 profile matches the hand-solved odd system") {
  // v = a1 t + a3 t^3, v(1/2) = 1/2, v'(1/2) = 0  =>  a3 = -2, a1 = 3/2.
  const auto c = profile_coefficients(2);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == 0);
  CHECK(c[1] == Rational(3, 2));
  CHECK(c[2] == 0);
  CHECK(c[3] == -2);
  const Rational half(1, 2);
  CHECK(oracle::poly_derivative(c, half, 0) == half);
  CHECK(oracle::poly_derivative(c, Rational(-half), 0) == -half);
  CHECK(oracle::poly_derivative(c, half, 1) == 0);
  CHECK(oracle::poly_derivative(c, Rational(-half), 1) == 0);
}

TEST_CASE("k=3 profile is 6t^5 - 5t^3 + 15t/8") {
  const auto c = profile_coefficients(3);
  REQUIRE(c.size() == 6);
  const std::vector<Rational> expected{0, Rational(15, 8), 0, -5, 0, 6};
  for (std::size_t j = 0; j < 6; ++j) CHECK(c[j] == expected[j]);
  const Rational half(1, 2);
  for (int l = 1; l <= 2; ++l) {
    CHECK(oracle::poly_derivative(c, half, l) == 0);
    CHECK(oracle::poly_derivative(c, Rational(-half), l) == 0);
  }
  CHECK(oracle::poly_derivative(c, half, 0) == half);
}

TEST_CASE("general Hermite solve agrees with the odd solve and has vanishing even part") {
  for (int k = 1; k <= 10; ++k) {
    std::vector<Rational> left(k, 0), right(k, 0);
    left[0] = Rational(-1, 2);
    right[0] = Rational(1, 2);
    const auto full = freedisc::hermite_interpolant(left, right, Rational(1));
    const auto odd = freedisc::odd_hermite_profile<Rational>(k, Rational(1), Rational(1));
    REQUIRE(full.coefficients().size() == odd.coefficients().size());
    for (std::size_t j = 0; j < full.coefficients().size(); ++j) {
      CHECK(full.coefficients()[j] == odd.coefficients()[j]);
      if (j % 2 == 0) CHECK(full.coefficients()[j] == 0);
    }
  }
}

TEST_CASE("A_k by exact polynomial integration") {
  CHECK(freedisc::profile_energy_constant(1) == 1);
  CHECK(freedisc::profile_energy_constant(2) == 12);
  CHECK(freedisc::profile_energy_constant(3) == 720);
  for (int k = 1; k <= 8; ++k) {
    CHECK(freedisc::profile_energy_constant(k) == exact_square_integral(profile_coefficients(k), k));
  }
}

TEST_CASE("floating A_k agrees with exact A_k for k <= 8") {
  for (int k = 1; k <= 8; ++k) {
    const double exact = freedisc::profile_energy_constant(k).get_d();
    const double approx = freedisc::profile_energy_constant_double(k);
    CHECK(std::fabs(approx - exact) <= 1e-12 * exact);
  }
}

TEST_CASE("exact degree cap") {
  CHECK_NOTHROW(freedisc::profile_energy_constant(16));
  CHECK_THROWS_AS(freedisc::profile_energy_constant(17), std::domain_error);
  CHECK_THROWS_AS(freedisc::profile_energy_constant(0), std::invalid_argument);
}

TEST_CASE("random jets are reproduced and the energy matrix matches direct integration") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> len(0.2, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + trial % 5;
    std::vector<double> left(k), right(k);
    for (int l = 0; l < k; ++l) {
      left[l] = u(rng);
      right[l] = u(rng);
    }
    const double L = len(rng);
    const double center = u(rng);
    const auto p = freedisc::hermite_interpolant(left, right, L, center);
    CHECK(p.degree() <= 2 * k - 1);
    for (int l = 0; l < k; ++l) {
      CHECK(p.derivative_at(center - L / 2, l) == doctest::Approx(left[l]).epsilon(1e-9));
      CHECK(p.derivative_at(center + L / 2, l) == doctest::Approx(right[l]).epsilon(1e-9));
    }
    const double direct = oracle::simpson(
        [&](double t) {
          const double d = p.derivative_at(t, k);
          return d * d;
        },
        center - L / 2, center + L / 2, 2000);
    CHECK(freedisc::hermite_energy(left, right, L) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("exact rational interpolant reproduces jets exactly") {
  const std::vector<Rational> left{Rational(1, 3), Rational(-2), Rational(5, 7)};
  const std::vector<Rational> right{Rational(4), Rational(0), Rational(-1, 9)};
  const Rational L(3, 2), c(1, 5);
  const auto p = freedisc::hermite_interpolant(left, right, L, c);
  for (int l = 0; l < 3; ++l) {
    CHECK(p.derivative_at(c - L / 2, l) == left[l]);
    CHECK(p.derivative_at(c + L / 2, l) == right[l]);
  }
}

TEST_CASE("singular dense system is reported") {
  std::vector<std::vector<double>> a{{1.0, 2.0}, {2.0, 4.0}};
  CHECK_THROWS_AS(freedisc::solve_dense(a, std::vector<double>{1.0, 1.0}), std::runtime_error);
  CHECK_THROWS_AS(freedisc::hermite_interpolant(std::vector<double>{0.0}, std::vector<double>{1.0}, -1.0),
                  std::invalid_argument);
}
