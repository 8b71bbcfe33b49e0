#include "freedisc/hermite.h"

#include <map>
#include <mutex>

namespace freedisc {

namespace {

std::mutex g_cache_mutex;
std::map<int, std::vector<std::vector<Rational>>> g_exact_cache;
std::map<int, std::vector<std::vector<double>>> g_double_cache;

std::vector<std::vector<Rational>> build_energy_matrix(int k) {
  const int m = 2 * k;
  std::vector<Polynomial<Rational>> basis;
  basis.reserve(m);
  for (int i = 0; i < m; ++i) {
    std::vector<Rational> left(k, Rational(0)), right(k, Rational(0));
    (i < k ? left[i] : right[i - k]) = 1;
    basis.push_back(hermite_interpolant(left, right, Rational(1)).derivative(k));
  }
  std::vector<std::vector<Rational>> h(m, std::vector<Rational>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      h[i][j] = (basis[i] * basis[j]).integrate();
      h[j][i] = h[i][j];
    }
  }
  return h;
}

}  // namespace

const std::vector<std::vector<Rational>>& hermite_energy_matrix(int k) {
  if (k < 1 || k > kExactOrderCap) {
    throw std::domain_error("hermite_energy_matrix: k=" + std::to_string(k) +
                            " outside exact range [1, " + std::to_string(kExactOrderCap) + "]");
  }
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_exact_cache.find(k);
  if (it == g_exact_cache.end()) it = g_exact_cache.emplace(k, build_energy_matrix(k)).first;
  return it->second;
}

const std::vector<std::vector<double>>& hermite_energy_matrix_double(int k) {
  const auto& exact = hermite_energy_matrix(k);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_double_cache.find(k);
  if (it == g_double_cache.end()) {
    std::vector<std::vector<double>> h(exact.size(), std::vector<double>(exact.size()));
    for (std::size_t i = 0; i < exact.size(); ++i) {
      for (std::size_t j = 0; j < exact.size(); ++j) h[i][j] = exact[i][j].get_d();
    }
    it = g_double_cache.emplace(k, std::move(h)).first;
  }
  return it->second;
}

double hermite_energy(const std::vector<double>& left_jet, const std::vector<double>& right_jet,
                      double length) {
  const int k = static_cast<int>(left_jet.size());
  if (k < 1 || right_jet.size() != left_jet.size()) {
    throw std::invalid_argument("hermite_energy: jets must have equal nonzero length");
  }
  if (!(length > 0)) throw std::invalid_argument("hermite_energy: interval length must be positive");
  const auto& h = hermite_energy_matrix_double(k);
  std::vector<double> y(2 * k);
  double lp = 1.0;
  for (int l = 0; l < k; ++l) {
    y[l] = lp * left_jet[l];
    y[k + l] = lp * right_jet[l];
    lp *= length;
  }
  double q = 0.0;
  for (int i = 0; i < 2 * k; ++i) {
    double row = 0.0;
    for (int j = 0; j < 2 * k; ++j) row += h[i][j] * y[j];
    q += y[i] * row;
  }
  return std::pow(length, 1 - 2 * k) * q;
}

}  // namespace freedisc
