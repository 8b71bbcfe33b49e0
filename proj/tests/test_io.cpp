#include <cmath>
#include <sstream>

#include "doctest.h"
#include "freedisc/io.h"

namespace {

freedisc::GridSignal csv_roundtrip(const freedisc::GridSignal& u) {
  std::stringstream s;
  freedisc::write_csv(s, u);
  return freedisc::read_csv(s);
}

freedisc::GridSignal csv_from(const std::string& text) {
  std::istringstream in(text);
  return freedisc::read_csv(in);
}

freedisc::Config config_from(const std::string& text) {
  std::istringstream in(text);
  return freedisc::parse_config(in);
}

}  // namespace

TEST_CASE("CSV round trip is exact") {
  const auto u = freedisc::GridSignal::sample([](double t) { return std::sin(7.0 * t) / 3.0; }, 257, -0.25, 1.75);
  const auto v = csv_roundtrip(u);
  REQUIRE(v.size() == u.size());
  CHECK(v.values == u.values);
  CHECK(v.left == u.left);
  CHECK(v.h == doctest::Approx(u.h).epsilon(1e-14));
}

TEST_CASE("CSV errors") {
  CHECK_THROWS_AS(csv_from(""), std::runtime_error);
  CHECK_THROWS_AS(csv_from("x,y\n0,1\n1,2\n"), std::runtime_error);
  CHECK_THROWS_AS(csv_from("t,value\n0,1\n"), std::runtime_error);
  CHECK_THROWS_AS(csv_from("t,value\n0,1\n0.5,2\n0.6,3\n"), std::runtime_error);
  CHECK_THROWS_AS(csv_from("t,value\n0,1\n1\n"), std::runtime_error);
  CHECK_THROWS_AS(csv_from("t,value\n0,1\n1,abc\n"), std::runtime_error);
  CHECK(csv_from("t,value\n0,1\n0.5,2\n1,3\n").values == std::vector<double>{1, 2, 3});
}

TEST_CASE("piecewise JSON round trip") {
  const auto j = nlohmann::json::parse(R"({
    "pieces": [{"a": 0, "b": 0.5, "kind": "poly", "coeffs": [1, 2]},
               {"a": 0.5, "b": 1, "coeffs": [0, 0, 3]}],
    "jumps": [{"t": 0.5, "left": 2, "right": 0.75}]
  })");
  const auto u = freedisc::piecewise_from_json(j);
  CHECK(u(0.25) == doctest::Approx(1.5));
  CHECK(u(0.75) == doctest::Approx(3 * 0.5625));
  REQUIRE(u.jumps.size() == 1);
  CHECK(u.jumps[0].size() == doctest::Approx(-1.25));
  const auto back = freedisc::piecewise_from_json(freedisc::to_json(u));
  CHECK(freedisc::to_json(back) == freedisc::to_json(u));

  auto bad = j;
  bad["pieces"][0]["kind"] = "spline";
  CHECK_THROWS_AS(freedisc::piecewise_from_json(bad), std::runtime_error);
  bad = j;
  bad["pieces"][1]["a"] = 0.6;
  CHECK_THROWS_AS(freedisc::piecewise_from_json(bad), std::invalid_argument);
  CHECK_THROWS_AS(freedisc::piecewise_from_json(nlohmann::json::object()), std::runtime_error);
}

TEST_CASE("profile JSON") {
  const auto r = freedisc::m_k(2);
  const auto j = freedisc::to_json(r);
  CHECK(j["k"] == 2);
  CHECK(j["N"].is_null());
  CHECK(j["A_k"]["numerator"] == "12");
  CHECK(j["A_k"]["denominator"] == "1");
  const double T = j["T_star"].get<double>();
  CHECK(T == doctest::Approx(std::pow(36.0, 0.25)));
  CHECK(j["energy"].get<double>() == doctest::Approx(4.0 / 3.0 * T));
  // the cubic with unit rise and flat ends on (-T/2, T/2) has slope 3 / (2T) at the center
  const auto c = j["coefficients"].get<std::vector<double>>();
  REQUIRE(c.size() == 4);
  CHECK(c[1] * T == doctest::Approx(1.5));
  CHECK(c[2] == doctest::Approx(0.0));
  CHECK(c[3] * T * T * T == doctest::Approx(-2.0));
}

TEST_CASE("config parsing") {
  const auto c = config_from(
      "[experiment]\nname = jump-density\n\n[plan]\nk = 3\neps = 0.1, 0.05 ,0.025\njump = 0.0625\n"
      "seed = 42\n[minimize]\nmax-iter = 500\nsmoothing = 0.1\n; comment\n");
  CHECK(c.at("experiment.name") == "jump-density");
  CHECK(c.at("plan.eps") == "0.1, 0.05 ,0.025");
  const auto plan = freedisc::sweep_plan_from(c);
  CHECK(plan.k == 3);
  CHECK(plan.eps_list == std::vector<double>{0.1, 0.05, 0.025});
  CHECK(plan.signal.jump == 0.0625);
  CHECK(plan.seed == 42);
  CHECK(plan.options.max_iterations == 500);
  CHECK(plan.smoothing == 0.1);

  const auto counted = freedisc::sweep_plan_from(config_from("[plan]\neps-count = 4\n"));
  CHECK(counted.eps_list == freedisc::SweepPlan::default_eps_list(4));

  CHECK_THROWS_AS(freedisc::sweep_plan_from(config_from("[plan]\nkk = 3\n")), std::runtime_error);
  CHECK_THROWS_AS(freedisc::sweep_plan_from(config_from("[plan]\nk = 2.5\n")), std::runtime_error);
  CHECK_THROWS_AS(freedisc::sweep_plan_from(config_from("[plan]\neps = 0.1,x\n")), std::runtime_error);
  CHECK_THROWS_AS(freedisc::sweep_plan_from(config_from("[plan]\nseed = -1\n")), std::runtime_error);
  CHECK_THROWS_AS(config_from("[plan\nk = 2\n"), std::runtime_error);
  CHECK_THROWS_AS(freedisc::load_config("/nonexistent/x.ini"), std::runtime_error);
}

TEST_CASE("report serialization") {
  freedisc::SweepPlan plan;
  plan.eps_list = {1.0 / 16, 1.0 / 32};
  const auto rep = freedisc::run_jump_density_sweep(plan);
  const auto j = freedisc::to_json(rep);
  CHECK(j["experiment"] == "jump_density_sweep");
  REQUIRE(j["records"].size() == 2);
  CHECK(j["records"][0]["transition_count"] == 1);
  CHECK(j["provenance"]["config_hash"] == rep.config_hash);
  CHECK(j["provenance"]["config_hash"].get<std::string>().size() == 16);
  CHECK(j["timestamp"].get<std::string>().back() == 'Z');

  std::stringstream s;
  freedisc::write_report_csv(s, rep);
  std::string line;
  std::getline(s, line);
  CHECK(line == "k,eps,repetition,energy,density,fit_error,transitions");
  std::getline(s, line);
  CHECK(line.rfind("2,0.0625,0,", 0) == 0);

  CHECK(freedisc::format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(freedisc::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
