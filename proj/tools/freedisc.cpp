// freedisc: profiles, calibration, denoising, sweeps and the interpolation harness.
// Exit codes: 0 success, 1 solver failure, 2 bad arguments or input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "freedisc/experiments.h"
#include "freedisc/functional.h"
#include "freedisc/interp.h"
#include "freedisc/io.h"
#include "freedisc/profile.h"

namespace fd = freedisc;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kSolverFailure = 1;
constexpr int kBadInput = 2;

std::string num(double x) { return fd::format_double(x); }

std::string rational(const fd::Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

void maybe_json(const std::string& path, const json& j) {
  if (!path.empty()) fd::write_json(path, j);
}

struct ProfileArgs {
  int k = 2;
  std::optional<int> n;
  std::optional<int> N;
  double b = 1.0;
  double c = 1.0;
};

int cmd_profile(const ProfileArgs& a, const std::string& json_path) {
  fd::ProfileResult r;
  if (a.N) {
    if (!a.n) throw std::invalid_argument("--N needs --n");
    r = fd::m_k_constrained(a.k, *a.n, *a.N);
  } else if (a.n) {
    r = fd::m_k_partial(a.k, *a.n);
  } else if (a.b != 1.0 || a.c != 1.0) {
    r = fd::m_k_general(a.k, a.b, a.c);
  } else {
    r = fd::m_k(a.k);
  }
  std::cout << "k = " << r.k << '\n';
  if (a.n) std::cout << "n = " << r.n << '\n';
  if (r.N) std::cout << "N = " << *r.N << '\n';
  if (a.b != 1.0 || a.c != 1.0) std::cout << "b = " << num(r.b) << "\nc = " << num(r.c) << '\n';
  std::cout << "A_k = " << rational(r.normalization) << " (" << num(r.normalization.get_d()) << ")\n"
            << "T* = " << num(r.optimal_T) << '\n'
            << "m = " << num(r.energy) << '\n';
  maybe_json(json_path, fd::to_json(r));
  if (!r.converged) {
    std::cerr << "profile: search did not converge\n";
    return kSolverFailure;
  }
  return kOk;
}

int cmd_calibrate(int k, double mu, const std::string& json_path) {
  const double c = fd::calibrate_c_k(k, mu);
  const double check = fd::m_k_general(k, 1.0, c).energy;
  std::cout << "c_k = " << num(c) << "\nm_k^{1,c} = " << num(check) << '\n';
  maybe_json(json_path, {{"k", k}, {"mu", mu}, {"c", c}, {"m", check}});
  return kOk;
}

struct DenoiseArgs {
  std::string input;
  std::string output;
  std::string config;
  int k = 2;
  double eps = 0.0;
  double lambda = 0.0;
  double weight = 1.0;
  double smoothing = 0.0;
};

int cmd_denoise(const DenoiseArgs& a, const std::string& json_path) {
  if (a.input == a.output) throw std::invalid_argument("--output must differ from --input");
  fd::MinimizeOptions opts;
  if (!a.config.empty()) opts = fd::minimize_options_from(fd::load_config(a.config));
  const auto g = fd::read_csv(a.input);
  fd::EnergyParams p;
  p.k = a.k;
  p.eps = a.eps;
  p.lambda = a.lambda;
  p.derivative_weight = a.weight;
  p.smoothing = a.smoothing;
  p.data = g;
  p.validate(g);

  const auto r = fd::minimize(g, p, opts);
  fd::write_csv(a.output, r.u);
  const auto tr = fd::detect_transitions(r.u, p);
  std::cout << "status = " << fd::to_string(r.status) << "\niterations = " << r.iterations
            << "\nenergy = " << num(r.energy) << "\ngradient_norm = " << num(r.gradient_norm)
            << "\ntransitions = " << tr.intervals.size() << '\n';
  json j = {{"k", a.k},
            {"eps", a.eps},
            {"lambda", a.lambda},
            {"nodes", g.size()},
            {"status", fd::to_string(r.status)},
            {"iterations", r.iterations},
            {"energy", r.energy},
            {"gradient_norm", r.gradient_norm}};
  j["intervals"] = json::array();
  for (const auto& I : tr.intervals) j["intervals"].push_back({{"tau", I.tau}, {"sigma", I.sigma}, {"jump", I.jump}});
  maybe_json(json_path, j);
  return r.converged() ? kOk : kSolverFailure;
}

void print_summary(const fd::ExperimentReport& rep) {
  for (const auto& s : rep.summary) {
    std::cout << s.label << " k=" << s.k << " target=" << num(s.target) << " finest=" << num(s.finest)
              << " extrapolated=" << num(s.extrapolated) << " rel_error=" << num(s.relative_error)
              << " monotone=" << (s.monotone ? "yes" : "no") << '\n';
  }
}

bool all_ok(const fd::ExperimentReport& rep) {
  for (const auto& r : rep.records) {
    if (!r.ok) return false;
  }
  return true;
}

void write_report_csv(const std::string& path, const fd::ExperimentReport& rep) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  fd::write_report_csv(out, rep);
}

int cmd_sweep(const std::string& config_path, const std::string& csv_path, const std::string& json_path) {
  const auto cfg = fd::load_config(config_path);
  const auto plan = fd::sweep_plan_from(cfg);
  const auto get = [&](const std::string& key, const std::string& fallback) {
    auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
  };
  const std::string name = get("experiment.name", "jump-density");
  std::string csv = csv_path.empty() ? get("experiment.output", "") : csv_path;

  fd::ExperimentReport rep;
  if (name == "jump-density") {
    plan.validate();
    rep = fd::run_jump_density_sweep(plan);
  } else if (name == "profile-fit") {
    plan.validate();
    rep = fd::run_profile_fit(plan);
  } else if (name == "ms") {
    std::vector<int> ks;
    for (double k : fd::parse_list(get("ms.ks", "2"), "ms.ks")) {
      if (k != static_cast<int>(k)) throw std::invalid_argument("ms.ks must hold integers");
      ks.push_back(static_cast<int>(k));
    }
    const double mu = fd::parse_list(get("ms.mu", "1"), "ms.mu").at(0);
    plan.validate();
    rep = fd::run_ms_approximation(mu, ks, plan);
  } else if (name == "bz") {
    fd::BzOptions opts;
    opts.bump_width = fd::parse_list(get("bz.bump-width", "0.125"), "bz.bump-width").at(0);
    opts.cells_per_transition = fd::parse_list(get("bz.cells", "64"), "bz.cells").at(0);
    const double k = fd::parse_list(get("bz.k", "3"), "bz.k").at(0);
    if (k != static_cast<int>(k)) throw std::invalid_argument("bz.k must be an integer");
    rep = fd::run_bz_approximation(static_cast<int>(k), plan.eps_list, opts);
  } else {
    throw std::invalid_argument("experiment.name must be jump-density, profile-fit, ms or bz, got '" + name + "'");
  }
  print_summary(rep);
  std::cout << "config_hash = " << rep.config_hash << '\n';
  write_report_csv(csv, rep);
  maybe_json(json_path, fd::to_json(rep));
  return all_ok(rep) ? kOk : kSolverFailure;
}

int cmd_interp(int k, int samples, std::uint64_t seed, int threads, const std::string& csv_path,
               const std::string& json_path) {
  const auto r = fd::estimate_Rk(k, samples, seed, !csv_path.empty(), threads);
  std::cout << "R_hat = " << num(r.R_hat) << "\nsamples = " << r.samples << "\nseed = " << r.seed << '\n';
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    fd::write_interp_csv(out, r);
  }
  maybe_json(json_path, fd::to_json(r));
  return kOk;
}

int cmd_bz(int k, const std::string& eps_text, const std::string& csv_path, const std::string& json_path) {
  const auto eps = eps_text.empty() ? fd::SweepPlan::default_eps_list(4) : fd::parse_list(eps_text, "--eps");
  const auto rep = fd::run_bz_approximation(k, eps);
  for (const auto& r : rep.bz_records) {
    std::cout << r.target << " eps=" << num(r.eps) << " energy=" << num(r.energy) << " expected=" << num(r.expected)
              << '\n';
  }
  print_summary(rep);
  write_report_csv(csv_path, rep);
  maybe_json(json_path, fd::to_json(rep));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular perturbations of free-discontinuity energies in one dimension"};
  app.require_subcommand(1);
  std::string json_path;

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "optimal profile and jump constant m_k (or a variant)");
  profile->add_option("--k", pa.k, "order")->required()->check(CLI::Range(1, 12));
  profile->add_option("--n", pa.n, "highest constrained derivative order");
  profile->add_option("--N", pa.N, "box parameter (with --n)")->check(CLI::PositiveNumber);
  profile->add_option("--b", pa.b, "length weight")->check(CLI::PositiveNumber);
  profile->add_option("--c", pa.c, "derivative weight")->check(CLI::PositiveNumber);
  profile->add_option("--json", json_path, "write results as JSON");

  int ck = 2;
  double mu = 1.0;
  auto* calibrate = app.add_subcommand("calibrate", "weight c_k with m_k^{1,c} = mu");
  calibrate->add_option("--k", ck, "order")->required()->check(CLI::Range(1, 12));
  calibrate->add_option("--mu", mu, "target jump cost")->required()->check(CLI::PositiveNumber);
  calibrate->add_option("--json", json_path, "write results as JSON");

  DenoiseArgs da;
  auto* denoise = app.add_subcommand("denoise", "minimize the discrete functional with fidelity to a CSV signal");
  denoise->add_option("--input", da.input, "CSV with header t,value")->required()->check(CLI::ExistingFile);
  denoise->add_option("--output", da.output, "minimizer CSV")->required();
  denoise->add_option("--k", da.k, "order")->required();
  denoise->add_option("--eps", da.eps, "perturbation parameter")->required();
  denoise->add_option("--lambda", da.lambda, "fidelity weight")->required();
  denoise->add_option("--weight", da.weight, "derivative weight c");
  denoise->add_option("--smoothing", da.smoothing, "C^1 blend width at the potential's kink");
  denoise->add_option("--config", da.config, "minimizer settings ([minimize] section)")->check(CLI::ExistingFile);
  denoise->add_option("--json", json_path, "write results as JSON");

  std::string config_path, csv_path;
  auto* sweep = app.add_subcommand("sweep", "run an experiment from a config file");
  sweep->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--csv", csv_path, "plot-ready CSV (overrides experiment.output)");
  sweep->add_option("--json", json_path, "write the report as JSON");

  int ik = 3, samples = 200, threads = 0;
  std::uint64_t seed = 0;
  auto* interp = app.add_subcommand("interp", "estimate the interpolation constant R_k");
  interp->add_option("--k", ik, "order")->required()->check(CLI::Range(2, 12));
  interp->add_option("--samples", samples, "number of random cases")->check(CLI::PositiveNumber);
  interp->add_option("--seed", seed, "master seed");
  interp->add_option("--threads", threads, "workers (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
  interp->add_option("--csv", csv_path, "per-case CSV");
  interp->add_option("--json", json_path, "write results as JSON");

  int bk = 3;
  std::string eps_text;
  auto* bz = app.add_subcommand("bz", "Blake-Zisserman approximation along constructed signals");
  bz->add_option("--k", bk, "order (>= 3)")->required();
  bz->add_option("--eps", eps_text, "comma-separated decreasing eps list");
  bz->add_option("--csv", csv_path, "plot-ready CSV");
  bz->add_option("--json", json_path, "write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*profile) return cmd_profile(pa, json_path);
    if (*calibrate) return cmd_calibrate(ck, mu, json_path);
    if (*denoise) return cmd_denoise(da, json_path);
    if (*sweep) return cmd_sweep(config_path, csv_path, json_path);
    if (*interp) return cmd_interp(ik, samples, seed, threads, csv_path, json_path);
    if (*bz) return cmd_bz(bk, eps_text, csv_path, json_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kBadInput;
}
