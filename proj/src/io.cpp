#include "freedisc/io.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace freedisc {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used == 0 || used != text.size()) throw std::runtime_error("bad number '" + text + "' in " + what);
  return x;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool as_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config key " + key + " expects true/false, got '" + v + "'");
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GridSignal read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("CSV: empty input");
  if (trim(line) != "t,value") throw std::runtime_error("CSV: expected header 't,value'");
  std::vector<double> t, v;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("CSV: expected two columns in '" + line + "'");
    t.push_back(parse_double(trim(line.substr(0, comma)), "CSV"));
    v.push_back(parse_double(trim(line.substr(comma + 1)), "CSV"));
  }
  if (t.size() < 2) throw std::runtime_error("CSV: need at least two rows");
  GridSignal u(t.front(), t.back(), std::move(v));
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::fabs(t[i] - u.t(i)) > 1e-9 * std::max(1.0, std::fabs(u.t(i))) + 1e-6 * u.h) {
      throw std::runtime_error("CSV: t column is not a uniform increasing grid");
    }
  }
  return u;
}

GridSignal read_csv(const std::string& path) {
  auto in = open_in(path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const GridSignal& u) {
  out << "t,value\n";
  for (std::size_t i = 0; i < u.size(); ++i) out << format_double(u.t(i)) << ',' << format_double(u.values[i]) << '\n';
}

void write_csv(const std::string& path, const GridSignal& u) {
  auto out = open_out(path);
  write_csv(out, u);
}

PiecewiseFunction piecewise_from_json(const nlohmann::json& j) {
  PiecewiseFunction u;
  try {
    for (const auto& p : j.at("pieces")) {
      if (p.value("kind", std::string("poly")) != "poly") throw std::runtime_error("piece kind must be \"poly\"");
      u.pieces.push_back({p.at("a").get<double>(), p.at("b").get<double>(), p.at("coeffs").get<std::vector<double>>()});
    }
    if (j.contains("jumps")) {
      for (const auto& q : j.at("jumps")) u.jumps.push_back({q.at("t"), q.at("left"), q.at("right")});
    }
    if (j.contains("creases")) {
      for (const auto& q : j.at("creases")) u.creases.push_back({q.at("t"), q.at("dleft"), q.at("dright")});
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("piecewise JSON: ") + e.what());
  }
  u.validate();
  return u;
}

nlohmann::json to_json(const PiecewiseFunction& u) {
  nlohmann::json j;
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : u.pieces) j["pieces"].push_back({{"a", p.a}, {"b", p.b}, {"kind", "poly"}, {"coeffs", p.coeffs}});
  j["jumps"] = nlohmann::json::array();
  for (const auto& q : u.jumps) j["jumps"].push_back({{"t", q.t}, {"left", q.left}, {"right", q.right}});
  j["creases"] = nlohmann::json::array();
  for (const auto& q : u.creases) j["creases"].push_back({{"t", q.t}, {"dleft", q.dleft}, {"dright", q.dright}});
  return j;
}

nlohmann::json to_json(const ProfileResult& r) {
  nlohmann::json j;
  j["k"] = r.k;
  j["n"] = r.n;
  j["N"] = r.N ? nlohmann::json(*r.N) : nlohmann::json(nullptr);
  j["b"] = r.b;
  j["c"] = r.c;
  j["T_star"] = r.optimal_T;
  j["energy"] = r.energy;
  j["A_k"] = {{"numerator", r.normalization.get_num().get_str()},
              {"denominator", r.normalization.get_den().get_str()}};
  j["coefficients"] = r.profile.coefficients();
  j["converged"] = r.converged;
  return j;
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["records"] = nlohmann::json::array();
  for (const auto& x : r.records) {
    nlohmann::json rec = {{"k", x.k},
                          {"eps", x.eps},
                          {"h", x.h},
                          {"nodes", x.nodes},
                          {"repetition", x.repetition},
                          {"seed", x.seed},
                          {"ok", x.ok},
                          {"status", x.status},
                          {"iterations", x.iterations},
                          {"energy", x.energy},
                          {"transition_count", x.intervals.size()},
                          {"transition_energy", x.transition_energy},
                          {"density", x.density},
                          {"fit_error", x.fit_error ? nlohmann::json(*x.fit_error) : nlohmann::json(nullptr)},
                          {"flagged", x.flagged}};
    if (!x.error.empty()) rec["error"] = x.error;
    rec["intervals"] = nlohmann::json::array();
    for (const auto& I : x.intervals) {
      rec["intervals"].push_back({{"tau", I.tau}, {"sigma", I.sigma}, {"jump", I.jump}});
    }
    j["records"].push_back(rec);
  }
  if (!r.bz_records.empty()) {
    j["bz_records"] = nlohmann::json::array();
    for (const auto& x : r.bz_records) {
      j["bz_records"].push_back({{"target", x.target},
                                 {"k", x.k},
                                 {"eps", x.eps},
                                 {"nodes", x.nodes},
                                 {"energy", x.energy},
                                 {"expected", x.expected}});
    }
  }
  j["summary"] = nlohmann::json::array();
  for (const auto& s : r.summary) {
    j["summary"].push_back({{"label", s.label},
                            {"k", s.k},
                            {"target", s.target},
                            {"finest", s.finest},
                            {"extrapolated", s.extrapolated},
                            {"relative_error", s.relative_error},
                            {"monotone", s.monotone}});
  }
  j["provenance"] = {{"config_hash", r.config_hash}, {"seeds", r.seeds}};
  j["timestamp"] = r.timestamp;
  return j;
}

void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  if (!r.bz_records.empty()) {
    out << "target,k,eps,energy,expected\n";
    for (const auto& x : r.bz_records) {
      out << x.target << ',' << x.k << ',' << format_double(x.eps) << ',' << format_double(x.energy) << ','
          << format_double(x.expected) << '\n';
    }
    return;
  }
  out << "k,eps,repetition,energy,density,fit_error,transitions\n";
  for (const auto& x : r.records) {
    out << x.k << ',' << format_double(x.eps) << ',' << x.repetition << ',' << format_double(x.energy) << ','
        << format_double(x.density) << ',' << (x.fit_error ? format_double(*x.fit_error) : std::string()) << ','
        << x.intervals.size() << '\n';
  }
}

nlohmann::json to_json(const RkEstimate& r) {
  return {{"k", r.k}, {"R_hat", r.R_hat}, {"samples", r.samples}, {"seed", r.seed}};
}

void write_interp_csv(std::ostream& out, const RkEstimate& r) {
  out << "k,ell,eps,length,lhs,rhs,ratio\n";
  for (const auto& x : r.records) {
    out << x.k << ',' << x.ell << ',' << format_double(x.eps) << ',' << format_double(x.length) << ','
        << format_double(x.lhs) << ',' << format_double(x.rhs) << ',' << format_double(x.ratio()) << '\n';
  }
}

Config parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::runtime_error(std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  Config out;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      out[name] = trim(node.data());
      continue;
    }
    for (const auto& [key, value] : node) out[name + "." + key] = trim(value.data());
  }
  return out;
}

Config load_config(const std::string& path) {
  auto in = open_in(path);
  return parse_config(in);
}

MinimizeOptions minimize_options_from(const Config& c, MinimizeOptions base) {
  if (auto it = c.find("minimize.tolerance"); it != c.end()) base.tolerance = parse_double(it->second, it->first);
  if (auto it = c.find("minimize.max-iter"); it != c.end()) {
    const double v = parse_double(it->second, it->first);
    if (v != std::floor(v) || v < 1) throw std::runtime_error("config key minimize.max-iter must be a positive integer");
    base.max_iterations = static_cast<int>(v);
  }
  if (auto it = c.find("minimize.multistart"); it != c.end()) base.multistart = as_bool(it->second, it->first);
  return base;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(item, what));
  }
  if (out.empty()) throw std::runtime_error("empty list for " + what);
  return out;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment.name", "experiment.output", "plan.k", "plan.eps", "plan.eps-count", "plan.cells", "plan.jump",
    "plan.position", "plan.noise", "plan.lambda-scale", "plan.weight", "plan.repetitions", "plan.seed",
    "plan.threads", "minimize.tolerance", "minimize.max-iter", "minimize.multistart", "minimize.smoothing",
    "ms.mu", "ms.ks", "bz.k", "bz.bump-width", "bz.cells"};

int as_int(const std::string& v, const std::string& key) {
  const double x = parse_double(v, key);
  if (x != std::floor(x) || std::fabs(x) > 1e15) throw std::runtime_error("config key " + key + " expects an integer");
  return static_cast<int>(x);
}

}  // namespace

SweepPlan sweep_plan_from(const Config& c) {
  for (const auto& [key, value] : c) {
    if (!kKnownKeys.count(key)) throw std::runtime_error("unknown config key '" + key + "'");
  }
  SweepPlan plan;
  const auto get = [&](const std::string& key) -> const std::string* {
    auto it = c.find(key);
    return it == c.end() ? nullptr : &it->second;
  };
  if (auto v = get("plan.k")) plan.k = as_int(*v, "plan.k");
  if (auto v = get("plan.eps")) {
    plan.eps_list = parse_list(*v, "plan.eps");
  } else {
    const auto v2 = get("plan.eps-count");
    plan.eps_list = SweepPlan::default_eps_list(v2 ? as_int(*v2, "plan.eps-count") : 6);
  }
  if (auto v = get("plan.cells")) plan.cells_per_transition = parse_double(*v, "plan.cells");
  if (auto v = get("plan.jump")) plan.signal.jump = parse_double(*v, "plan.jump");
  if (auto v = get("plan.position")) plan.signal.position = parse_double(*v, "plan.position");
  if (auto v = get("plan.noise")) plan.signal.noise = parse_double(*v, "plan.noise");
  if (auto v = get("plan.lambda-scale")) plan.lambda_scale = parse_double(*v, "plan.lambda-scale");
  if (auto v = get("plan.weight")) plan.derivative_weight = parse_double(*v, "plan.weight");
  if (auto v = get("plan.repetitions")) plan.repetitions = as_int(*v, "plan.repetitions");
  if (auto v = get("plan.seed")) {
    if (v->empty() || v->find_first_not_of("0123456789") != std::string::npos) {
      throw std::runtime_error("config key plan.seed expects a nonnegative integer");
    }
    plan.seed = std::stoull(*v);
  }
  if (auto v = get("plan.threads")) plan.threads = as_int(*v, "plan.threads");
  if (auto v = get("minimize.smoothing")) plan.smoothing = parse_double(*v, "minimize.smoothing");
  plan.options = minimize_options_from(c, plan.options);
  return plan;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace freedisc
