#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "json.hpp"

#include "freedisc/experiments.h"
#include "freedisc/grid.h"
#include "freedisc/interp.h"
#include "freedisc/piecewise.h"
#include "freedisc/profile.h"

namespace freedisc {

/// Two-column CSV with header `t,value`, values to 17 significant digits. Reading requires
/// at least two rows on a uniform grid and throws std::runtime_error otherwise.
GridSignal read_csv(std::istream& in);
GridSignal read_csv(const std::string& path);
void write_csv(std::ostream& out, const GridSignal& u);
void write_csv(const std::string& path, const GridSignal& u);

/// {pieces:[{a,b,kind:"poly",coeffs[]}], jumps:[{t,left,right}], creases:[{t,dleft,dright}]}.
/// coeffs are in powers of the global variable t.
PiecewiseFunction piecewise_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PiecewiseFunction& u);

/// {k, n, N, b, c, T_star, energy, A_k:{numerator, denominator}, coefficients[]}, the
/// coefficients in powers of the centered variable on (-T*/2, T*/2).
nlohmann::json to_json(const ProfileResult& r);

nlohmann::json to_json(const ExperimentReport& r);
/// Plot-ready rows. Sweeps: k,eps,repetition,energy,density,fit_error,transitions.
/// BZ reports: target,k,eps,energy,expected.
void write_report_csv(std::ostream& out, const ExperimentReport& r);

nlohmann::json to_json(const RkEstimate& r);
/// Rows k,ell,eps,length,lhs,rhs,ratio.
void write_interp_csv(std::ostream& out, const RkEstimate& r);

/// Flat key-value text with [sections]; keys are addressed as "section.key" (keys before the
/// first section have no prefix). Throws std::runtime_error on malformed input.
using Config = std::map<std::string, std::string>;
Config parse_config(std::istream& in);
Config load_config(const std::string& path);

/// Minimizer keys tolerance, max-iter, multistart (section `minimize`) applied over `base`.
MinimizeOptions minimize_options_from(const Config& c, MinimizeOptions base = {});

/// Sweep plan from sections `plan` (k, eps as a comma list or eps-count for the default
/// dyadic list, cells, jump, position, noise, lambda-scale, weight, repetitions, seed,
/// threads) and `minimize` (tolerance, max-iter, multistart, smoothing). Keys outside the
/// documented schema throw std::runtime_error.
SweepPlan sweep_plan_from(const Config& c);

/// Comma-separated numbers.
std::vector<double> parse_list(const std::string& text, const std::string& what);

/// Writes JSON indented by two spaces with a trailing newline. Doubles are written in their
/// shortest round-trip form.
void write_json(const std::string& path, const nlohmann::json& j);

/// %.17g.
std::string format_double(double x);

}  // namespace freedisc
