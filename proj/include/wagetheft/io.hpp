#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "wagetheft/experiments.hpp"
#include "wagetheft/report.hpp"
#include "wagetheft/solver.hpp"

namespace wagetheft {

using json = nlohmann::ordered_json;

namespace detail {

/// Unbounded values are stored as the string "inf".
inline json number_or_inf(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

inline double read_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_string() && v.get<std::string>() == "inf") return kUnboundedTheft;
  if (!v.is_number()) throw ValidationError(key, "expected a number");
  return v.get<double>();
}

inline json optional_number(const std::optional<double>& x) {
  if (!x) return nullptr;
  return *x;
}

inline std::optional<double> read_optional(const json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return read_number(j, key);
}

}  // namespace detail

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
}

inline json to_json(const Instance& in) {
  return {{"P", in.market.price},          {"yH", in.market.y_high},
          {"yL", in.market.y_low},         {"u", in.market.reservation_utility},
          {"gamma", in.market.inspection_rate}, {"k", in.cost.k},
          {"q", in.cost.q},                {"sigma", in.penalty.sigma},
          {"p", in.penalty.p}};
}

/// Applies the instance keys present in `j` on top of `base`. Any other key
/// is reported as a validation error naming it.
inline Instance instance_from_json(const json& j, Instance base = {}) {
  if (!j.is_object()) throw ValidationError("config", "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ValidationError(key, "expected a number");
    const double v = value.get<double>();
    if (key == "P") base.market.price = v;
    else if (key == "yH") base.market.y_high = v;
    else if (key == "yL") base.market.y_low = v;
    else if (key == "u") base.market.reservation_utility = v;
    else if (key == "gamma") base.market.inspection_rate = v;
    else if (key == "k") base.cost.k = v;
    else if (key == "q") base.cost.q = v;
    else if (key == "sigma") base.penalty.sigma = v;
    else if (key == "p") base.penalty.p = v;
    else throw ValidationError(key, "unknown instance parameter");
  }
  return base;
}

inline json to_json(const Contract& c) {
  return {{"wH", c.w_high}, {"wL", c.w_low}, {"bH", c.b_high}, {"bL", c.b_low}, {"a", c.effort}};
}

inline Contract contract_from_json(const json& j) {
  return {detail::read_number(j, "wH"), detail::read_number(j, "wL"), detail::read_number(j, "bH"),
          detail::read_number(j, "bL"), detail::read_number(j, "a")};
}

inline json to_json(const Instance& in, const SolveResult& r) {
  json segs = json::array();
  for (const auto& s : r.segments)
    segs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"a", s.effort}, {"g", s.profit},
                    {"local_maxima", s.local_maxima}});
  json out = {
      {"instance", to_json(in)},
      {"contract", to_json(r.contract)},
      {"profit", r.profit},
      {"worker_utility", r.worker_utility},
      {"beta", detail::number_or_inf(r.beta)},
      {"breaks",
       {{"a_wL_zero", detail::optional_number(r.breaks.low_wage_zero)},
        {"a_wL_beta", detail::optional_number(r.breaks.low_wage_beta)},
        {"a_wH_beta", detail::optional_number(r.breaks.high_wage_beta)},
        {"a_max", r.breaks.search_max}}},
      {"segments", segs},
  };
  if (r.grid_check) out["grid_check"] = {{"a", r.grid_check->x}, {"g", r.grid_check->value}};
  return out;
}

inline SolveResult solve_result_from_json(const json& j) {
  SolveResult r;
  r.contract = contract_from_json(j.at("contract"));
  r.profit = detail::read_number(j, "profit");
  r.worker_utility = detail::read_number(j, "worker_utility");
  r.beta = detail::read_number(j, "beta");
  const json& b = j.at("breaks");
  r.breaks.low_wage_zero = detail::read_optional(b, "a_wL_zero");
  r.breaks.low_wage_beta = detail::read_optional(b, "a_wL_beta");
  r.breaks.high_wage_beta = detail::read_optional(b, "a_wH_beta");
  r.breaks.search_max = detail::read_number(b, "a_max");
  for (const auto& s : j.at("segments"))
    r.segments.push_back({s.at("lo").get<double>(), s.at("hi").get<double>(),
                          s.at("a").get<double>(), s.at("g").get<double>(),
                          s.at("local_maxima").get<int>()});
  if (j.contains("grid_check"))
    r.grid_check = ScalarOptimum{j["grid_check"].at("a").get<double>(),
                                 j["grid_check"].at("g").get<double>()};
  return r;
}

/// Structural checks on a solve result: contract feasibility, the closed-form
/// relations at the reported effort, and profit consistency.
inline Report check_solve_result(const Instance& in, const SolveResult& r) {
  Report rep;
  const Contract& c = r.contract;
  rep.add("effort_in_range", c.effort >= 0.0 && c.effort < 1.0, c.effort);
  rep.add("wage_bounds",
          c.w_low >= 0.0 && c.w_high >= 0.0 && c.b_low >= 0.0 && c.b_low <= c.w_low &&
              c.b_high >= 0.0 && c.b_high <= c.w_high);
  const double beta = in.beta();
  rep.add("beta_matches", beta == r.beta || (std::isinf(beta) && std::isinf(r.beta)));

  const ReducedPoint pt = reduced_objective(in, c.effort);
  const double scale = 1.0 + std::abs(pt.profit);
  const double profit_dev = std::abs(pt.profit - r.profit);
  rep.add("profit_matches_reduced_objective", profit_dev <= 1e-9 * scale, profit_dev);
  const double gap_dev = std::abs((c.w_high - c.w_low) - marginal_cost(in.cost, c.effort));
  rep.add("wage_gap_equals_marginal_cost", gap_dev <= 1e-9 * (1.0 + c.w_high), gap_dev);
  const double theft_dev =
      std::max(std::abs(c.b_low - std::min(beta, c.w_low)), std::abs(c.b_high - std::min(beta, c.w_high)));
  rep.add("theft_is_capped_ideal", theft_dev <= 1e-9 * (1.0 + c.w_high), theft_dev);
  const double u = in.market.reservation_utility;
  rep.add("participation", r.worker_utility >= u - 1e-9 * (1.0 + u), u - r.worker_utility);
  return rep;
}

/// Sweep spec from JSON: each parameter key holds a number or a list.
inline SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config", "expected a JSON object");
  SweepSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "axis") {
      if (!value.is_string()) throw ValidationError(key, "expected a string");
      spec.axis = value.get<std::string>();
    } else if (key == "output") {
      if (!value.is_string()) throw ValidationError(key, "expected a string");
      spec.output = value.get<std::string>();
    } else if (SweepSpec::index_of(key) >= 0) {
      std::vector<double> vals;
      if (value.is_number()) {
        vals.push_back(value.get<double>());
      } else if (value.is_array()) {
        for (const auto& x : value) {
          if (!x.is_number()) throw ValidationError(key, "expected numbers");
          vals.push_back(x.get<double>());
        }
      } else {
        throw ValidationError(key, "expected a number or a list of numbers");
      }
      spec[key] = std::move(vals);
    } else {
      throw ValidationError(key, "unknown sweep key");
    }
  }
  spec.validate();
  return spec;
}

}  // namespace wagetheft
