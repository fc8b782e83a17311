#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wagetheft/report.hpp"
#include "wagetheft/solver.hpp"

namespace wagetheft {

/// Parameter names in sweep order; also the CSV and JSON keys.
inline constexpr std::array<const char*, 9> kSweepParams = {"P", "yL", "yH", "sigma", "p",
                                                            "gamma", "k", "q", "u"};

using ParamVector = std::array<double, 9>;

/// Value lists per parameter; the sweep covers their cartesian product.
/// Defaults reproduce the full numerical-study grid.
struct SweepSpec {
  std::array<std::vector<double>, 9> values = {{
      {10, 15, 20, 30, 40},
      {30, 40},
      {50},
      {0.25, 0.5, 0.75, 1, 1.25, 1.5, 2, 3, 4, 5},
      {1.1, 1.2, 1.3, 1.4, 1.5},
      {0.1, 0.2, 0.3, 0.4, 0.5, 1},
      {0.1, 0.5, 1},
      {0.1, 0.5, 1, 3, 5},
      {10, 25, 50, 100, 200, 300, 400, 500, 600},
  }};
  std::string axis;  // parameter varied within each figure family; may be empty
  std::string output;

  static int index_of(const std::string& name) {
    for (std::size_t i = 0; i < kSweepParams.size(); ++i)
      if (name == kSweepParams[i]) return static_cast<int>(i);
    return -1;
  }

  std::vector<double>& operator[](const std::string& name) {
    const int i = index_of(name);
    if (i < 0) throw ValidationError(name, "unknown sweep parameter");
    return values[static_cast<std::size_t>(i)];
  }

  /// Single-valued context with one list overridden.
  static SweepSpec context(const ParamVector& fixed, const std::string& axis,
                           std::vector<double> axis_values) {
    SweepSpec spec;
    for (std::size_t i = 0; i < fixed.size(); ++i) spec.values[i] = {fixed[i]};
    spec.axis = axis;
    spec[axis] = std::move(axis_values);
    return spec;
  }

  void validate() const {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i].empty()) throw ValidationError(kSweepParams[i], "value list is empty");
    if (!axis.empty() && index_of(axis) < 0) throw ValidationError("axis", "unknown parameter");
  }

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (const auto& v : values) n *= v.size();
    return n;
  }
};

struct SweepRow {
  ParamVector params{};
  double beta = 0.0;
  double a_star = 0.0;
  double w_high = 0.0;
  double w_low = 0.0;
  double b_high = 0.0;
  double b_low = 0.0;
  double profit = 0.0;
  double worker_utility = 0.0;
  std::string error;  // machine-readable code; empty on success

  double param(const std::string& name) const {
    return params[static_cast<std::size_t>(SweepSpec::index_of(name))];
  }
  double effective_high() const { return w_high - b_high; }
  double effective_low() const { return w_low - b_low; }
  std::optional<double> theft_share_high() const {
    if (w_high == 0.0) return std::nullopt;
    return b_high / w_high;
  }
  std::optional<double> theft_share_low() const {
    if (w_low == 0.0) return std::nullopt;
    return b_low / w_low;
  }
};

inline Instance instance_from_params(const ParamVector& v) {
  Instance in;
  in.market = {v[0], v[2], v[1], v[8], v[5]};
  in.penalty = {v[3], v[4]};
  in.cost = {v[6], v[7]};
  return in;
}

inline SweepRow solve_cell(const ParamVector& params) {
  SweepRow row;
  row.params = params;
  try {
    const SolveResult r = solve(instance_from_params(params));
    row.beta = r.beta;
    row.a_star = r.contract.effort;
    row.w_high = r.contract.w_high;
    row.w_low = r.contract.w_low;
    row.b_high = r.contract.b_high;
    row.b_low = r.contract.b_low;
    row.profit = r.profit;
    row.worker_utility = r.worker_utility;
  } catch (const ValidationError& e) {
    row.error = "invalid_" + e.key();
  } catch (const std::domain_error&) {
    row.error = "domain_error";
  } catch (const std::exception&) {
    row.error = "internal_error";
  }
  return row;
}

/// One row per cell, ordered lexicographically by (P, yL, yH, sigma, p,
/// gamma, k, q, u). Cells are solved concurrently.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec_in, unsigned threads = 0) {
  spec_in.validate();
  SweepSpec spec = spec_in;
  for (auto& v : spec.values) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  const std::size_t n = spec.cell_count();
  std::vector<ParamVector> cells(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t rest = c;
    for (std::size_t i = spec.values.size(); i-- > 0;) {
      const auto& v = spec.values[i];
      cells[c][i] = v[rest % v.size()];
      rest /= v.size();
    }
  }

  std::vector<SweepRow> rows(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < n; c = next++) rows[c] = solve_cell(cells[c]);
      });
  }
  return rows;
}

inline constexpr const char* kSweepCsvHeader =
    "P,yL,yH,sigma,p,gamma,k,q,u,beta,a_star,wH,wL,bH,bL,effective_wH,effective_wL,profit,"
    "worker_utility,theft_share_H,theft_share_L,error";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  const auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
  for (const auto& r : rows) {
    for (double v : r.params) os << format_number(v) << ',';
    if (r.error.empty()) {
      os << format_number(r.beta) << ',' << format_number(r.a_star) << ','
         << format_number(r.w_high) << ',' << format_number(r.w_low) << ','
         << format_number(r.b_high) << ',' << format_number(r.b_low) << ','
         << format_number(r.effective_high()) << ',' << format_number(r.effective_low()) << ','
         << format_number(r.profit) << ',' << format_number(r.worker_utility) << ','
         << opt(r.theft_share_high()) << ',' << opt(r.theft_share_low()) << ',';
    } else {
      os << ",,,,,,,,,,,,";
    }
    os << r.error << '\n';
  }
}

namespace detail {

/// Rows grouped by every parameter except `axis`, each group sorted along it.
inline std::vector<std::vector<const SweepRow*>> group_along(const std::vector<SweepRow>& rows,
                                                             const std::string& axis) {
  const auto ai = static_cast<std::size_t>(SweepSpec::index_of(axis));
  std::map<ParamVector, std::vector<const SweepRow*>> groups;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    ParamVector key = r.params;
    key[ai] = 0.0;
    groups[key].push_back(&r);
  }
  std::vector<std::vector<const SweepRow*>> out;
  for (auto& [key, g] : groups) {
    std::sort(g.begin(), g.end(),
              [&](const SweepRow* x, const SweepRow* y) { return x->params[ai] < y->params[ai]; });
    out.push_back(std::move(g));
  }
  return out;
}

template <class Field>
void monotone_check(Report& rep, const std::vector<std::vector<const SweepRow*>>& groups,
                    const std::string& name, Field field, bool increasing) {
  double worst = 0.0;
  for (const auto& g : groups) {
    for (std::size_t i = 1; i < g.size(); ++i) {
      const double prev = field(*g[i - 1]);
      const double cur = field(*g[i]);
      const double step = increasing ? prev - cur : cur - prev;  // > 0 means violation
      const double slack = 1e-9 * (1.0 + std::abs(prev));
      if (step > slack) worst = std::max(worst, step);
    }
  }
  rep.add(name, worst == 0.0, worst);
}

}  // namespace detail

/// Trend checks for a figure-family sweep along `axis`.
inline Report qualitative_checks(const std::vector<SweepRow>& rows, const std::string& axis) {
  const auto groups = detail::group_along(rows, axis);
  const auto bh = [](const SweepRow& r) { return r.b_high; };
  const auto wh = [](const SweepRow& r) { return r.w_high; };
  const auto wl = [](const SweepRow& r) { return r.w_low; };
  const auto effort = [](const SweepRow& r) { return r.a_star; };

  Report rep;
  if (axis == "sigma") {
    detail::monotone_check(rep, groups, "theft_high_nonincreasing_in_sigma", bh, false);
    double worst_ratio = 0.0;
    for (const auto& g : groups) {
      if (g.size() < 2 || g.front()->b_high == 0.0) continue;
      worst_ratio = std::max(worst_ratio, g.back()->b_high / g.front()->b_high);
    }
    rep.add("theft_vanishes_with_sigma", worst_ratio < 1e-2, worst_ratio);
  } else if (axis == "gamma") {
    detail::monotone_check(rep, groups, "theft_high_nonincreasing_in_gamma", bh, false);
  } else if (axis == "u") {
    detail::monotone_check(rep, groups, "high_wage_nondecreasing_in_u", wh, true);
    detail::monotone_check(rep, groups, "low_wage_nondecreasing_in_u", wl, true);
  } else if (axis == "k") {
    detail::monotone_check(rep, groups, "high_wage_nondecreasing_in_k", wh, true);
    detail::monotone_check(rep, groups, "effort_nonincreasing_in_k", effort, false);
  } else if (axis == "q") {
    detail::monotone_check(rep, groups, "effort_nonincreasing_in_q", effort, false);
  } else {
    throw ValidationError("axis", "no trend family for sweep axis '" + axis + "'");
  }
  return rep;
}

}  // namespace wagetheft
