#pragma once

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "wagetheft/characterization.hpp"
#include "wagetheft/report.hpp"
#include "wagetheft/solver.hpp"

namespace wagetheft {

/// Enumeration grid for the brute-force solver.
struct GridSpec {
  double w_max = 100.0;
  int n_w = 400;             // wage grid points per axis
  int n_b = 200;             // theft grid points per wage
  int n_a = 2000;            // effort grid points when scan_effort is set
  bool scan_effort = false;  // IC by effort scan instead of the analytic inverse
  int max_expansions = 8;    // w_max doublings when the optimum hits the edge

  void validate() const {
    if (!(w_max > 0.0)) throw ValidationError("w_max", "wage ceiling must be positive");
    if (n_w < 2) throw ValidationError("n_w", "need at least two wage points");
    if (n_b < 2) throw ValidationError("n_b", "need at least two theft points");
    if (n_a < 2) throw ValidationError("n_a", "need at least two effort points");
  }

  double wage_step() const { return w_max / static_cast<double>(n_w - 1); }
};

struct OracleSolution {
  Contract contract;
  double profit = 0.0;
  double worker_utility = 0.0;
  double beta = 0.0;
  double w_max = 0.0;
  double wage_step = 0.0;
  bool on_boundary = false;  // best cell has wH = w_max even after expansion
  int expansions = 0;
};

/// IR holds up to this relative slack so binding cells survive rounding.
inline constexpr double kParticipationSlack = 1e-9;

inline bool participates(double utility, double reservation) {
  return utility >= reservation - kParticipationSlack * std::max(1.0, reservation);
}

namespace detail {

struct TheftChoice {
  double amount = 0.0;
  double gain = 0.0;  // b - E(b)
};

/// Best theft from wage w by enumeration over {0, beta, w} and a uniform grid.
inline TheftChoice best_theft_by_scan(const Instance& in, double beta, double w, int n_b) {
  TheftChoice best{0.0, 0.0};
  const auto consider = [&](double b) {
    const double gain = b - in.expected_penalty(b);
    if (gain > best.gain || (gain == best.gain && b < best.amount)) best = {b, gain};
  };
  consider(std::min(beta, w));
  consider(w);
  for (int k = 1; k < n_b; ++k) consider(w * static_cast<double>(k) / static_cast<double>(n_b - 1));
  return best;
}

/// Worker effort for wage gap `gap` by scanning an effort grid.
inline double effort_by_scan(const CostSpec& c, double gap, int n_a) {
  double best_a = 0.0;
  double best_v = 0.0;
  for (int k = 1; k < n_a; ++k) {
    const double a = kEffortCap * static_cast<double>(k) / static_cast<double>(n_a);
    const double v = a * gap - cost(c, a);
    if (v > best_v) {
      best_v = v;
      best_a = a;
    }
  }
  return best_a;
}

struct Cell {
  int i = -1;  // wH index
  int j = -1;  // wL index
  double profit = 0.0;
  double effort = 0.0;
};

inline bool better(const Cell& x, const Cell& y) {
  if (y.i < 0) return x.i >= 0;
  if (x.i < 0) return false;
  if (x.profit != y.profit) return x.profit > y.profit;
  return std::pair{x.i, x.j} < std::pair{y.i, y.j};
}

}  // namespace detail

/// Solves the full five-variable program by enumerating the wage grid.
///
/// The worker responds to promised wages only. Theft is chosen per wage by
/// enumeration, which is exact here because the profit terms separate in
/// (bH, bL) once the effort is known.
inline OracleSolution brute_force_solve(const Instance& in, GridSpec grid) {
  in.validate();
  grid.validate();
  const double beta = in.beta();
  const MarketParams& m = in.market;

  OracleSolution out;
  for (int attempt = 0;; ++attempt) {
    const int n = grid.n_w;
    const double step = grid.wage_step();
    const auto wage = [&](int i) { return step * static_cast<double>(i); };

    std::vector<double> effort_for_gap(n);
    std::vector<detail::TheftChoice> theft(n);
    for (int d = 0; d < n; ++d) {
      effort_for_gap[d] = grid.scan_effort ? detail::effort_by_scan(in.cost, wage(d), grid.n_a)
                                           : inverse_marginal_cost(in.cost, wage(d));
      if (!in.theft_disabled) theft[d] = detail::best_theft_by_scan(in, beta, wage(d), grid.n_b);
    }

    const auto scan_rows = [&](int row_begin, int row_end) {
      detail::Cell best;
      for (int i = row_begin; i < row_end; ++i) {
        for (int j = 0; j < n; ++j) {
          const double a = i > j ? effort_for_gap[i - j] : 0.0;
          const double w_high = wage(i);
          const double w_low = wage(j);
          if (!participates(worker_utility(in.cost, a, w_high, w_low), m.reservation_utility))
            continue;
          const double profit = a * (m.revenue_high() - w_high + theft[i].gain) +
                                (1.0 - a) * (m.revenue_low() - w_low + theft[j].gain);
          const detail::Cell cell{i, j, profit, a};
          if (detail::better(cell, best)) best = cell;
        }
      }
      return best;
    };

    const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, n);
    std::vector<detail::Cell> partial(workers);
    {
      std::vector<std::jthread> pool;
      for (int t = 0; t < workers; ++t) {
        const int b = n * t / workers;
        const int e = n * (t + 1) / workers;
        pool.emplace_back([&, t, b, e] { partial[t] = scan_rows(b, e); });
      }
    }
    detail::Cell best;
    for (const auto& cell : partial)
      if (detail::better(cell, best)) best = cell;

    out.beta = beta;
    out.w_max = grid.w_max;
    out.wage_step = step;
    out.expansions = attempt;
    if (best.i < 0) {
      out.on_boundary = true;
      out.profit = 0.0;
    } else {
      out.contract = {wage(best.i), wage(best.j), theft[best.i].amount, theft[best.j].amount,
                      best.effort};
      out.profit = best.profit;
      out.worker_utility =
          worker_utility(in.cost, best.effort, out.contract.w_high, out.contract.w_low);
      out.on_boundary = best.i == n - 1;
    }
    if (!out.on_boundary || attempt >= grid.max_expansions) return out;
    grid.w_max *= 2.0;
  }
}

struct TheftRuleCheck {
  double expected_low = 0.0;
  double expected_high = 0.0;
  double argmax_low = 0.0;
  double argmax_high = 0.0;
  double step_low = 0.0;
  double step_high = 0.0;
  bool unique = true;

  double max_deviation() const {
    return std::max(std::abs(argmax_low - expected_low), std::abs(argmax_high - expected_high));
  }
  bool passed() const {
    return unique && std::abs(argmax_low - expected_low) <= step_low &&
           std::abs(argmax_high - expected_high) <= step_high;
  }
};

/// Scans theft over [0, w*(a)] and compares the argmax with min{beta, w*(a)}.
inline TheftRuleCheck verify_theft_rule(const Instance& in, double a, int n = 10000) {
  if (!(a > 0.0 && a < kEffortCap)) throw std::domain_error("theft-rule check needs a in (0, 1)");
  const ReducedPoint pt = reduced_objective(in, a);

  TheftRuleCheck out;
  out.expected_low = pt.b_low;
  out.expected_high = pt.b_high;

  // Employer profit at effort a and wages w*(a), as a function of one theft.
  const auto scan = [&](double w, bool high, double& argmax, double& step) {
    step = w / static_cast<double>(n - 1);
    std::vector<double> values(n);
    int best = 0;
    for (int k = 0; k < n; ++k) {
      const double b = w * static_cast<double>(k) / static_cast<double>(n - 1);
      values[k] = high ? employer_profit(in, a, pt.w_high, pt.w_low, b, pt.b_low)
                       : employer_profit(in, a, pt.w_high, pt.w_low, pt.b_high, b);
      if (values[k] > values[best]) best = k;
    }
    argmax = w * static_cast<double>(best) / static_cast<double>(n - 1);
    for (int k = 0; k < n; ++k)
      if (std::abs(k - best) > 2 && values[k] >= values[best] && w > 0.0) out.unique = false;
  };
  scan(pt.w_low, false, out.argmax_low, out.step_low);
  scan(pt.w_high, true, out.argmax_high, out.step_high);
  return out;
}

/// Verification report used by the `oracle-check` command.
inline Report oracle_report(const Instance& in, const GridSpec& grid,
                            const std::vector<double>& efforts = {0.1, 0.25, 0.5, 0.75, 0.9}) {
  Report rep;
  for (double a : efforts) {
    const TheftRuleCheck tr = verify_theft_rule(in, a);
    rep.add("theft_rule[a=" + format_number(a) + "]", tr.passed(), tr.max_deviation());
  }

  const SolveResult sol = solve(in, {.grid_check = true});
  const double grid_gap = sol.grid_check->value - sol.profit;
  rep.add("solver_vs_grid_scan", grid_gap <= 1e-6 * (1.0 + std::abs(sol.profit)),
          std::abs(grid_gap));

  const OracleSolution orc = brute_force_solve(in, grid);
  const double tol = 2.0 * orc.wage_step;
  rep.add("oracle_not_on_boundary", !orc.on_boundary, 0.0);
  rep.add("oracle_vs_solver_profit", std::abs(orc.profit - sol.profit) <= tol,
          std::abs(orc.profit - sol.profit));
  rep.add("oracle_not_above_solver", orc.profit <= sol.profit + 1e-9 * (1.0 + std::abs(sol.profit)),
          std::max(0.0, orc.profit - sol.profit));
  const double gap = orc.contract.w_high - orc.contract.w_low;
  const double gap_dev =
      orc.contract.effort > 0.0 ? std::abs(gap - marginal_cost(in.cost, orc.contract.effort)) : 0.0;
  rep.add("oracle_wage_gap_matches_marginal_cost", gap_dev <= tol, gap_dev);
  return rep;
}

}  // namespace wagetheft
