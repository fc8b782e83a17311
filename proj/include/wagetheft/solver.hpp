#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "wagetheft/characterization.hpp"
#include "wagetheft/numeric.hpp"

namespace wagetheft {

/// Upper limit for the search interval; beyond this C(a) is numerically useless.
inline constexpr double kSearchCap = 1.0 - 1e-6;
inline constexpr double kTailSlopeThreshold = -1e-6;
inline constexpr double kKinkOverlap = 1e-9;

/// Efforts where a clamp in the closed forms switches branch.
struct BreakPoints {
  std::optional<double> low_wage_zero;   // u - a c'(a) + C(a) = 0
  std::optional<double> low_wage_beta;   // wL*(a) = beta
  std::optional<double> high_wage_beta;  // wH*(a) = beta
  double search_max = kSearchCap;        // g is strictly decreasing beyond this

  std::vector<double> sorted() const {
    std::vector<double> out;
    for (const auto& bp : {low_wage_zero, low_wage_beta, high_wage_beta})
      if (bp) out.push_back(*bp);
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct SegmentOptimum {
  double lo = 0.0;
  double hi = 0.0;
  double effort = 0.0;
  double profit = 0.0;
  int local_maxima = 0;  // interior local maxima seen by the coarse scan
};

struct SolveResult {
  Contract contract;
  double profit = 0.0;
  double worker_utility = 0.0;
  double beta = 0.0;
  BreakPoints breaks;
  std::vector<SegmentOptimum> segments;
  std::optional<ScalarOptimum> grid_check;  // set when SolveOptions::grid_check
};

struct SolveOptions {
  int scan_points = 256;  // coarse scan per segment before golden-section
  double tolerance = 1e-10;
  bool grid_check = false;
  int grid_points = 100000;
};

/// a c'(a) - C(a); non-decreasing, zero at a = 0.
inline double effort_rent(const CostSpec& c, double a) {
  return a * marginal_cost(c, a) - cost(c, a);
}

/// Slope of g past every break point, where wL* = bL* = 0 and bH* = beta:
/// P(yH - yL) + beta - E(beta) - c'(a) - a c''(a).
inline double tail_slope(const Instance& in, double a) {
  const double beta = in.beta();
  if (is_unbounded(beta)) return in.market.revenue_gap();
  return in.market.revenue_gap() + beta - in.expected_penalty(beta) -
         marginal_cost(in.cost, a) - a * cost_curvature(in.cost, a);
}

inline BreakPoints find_break_points(const Instance& in) {
  const double u = in.market.reservation_utility;
  const double beta = in.beta();
  const CostSpec& c = in.cost;
  const double top = kEffortCap;

  // Solves effort_rent(a) = target on (0, top) when the target is reachable.
  const auto rent_root = [&](double target) -> std::optional<double> {
    if (!(target > 0.0) || effort_rent(c, top) < target) return std::nullopt;
    return bisect_increasing([&](double a) { return effort_rent(c, a) - target; }, 0.0, top);
  };

  BreakPoints bp;
  if (u > 0.0) bp.low_wage_zero = rent_root(u);
  if (!is_unbounded(beta) && beta > 0.0 && beta < u) bp.low_wage_beta = rent_root(u - beta);

  // wH* is strictly increasing from u + c'(0).
  const auto high_wage = [&](double a) {
    return std::max(0.0, u - effort_rent(c, a)) + marginal_cost(c, a);
  };
  if (!is_unbounded(beta) && beta > high_wage(0.0) && high_wage(top) >= beta) {
    bp.high_wage_beta =
        bisect_increasing([&](double a) { return high_wage(a) - beta; }, 0.0, top);
  }

  const bool tail_reached = (u == 0.0 || bp.low_wage_zero) && !is_unbounded(beta);
  if (!tail_reached) return bp;

  const auto breaks = bp.sorted();
  const double start = breaks.empty() ? 0.0 : breaks.back();
  double a = start;
  do {
    a = 1.0 - 0.5 * (1.0 - a);
    if (a >= kSearchCap) return bp;
  } while (tail_slope(in, a) > kTailSlopeThreshold);
  bp.search_max = a;
  return bp;
}

/// Best of `n` uniformly spaced efforts on [lo, hi]; ties go to the smaller effort.
inline ScalarOptimum grid_scan(const Instance& in, double lo, double hi, int n) {
  ScalarOptimum best{lo, reduced_objective(in, lo).profit};
  for (int i = 1; i < n; ++i) {
    const double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double g = reduced_objective(in, a).profit;
    if (g > best.value) best = {a, g};
  }
  return best;
}

namespace detail {

/// Golden-section search pins a flat maximum only to about sqrt(eps); a
/// sign change of g' around it locates the stationary point to full precision.
inline std::optional<double> polish_stationary_point(const Instance& in, double x, double lo,
                                                     double hi, double tolerance) {
  if (!(x > lo && x < hi)) return std::nullopt;
  const auto slope = [&](double a) { return reduced_slope(in, a); };
  double d = std::max(8.0 * tolerance, 1e-12);
  for (int i = 0; i < 20; ++i, d *= 2.0) {
    const double l = std::max(lo, x - d);
    const double r = std::min(hi, x + d);
    if (slope(l) > 0.0 && slope(r) < 0.0) return bisect_decreasing(slope, l, r);
    if (l == lo && r == hi) break;
  }
  return std::nullopt;
}

inline SegmentOptimum search_segment(const Instance& in, double lo, double hi,
                                     const SolveOptions& opt) {
  const auto g = [&](double a) { return reduced_objective(in, a).profit; };
  const int n = std::max(opt.scan_points, 3);
  std::vector<double> xs(n), vs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    vs[i] = g(xs[i]);
  }

  SegmentOptimum seg{lo, hi, lo, vs[0], 0};
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (vs[i] > vs[best]) best = i;
    if (i + 1 < n && vs[i] > vs[i - 1] && vs[i] >= vs[i + 1]) ++seg.local_maxima;
  }

  const double left = xs[std::max(best - 1, 0)];
  const double right = xs[std::min(best + 1, n - 1)];
  ScalarOptimum refined = golden_section_maximize(g, left, right, opt.tolerance);
  if (const auto root = polish_stationary_point(in, refined.x, lo, hi, opt.tolerance)) {
    const double v = g(*root);
    if (v >= refined.value - 1e-12 * (1.0 + std::abs(refined.value))) refined = {*root, v};
  }

  const auto consider = [&](double a, double v) {
    if (v > seg.profit || (v == seg.profit && a < seg.effort)) {
      seg.effort = a;
      seg.profit = v;
    }
  };
  consider(xs[best], vs[best]);
  consider(refined.x, refined.value);
  consider(hi, vs[n - 1]);
  return seg;
}

}  // namespace detail

/// Maximizes g over [0, search_max] by splitting at the break points and
/// searching each smooth piece; both ends of every piece are evaluated.
inline SolveResult solve(const Instance& in, const SolveOptions& opt = {}) {
  in.validate();
  SolveResult res;
  res.beta = in.beta();
  res.breaks = find_break_points(in);
  const double top = res.breaks.search_max;

  std::vector<double> knots{0.0};
  for (double b : res.breaks.sorted())
    if (b > 0.0 && b < top) knots.push_back(b);
  knots.push_back(top);

  double best_a = 0.0;
  double best_g = reduced_objective(in, 0.0).profit;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = std::max(0.0, knots[i] - kKinkOverlap);
    const double hi = std::min(top, knots[i + 1] + kKinkOverlap);
    if (!(hi > lo)) continue;
    const SegmentOptimum seg = detail::search_segment(in, lo, hi, opt);
    res.segments.push_back(seg);
    for (const auto& [a, v] : {std::pair{seg.effort, seg.profit},
                               std::pair{knots[i], reduced_objective(in, knots[i]).profit}}) {
      if (v > best_g || (v == best_g && a < best_a)) {
        best_a = a;
        best_g = v;
      }
    }
  }

  const ReducedPoint pt = reduced_objective(in, best_a);
  res.contract = pt.contract();
  res.profit = pt.profit;
  res.worker_utility = pt.worker_utility;
  if (opt.grid_check) res.grid_check = grid_scan(in, 0.0, top, opt.grid_points);
  return res;
}

inline SolveResult solve(const MarketParams& m, const CostSpec& c, const PenaltySpec& s,
                         const SolveOptions& opt = {}) {
  return solve(Instance{m, c, s}, opt);
}

/// c'(0) < P (yH - yL): sufficient for a strictly positive optimal effort.
inline bool positive_effort_condition(const MarketParams& m, const CostSpec& c) {
  validate(m);
  validate(c);
  return marginal_cost(c, 0.0) < m.revenue_gap();
}

}  // namespace wagetheft
