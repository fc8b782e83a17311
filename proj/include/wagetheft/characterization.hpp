#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

#include "wagetheft/model.hpp"

namespace wagetheft {

/// Everything the employer chooses once the effort target is fixed.
struct ReducedPoint {
  double effort = 0.0;
  double w_low = 0.0;
  double w_high = 0.0;
  double b_low = 0.0;
  double b_high = 0.0;
  double profit = 0.0;          // g(a)
  double worker_utility = 0.0;  // against promised wages

  Contract contract() const { return {w_high, w_low, b_high, b_low, effort}; }
};

/// A full instance of the one-shot problem with its ideal theft resolved.
///
/// `theft_disabled` pins the ideal theft to zero, which turns the problem
/// into the honest-employer program used by the repeated game.
struct Instance {
  MarketParams market;
  CostSpec cost;
  PenaltySpec penalty;
  bool theft_disabled = false;

  void validate() const {
    wagetheft::validate(market);
    wagetheft::validate(cost);
    wagetheft::validate(penalty);
  }

  double beta() const {
    return theft_disabled ? 0.0 : ideal_theft(penalty, market.inspection_rate);
  }

  double expected_penalty(double b) const {
    return wagetheft::expected_penalty(penalty, market.inspection_rate, b);
  }
};

namespace detail {

inline void require_reduced_effort(double a) {
  if (!(a >= 0.0 && a < kEffortCap))
    throw std::domain_error("effort outside [0, 1 - 1e-9): " + std::to_string(a));
}

}  // namespace detail

/// wL*(a) = max{0, u - a c'(a) + C(a)}, the cheapest low wage meeting IR.
inline double optimal_low_wage(const MarketParams& m, const CostSpec& c, double a) {
  detail::require_reduced_effort(a);
  return std::max(0.0, m.reservation_utility - a * marginal_cost(c, a) + cost(c, a));
}

/// wH*(a) = wL*(a) + c'(a); the gap is what makes `a` incentive compatible.
inline double optimal_high_wage(const MarketParams& m, const CostSpec& c, double a) {
  return optimal_low_wage(m, c, a) + marginal_cost(c, a);
}

inline double optimal_theft(double beta, double wage) {
  if (!(wage >= 0.0)) throw std::domain_error("wage must be nonnegative");
  return std::min(beta, wage);
}

/// Employer's expected payoff with a fixed effort and given wages and theft.
inline double employer_profit(const Instance& in, double a, double w_high, double w_low,
                              double b_high, double b_low) {
  const auto& m = in.market;
  const double high = m.revenue_high() - w_high + b_high - in.expected_penalty(b_high);
  const double low = m.revenue_low() - w_low + b_low - in.expected_penalty(b_low);
  return a * high + (1.0 - a) * low;
}

/// a wH + (1-a) wL - C(a), the worker's expected utility on promised wages.
inline double worker_utility(const CostSpec& c, double a, double w_high, double w_low) {
  return a * w_high + (1.0 - a) * w_low - cost(c, a);
}

inline double worker_utility(const CostSpec& c, const ReducedPoint& pt) {
  return worker_utility(c, pt.effort, pt.w_high, pt.w_low);
}

/// Optimal wages, theft, and profit for inducing effort `a`.
inline ReducedPoint reduced_objective(const Instance& in, double a) {
  detail::require_reduced_effort(a);
  const double beta = in.beta();
  ReducedPoint pt;
  pt.effort = a;
  pt.w_low = optimal_low_wage(in.market, in.cost, a);
  pt.w_high = pt.w_low + marginal_cost(in.cost, a);
  pt.b_low = optimal_theft(beta, pt.w_low);
  pt.b_high = optimal_theft(beta, pt.w_high);
  pt.profit = employer_profit(in, a, pt.w_high, pt.w_low, pt.b_high, pt.b_low);
  pt.worker_utility = worker_utility(in.cost, pt);
  return pt;
}

/// Derivative g'(a) on the smooth piece containing `a`. Each of wL*, bL*, bH*
/// follows the branch active at `a`; at a break point the right branch wins.
inline double reduced_slope(const Instance& in, double a) {
  const ReducedPoint pt = reduced_objective(in, a);
  const double beta = in.beta();
  const MarketParams& m = in.market;
  const double curvature = cost_curvature(in.cost, a);
  const double dw_low = pt.w_low > 0.0 ? -a * curvature : 0.0;
  const double dw_high = dw_low + curvature;
  const double db_low = pt.w_low < beta ? dw_low : 0.0;
  const double db_high = pt.w_high < beta ? dw_high : 0.0;
  const auto dpen = [&](double b) {
    return marginal_expected_penalty(in.penalty, m.inspection_rate, b);
  };
  const double high = m.revenue_high() - pt.w_high + pt.b_high - in.expected_penalty(pt.b_high);
  const double low = m.revenue_low() - pt.w_low + pt.b_low - in.expected_penalty(pt.b_low);
  return high - low + a * (-dw_high + db_high * (1.0 - dpen(pt.b_high))) +
         (1.0 - a) * (-dw_low + db_low * (1.0 - dpen(pt.b_low)));
}

inline ReducedPoint reduced_objective(const MarketParams& m, const CostSpec& c,
                                      const PenaltySpec& s, double a) {
  return reduced_objective(Instance{m, c, s}, a);
}

/// Theft is eliminated iff gamma * eta'(0) >= 1.
inline bool theft_eliminated(double marginal_penalty_at_zero, double gamma) {
  return gamma > 0.0 && gamma * marginal_penalty_at_zero >= 1.0;
}

/// For eta(b) = sigma b^p with p > 1, eta'(0) = 0, so this never holds.
inline bool theft_eliminated(const PenaltySpec& s, double gamma) {
  validate(s);
  return theft_eliminated(marginal_expected_penalty(s, 1.0, 0.0), gamma);
}

}  // namespace wagetheft
