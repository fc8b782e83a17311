#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "wagetheft/characterization.hpp"
#include "wagetheft/oracle.hpp"
#include "wagetheft/report.hpp"
#include "wagetheft/solver.hpp"

namespace wagetheft {

// Forecast rule variants. Each is time-converging: once the observed theft
// is constant the forecast tends to it.
struct LastObservation {};
struct RunningMean {};
struct MovingAverage {
  int window = 5;
};
struct ExponentialSmoothing {
  double alpha = 0.5;
};

struct ForecastRule {
  std::variant<LastObservation, RunningMean, MovingAverage, ExponentialSmoothing> kind;
  double initial = 0.0;  // forecast before anything has been observed

  void validate() const {
    if (!(initial >= 0.0)) throw ValidationError("initial_forecast", "must be nonnegative");
    if (const auto* ma = std::get_if<MovingAverage>(&kind); ma && ma->window < 1)
      throw ValidationError("window", "moving-average window must be at least 1");
    if (const auto* es = std::get_if<ExponentialSmoothing>(&kind);
        es && !(es->alpha > 0.0 && es->alpha <= 1.0))
      throw ValidationError("alpha", "smoothing factor must lie in (0, 1]");
  }

  std::string name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, LastObservation>) return "last_observation";
          else if constexpr (std::is_same_v<K, RunningMean>) return "running_mean";
          else if constexpr (std::is_same_v<K, MovingAverage>)
            return "moving_average(" + std::to_string(k.window) + ")";
          else return "exponential_smoothing(" + format_number(k.alpha) + ")";
        },
        kind);
  }
};

/// Running forecast state for one outcome's theft series.
class Forecaster {
public:
  explicit Forecaster(ForecastRule rule) : rule_(std::move(rule)), value_(rule_.initial) {
    rule_.validate();
  }

  double value() const noexcept { return value_; }

  void observe(double b) {
    ++count_;
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, LastObservation>) {
            value_ = b;
          } else if constexpr (std::is_same_v<K, RunningMean>) {
            sum_ += b;
            value_ = sum_ / static_cast<double>(count_);
          } else if constexpr (std::is_same_v<K, MovingAverage>) {
            window_.push_back(b);
            if (static_cast<int>(window_.size()) > k.window) window_.pop_front();
            double s = 0.0;
            for (double x : window_) s += x;
            value_ = s / static_cast<double>(window_.size());
          } else {
            value_ = k.alpha * b + (1.0 - k.alpha) * value_;
          }
        },
        rule_.kind);
  }

private:
  ForecastRule rule_;
  double value_ = 0.0;
  double sum_ = 0.0;
  long count_ = 0;
  std::deque<double> window_;
};

/// The same wages and planned theft every period.
struct FixedStrategy {
  double w_high = 0.0;
  double w_low = 0.0;
  double b_high = 0.0;
  double b_low = 0.0;

  void validate() const { wagetheft::validate(Contract{w_high, w_low, b_high, b_low, 0.0}); }

  FixedStrategy honest_twin() const { return {w_high - b_high, w_low - b_low, 0.0, 0.0}; }
};

/// One period given the worker's theft forecasts.
struct PeriodOutcome {
  bool employed = false;
  double effort = 0.0;
  double worker_utility = 0.0;  // forecast-based expected utility
  double profit = 0.0;          // employer expected profit, 0 when rejected
};

/// The worker discounts promised wages by the forecast, (w - bhat)^+ on both
/// IC and IR, and accepts iff the best-response utility reaches u.
inline PeriodOutcome play_period(const Instance& in, const FixedStrategy& s, double bhat_high,
                                 double bhat_low) {
  const double eff_high = std::max(0.0, s.w_high - bhat_high);
  const double eff_low = std::max(0.0, s.w_low - bhat_low);
  PeriodOutcome out;
  const double a = worker_best_response(in.cost, eff_high, eff_low);
  out.worker_utility = worker_utility(in.cost, a, eff_high, eff_low);
  if (!participates(out.worker_utility, in.market.reservation_utility)) return out;
  out.employed = true;
  out.effort = a;
  out.profit = employer_profit(in, a, s.w_high, s.w_low, s.b_high, s.b_low);
  return out;
}

/// Limit of the repeated game once forecasts equal the actual theft.
inline PeriodOutcome steady_state(const Instance& in, const FixedStrategy& s) {
  in.validate();
  s.validate();
  return play_period(in, s, s.b_high, s.b_low);
}

inline double steady_state_profit(const Instance& in, const FixedStrategy& s) {
  return steady_state(in, s).profit;
}

struct SimRecord {
  int t = 0;
  double bhat_high = 0.0;
  double bhat_low = 0.0;
  double effort = 0.0;
  bool employed = false;
  double profit = 0.0;
  double worker_utility = 0.0;
};

struct SimTrace {
  std::vector<SimRecord> periods;
  bool converged = false;
  std::optional<int> periods_to_converge;  // first t from which forecasts stay within tolerance
  double limit_profit = 0.0;

  double mean_profit_tail(std::size_t n) const {
    n = std::min(n, periods.size());
    if (n == 0) return 0.0;
    double s = 0.0;
    for (auto it = periods.end() - static_cast<std::ptrdiff_t>(n); it != periods.end(); ++it)
      s += it->profit;
    return s / static_cast<double>(n);
  }
};

struct SimOptions {
  double convergence_tolerance = 1e-8;
  /// When set, the profit column holds a sampled outcome rather than the
  /// expectation. Forecasts and dominance checks are unaffected.
  std::optional<std::uint64_t> seed;
};

/// Plays `periods` rounds of the fixed strategy against a forecasting worker.
/// Forecasts only move in periods where the worker was employed.
inline SimTrace simulate(const Instance& in, const FixedStrategy& s, const ForecastRule& rule,
                         int periods, const SimOptions& opt = {}) {
  in.validate();
  s.validate();
  if (periods < 1) throw ValidationError("periods", "need at least one period");
  Forecaster high(rule);
  Forecaster low(rule);

  std::optional<std::mt19937_64> rng;
  if (opt.seed) rng.emplace(*opt.seed);

  SimTrace trace;
  trace.periods.reserve(static_cast<std::size_t>(periods));
  for (int t = 1; t <= periods; ++t) {
    const PeriodOutcome o = play_period(in, s, high.value(), low.value());
    SimRecord rec{t, high.value(), low.value(), o.effort, o.employed, o.profit, o.worker_utility};

    const bool close = std::abs(high.value() - s.b_high) < opt.convergence_tolerance &&
                       std::abs(low.value() - s.b_low) < opt.convergence_tolerance;
    if (!close) trace.periods_to_converge.reset();
    else if (!trace.periods_to_converge) trace.periods_to_converge = t;

    if (rng && o.employed) {
      const auto& m = in.market;
      const bool high_outcome = std::bernoulli_distribution(o.effort)(*rng);
      rec.profit = high_outcome ? m.revenue_high() - s.w_high + s.b_high - in.expected_penalty(s.b_high)
                                : m.revenue_low() - s.w_low + s.b_low - in.expected_penalty(s.b_low);
    }
    trace.periods.push_back(rec);

    if (o.employed) {
      high.observe(s.b_high);
      low.observe(s.b_low);
    }
  }
  trace.converged = trace.periods_to_converge.has_value();
  trace.limit_profit = steady_state_profit(in, s);
  return trace;
}

/// CSV columns: t, bhat_H, bhat_L, a, employed, profit, worker_utility.
inline void write_trace_csv(std::ostream& os, const SimTrace& trace) {
  os << "t,bhat_H,bhat_L,a,employed,profit,worker_utility\n";
  for (const auto& r : trace.periods) {
    os << r.t << ',' << format_number(r.bhat_high) << ',' << format_number(r.bhat_low) << ','
       << format_number(r.effort) << ',' << (r.employed ? 1 : 0) << ',' << format_number(r.profit)
       << ',' << format_number(r.worker_utility) << '\n';
  }
}

struct DominanceCheck {
  double original = 0.0;
  double honest = 0.0;
  double effort = 0.0;
  bool accepted = false;
  double predicted_margin = 0.0;  // a E(bH) + (1-a) E(bL)

  double margin() const { return honest - original; }
  bool strict_expected() const { return accepted && predicted_margin > 0.0; }

  bool passed(double tol = 1e-9) const {
    if (margin() < -tol) return false;
    if (accepted && std::abs(margin() - predicted_margin) > tol) return false;
    if (strict_expected() && !(margin() > 0.0)) return false;
    return true;
  }
};

/// Compares a strategy with its honest twin (promise w - b, steal nothing).
/// Effective wages coincide, so the worker behaves identically under both.
inline DominanceCheck check_dominance(const Instance& in, const FixedStrategy& s) {
  const PeriodOutcome orig = steady_state(in, s);
  const PeriodOutcome twin = steady_state(in, s.honest_twin());
  DominanceCheck out;
  out.original = orig.profit;
  out.honest = twin.profit;
  out.effort = orig.effort;
  out.accepted = orig.employed;
  if (orig.employed)
    out.predicted_margin = orig.effort * in.expected_penalty(s.b_high) +
                           (1.0 - orig.effort) * in.expected_penalty(s.b_low);
  return out;
}

struct OptimalFixedStrategy {
  FixedStrategy strategy;
  double effort = 0.0;
  double profit = 0.0;
};

/// Best fixed strategy against a time-converging forecaster: the honest
/// contract solving the one-shot program with theft switched off.
inline OptimalFixedStrategy optimal_fixed_strategy(const Instance& in) {
  if (!positive_effort_condition(in.market, in.cost))
    throw ValidationError("k", "c'(0) must be below P (yH - yL)");
  Instance honest = in;
  honest.theft_disabled = true;
  const SolveResult sol = solve(honest);
  return {{sol.contract.w_high, sol.contract.w_low, 0.0, 0.0}, sol.contract.effort, sol.profit};
}

/// Draws fixed strategies spread around the scale of the honest optimum.
inline std::vector<FixedStrategy> sample_strategies(const Instance& in, int n, std::uint64_t seed) {
  Instance honest = in;
  honest.theft_disabled = true;
  const double scale = std::max({1.0, in.market.reservation_utility,
                                 reduced_objective(honest, 0.5).w_high});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<FixedStrategy> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    FixedStrategy s;
    s.w_low = 1.5 * scale * unit(rng);
    s.w_high = s.w_low + 2.0 * scale * unit(rng);
    s.b_high = unit(rng) < 0.2 ? 0.0 : s.w_high * unit(rng);
    s.b_low = unit(rng) < 0.2 ? 0.0 : s.w_low * unit(rng);
    out.push_back(s);
  }
  return out;
}

/// Dominance of honest twins over `n` random strategies, plus the check that
/// no sampled strategy beats the optimal fixed strategy.
inline Report dominance_audit(const Instance& in, int n, std::uint64_t seed) {
  Report rep;
  const OptimalFixedStrategy best = optimal_fixed_strategy(in);
  const double tol_profit = 1e-6 * (1.0 + std::abs(best.profit));

  double worst_margin_error = 0.0;
  double worst_excess = 0.0;
  int dominance_failures = 0;
  int strict_failures = 0;
  int accepted = 0;
  for (const FixedStrategy& s : sample_strategies(in, n, seed)) {
    const DominanceCheck d = check_dominance(in, s);
    if (d.accepted) {
      ++accepted;
      worst_margin_error = std::max(worst_margin_error, std::abs(d.margin() - d.predicted_margin));
    }
    if (!d.passed()) ++dominance_failures;
    if (d.strict_expected() && !(d.margin() > 0.0)) ++strict_failures;
    worst_excess = std::max(worst_excess, steady_state_profit(in, s) - best.profit);
  }
  rep.add("honest_twin_dominates[" + std::to_string(accepted) + " accepted]",
          dominance_failures == 0, worst_margin_error);
  rep.add("strict_when_theft_and_effort", strict_failures == 0, 0.0);
  const bool zero_theft = best.strategy.b_high == 0.0 && best.strategy.b_low == 0.0;
  rep.add("optimal_fixed_strategy_no_theft", zero_theft, 0.0);
  rep.add("optimal_fixed_effort_interior", best.effort > 0.0 && best.effort < 1.0, best.effort);
  rep.add("optimal_fixed_strategy_unbeaten", worst_excess <= tol_profit, std::max(0.0, worst_excess));
  return rep;
}

}  // namespace wagetheft
