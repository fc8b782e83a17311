#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "wagetheft/numeric.hpp"

namespace wagetheft {

/// Thrown when a parameter or argument is outside its admissible range.
/// `key()` names the offending field so front ends can report it.
class ValidationError : public std::invalid_argument {
public:
  ValidationError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

/// Largest effort accepted by the closed forms; C(a) overflows as a -> 1.
inline constexpr double kEffortCap = 1.0 - 1e-9;

inline constexpr double kUnboundedTheft = std::numeric_limits<double>::infinity();

inline bool is_unbounded(double theft) noexcept { return std::isinf(theft); }

// Market and enforcement environment.
struct MarketParams {
  double price = 10.0;  // P
  double y_high = 50.0;
  double y_low = 30.0;
  double reservation_utility = 0.0;  // u
  double inspection_rate = 0.0;      // gamma

  double revenue_high() const noexcept { return price * y_high; }
  double revenue_low() const noexcept { return price * y_low; }
  double revenue_gap() const noexcept { return price * (y_high - y_low); }
};

/// Worker effort cost C(a) = k a / (1 - a)^q.
struct CostSpec {
  double k = 0.1;
  double q = 3.0;
};

/// Raw penalty eta(b) = sigma b^p. The inspection rate lives in MarketParams.
struct PenaltySpec {
  double sigma = 1.0;
  double p = 1.5;
};

struct Contract {
  double w_high = 0.0;
  double w_low = 0.0;
  double b_high = 0.0;
  double b_low = 0.0;
  double effort = 0.0;
};

inline void validate(const MarketParams& m) {
  if (!(m.price > 0.0) || !std::isfinite(m.price))
    throw ValidationError("P", "price must be positive and finite");
  if (!(m.y_low >= 0.0) || !std::isfinite(m.y_low))
    throw ValidationError("yL", "low output must be nonnegative");
  if (!(m.y_high > m.y_low) || !std::isfinite(m.y_high))
    throw ValidationError("yH", "high output must exceed low output");
  if (!(m.reservation_utility >= 0.0) || !std::isfinite(m.reservation_utility))
    throw ValidationError("u", "reservation utility must be nonnegative");
  if (!(m.inspection_rate >= 0.0 && m.inspection_rate <= 1.0))
    throw ValidationError("gamma", "inspection rate must lie in [0, 1]");
}

inline void validate(const CostSpec& c) {
  if (!(c.k > 0.0) || !std::isfinite(c.k))
    throw ValidationError("k", "cost coefficient must be positive");
  if (!(c.q > 0.0) || !std::isfinite(c.q))
    throw ValidationError("q", "cost growth factor must be positive");
}

inline void validate(const PenaltySpec& s) {
  if (!(s.sigma > 0.0) || !std::isfinite(s.sigma))
    throw ValidationError("sigma", "penalty coefficient must be positive");
  if (!(s.p > 1.0) || !std::isfinite(s.p))
    throw ValidationError("p", "penalty growth factor must exceed 1");
}

inline void validate(const Contract& c) {
  if (!(c.w_high >= 0.0)) throw ValidationError("wH", "wage must be nonnegative");
  if (!(c.w_low >= 0.0)) throw ValidationError("wL", "wage must be nonnegative");
  if (!(c.b_high >= 0.0 && c.b_high <= c.w_high))
    throw ValidationError("bH", "theft must lie in [0, wH]");
  if (!(c.b_low >= 0.0 && c.b_low <= c.w_low))
    throw ValidationError("bL", "theft must lie in [0, wL]");
  if (!(c.effort >= 0.0 && c.effort < 1.0))
    throw ValidationError("a", "effort must lie in [0, 1)");
}

namespace detail {

inline void require_effort(double a) {
  if (!(a >= 0.0 && a < 1.0))
    throw std::domain_error("effort outside [0, 1): " + std::to_string(a));
}

}  // namespace detail

inline double cost(const CostSpec& c, double a) {
  detail::require_effort(a);
  return c.k * a / std::pow(1.0 - a, c.q);
}

/// c'(a) = k (1-a)^{-q-1} [(1-a) + a q]
inline double marginal_cost(const CostSpec& c, double a) {
  detail::require_effort(a);
  const double s = 1.0 - a;
  return c.k * ((s + a * c.q) / std::pow(s, c.q + 1.0));
}

/// c''(a) = k q (1-a)^{-q-2} [2(1-a) + (q+1) a]
inline double cost_curvature(const CostSpec& c, double a) {
  detail::require_effort(a);
  const double s = 1.0 - a;
  return c.k * c.q * ((2.0 * s + (c.q + 1.0) * a) / std::pow(s, c.q + 2.0));
}

/// Effort a with c'(a) = delta, or 0 when delta <= c'(0) = k.
///
/// c' is strictly increasing, so the root is bracketed by pushing the upper
/// end toward 1 and then bisected until the bracket stops shrinking (well
/// below the 1e-12 argument tolerance).
inline double inverse_marginal_cost(const CostSpec& c, double delta) {
  if (!(delta > c.k)) return 0.0;
  double hi = 0.5;
  while (marginal_cost(c, hi) < delta) {
    const double next = 1.0 - 0.5 * (1.0 - hi);
    if (next == hi || next >= 1.0) return hi;
    hi = next;
  }
  const auto f = [&](double a) { return marginal_cost(c, a) - delta; };
  return bisect_increasing(f, 0.0, hi);
}

/// Worker best response to a wage pair: maximizes a wH + (1-a) wL - C(a).
/// A gap exactly equal to c'(0) resolves to the corner a = 0.
inline double worker_best_response(const CostSpec& c, double w_high, double w_low) {
  return inverse_marginal_cost(c, w_high - w_low);
}

/// Raw penalty eta(b) = sigma b^p.
inline double penalty(const PenaltySpec& s, double b) {
  if (!(b >= 0.0)) throw std::domain_error("theft must be nonnegative");
  return s.sigma * std::pow(b, s.p);
}

/// gamma * eta(b), the penalty term that enters employer profit.
inline double expected_penalty(const PenaltySpec& s, double gamma, double b) {
  return gamma * penalty(s, b);
}

inline double marginal_expected_penalty(const PenaltySpec& s, double gamma, double b) {
  if (!(b >= 0.0)) throw std::domain_error("theft must be nonnegative");
  if (b == 0.0) return 0.0;
  return gamma * s.sigma * s.p * std::pow(b, s.p - 1.0);
}

/// Theft level where the marginal expected penalty equals one:
/// beta = (p sigma gamma)^{1/(1-p)}. Unbounded when gamma = 0.
inline double ideal_theft(const PenaltySpec& s, double gamma) {
  if (!(s.p > 1.0)) throw ValidationError("p", "penalty growth factor must exceed 1");
  if (!(s.sigma > 0.0)) throw ValidationError("sigma", "penalty coefficient must be positive");
  if (!(gamma >= 0.0)) throw ValidationError("gamma", "inspection rate must be nonnegative");
  if (gamma == 0.0) return kUnboundedTheft;
  return std::pow(s.p * s.sigma * gamma, 1.0 / (1.0 - s.p));
}

}  // namespace wagetheft
