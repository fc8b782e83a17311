#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wagetheft/characterization.hpp"

namespace wagetheft::testing {

inline const std::vector<double> kPrices{10, 15, 20, 30, 40};
inline const std::vector<double> kLowOutputs{30, 40};
inline const std::vector<double> kSigmas{0.25, 0.5, 0.75, 1, 1.25, 1.5, 2, 3, 4, 5};
inline const std::vector<double> kPenaltyGrowth{1.1, 1.2, 1.3, 1.4, 1.5};
inline const std::vector<double> kInspection{0.1, 0.2, 0.3, 0.4, 0.5, 1};
inline const std::vector<double> kCostCoef{0.1, 0.5, 1};
inline const std::vector<double> kCostGrowth{0.1, 0.5, 1, 3, 5};
inline const std::vector<double> kReservation{10, 25, 50, 100, 200, 300, 400, 500, 600};

inline double pick(std::mt19937_64& rng, const std::vector<double>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

/// Uniformly drawn cell of the numerical-study parameter grid.
inline Instance random_table_instance(std::mt19937_64& rng) {
  Instance in;
  in.market = {pick(rng, kPrices), 50.0, pick(rng, kLowOutputs), pick(rng, kReservation),
               pick(rng, kInspection)};
  in.cost = {pick(rng, kCostCoef), pick(rng, kCostGrowth)};
  in.penalty = {pick(rng, kSigmas), pick(rng, kPenaltyGrowth)};
  return in;
}

/// Penalty-scale study context: P=10, yH=50, yL=30, u=200, k=0.1, q=3, p=1.1.
inline Instance fig3_context(double sigma, double gamma) {
  return {{10, 50, 30, 200, gamma}, {0.1, 3}, {sigma, 1.1}};
}

/// Illustrative example: u = 1, C(a) = a/(1-a). The penalty (sigma=1, p=2)
/// gives beta = 1/(2 gamma).
inline Instance illustrative(double gamma = 1.0) {
  return {{10, 5, 3, 1, gamma}, {1, 1}, {1, 2}};
}

}  // namespace wagetheft::testing
