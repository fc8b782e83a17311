#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "wagetheft/characterization.hpp"
#include "wagetheft/solver.hpp"

using namespace wagetheft;
using wagetheft::testing::illustrative;

namespace {

const MarketParams kIllustrativeMarket{10, 5, 3, 1, 1};
const CostSpec kIllustrativeCost{1, 1};

}  // namespace

TEST(OptimalLowWage, IllustrativeExample) {
  EXPECT_DOUBLE_EQ(optimal_low_wage(kIllustrativeMarket, kIllustrativeCost, 0.0), 1.0);
  EXPECT_NEAR(optimal_low_wage(kIllustrativeMarket, kIllustrativeCost, 0.5), 0.0, 1e-12);
  EXPECT_NEAR(optimal_low_wage(kIllustrativeMarket, kIllustrativeCost, 0.25), 8.0 / 9.0, 1e-12);
}

TEST(OptimalLowWage, RejectsOutOfDomainEffort) {
  EXPECT_THROW(optimal_low_wage(kIllustrativeMarket, kIllustrativeCost, -0.1), std::domain_error);
  EXPECT_THROW(optimal_low_wage(kIllustrativeMarket, kIllustrativeCost, 1.0), std::domain_error);
  EXPECT_THROW(optimal_low_wage(kIllustrativeMarket, kIllustrativeCost, kEffortCap), std::domain_error);
}

TEST(OptimalLowWage, NonIncreasingInEffort) {
  double prev = optimal_low_wage(kIllustrativeMarket, kIllustrativeCost, 0.0);
  for (double a = 0.001; a < 0.99; a += 0.001) {
    const double w = optimal_low_wage(kIllustrativeMarket, kIllustrativeCost, a);
    EXPECT_LE(w, prev + 1e-15);
    prev = w;
  }
}

TEST(OptimalHighWage, IllustrativeExample) {
  EXPECT_DOUBLE_EQ(optimal_high_wage(kIllustrativeMarket, kIllustrativeCost, 0.0), 2.0);
  EXPECT_NEAR(optimal_high_wage(kIllustrativeMarket, kIllustrativeCost, 0.5), 4.0, 1e-12);
  EXPECT_NEAR(optimal_high_wage(kIllustrativeMarket, kIllustrativeCost, 0.25), 8.0 / 9.0 + 16.0 / 9.0,
              1e-12);
}

TEST(OptimalTheft, CapsAtIdealOrWage) {
  EXPECT_EQ(optimal_theft(0.5, 1.0), 0.5);
  EXPECT_EQ(optimal_theft(kUnboundedTheft, 3.0), 3.0);
  EXPECT_EQ(optimal_theft(0.0, 7.0), 0.0);
  EXPECT_THROW(optimal_theft(1.0, -1.0), std::domain_error);
}

TEST(ReducedObjective, ProfitAtZeroEffort) {
  // beta = 0.5 <= u = 1: g(0) = P yL - u + beta - E(beta).
  const Instance in = illustrative(1.0);
  const double beta = in.beta();
  ASSERT_DOUBLE_EQ(beta, 0.5);
  const ReducedPoint pt = reduced_objective(in, 0.0);
  EXPECT_NEAR(pt.profit, 30.0 - 1.0 + 0.5 - 0.25, 1e-12);

  Instance honest = in;
  honest.theft_disabled = true;
  EXPECT_NEAR(reduced_objective(honest, 0.0).profit, 30.0 - 1.0, 1e-12);
}

TEST(ReducedObjective, UnboundedIdealTheftStaysFinite) {
  const Instance in{{10, 50, 30, 200, 0.0}, {0.1, 3}, {1, 1.1}};
  const ReducedPoint pt = reduced_objective(in, 0.4);
  EXPECT_EQ(pt.b_low, pt.w_low);
  EXPECT_EQ(pt.b_high, pt.w_high);
  EXPECT_TRUE(std::isfinite(pt.profit));
}

TEST(ReducedObjective, PointInvariantsOnTableInstances) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 100; ++n) {
    const Instance in = wagetheft::testing::random_table_instance(rng);
    const double beta = in.beta();
    const double u = in.market.reservation_utility;
    for (double a = 0.0; a < 0.99; a += 0.0137) {
      const ReducedPoint pt = reduced_objective(in, a);
      EXPECT_NEAR(pt.w_high - pt.w_low, marginal_cost(in.cost, a), 1e-12 * (1 + pt.w_high));
      EXPECT_EQ(pt.b_low, std::min(beta, pt.w_low));
      EXPECT_EQ(pt.b_high, std::min(beta, pt.w_high));
      EXPECT_GE(pt.worker_utility, u - 1e-9 * (1 + u));
      if (pt.w_low > 0.0) EXPECT_NEAR(pt.worker_utility, u, 1e-9 * (1 + u));
    }
  }
}

TEST(ReducedObjective, IncentiveCompatibleWages) {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 50; ++n) {
    const Instance in = wagetheft::testing::random_table_instance(rng);
    for (double a = 0.01; a < 0.99; a += 0.02) {
      const ReducedPoint pt = reduced_objective(in, a);
      EXPECT_NEAR(worker_best_response(in.cost, pt.w_high, pt.w_low), a, 1e-8);
    }
  }
}

TEST(ReducedObjective, TheftRuleIsPointwiseOptimal) {
  // For fixed a and w*(a), scanning b over [0, w] peaks at min{beta, w}.
  for (const Instance& in : {illustrative(1.0), illustrative(1.0 / 6.0),
                             wagetheft::testing::fig3_context(1.0, 0.2)}) {
    for (double a : {0.1, 0.25, 0.6}) {
      const ReducedPoint pt = reduced_objective(in, a);
      for (bool high : {false, true}) {
        const double w = high ? pt.w_high : pt.w_low;
        const int n = 10000;
        double best_b = 0.0, best_v = -INFINITY;
        for (int i = 0; i < n; ++i) {
          const double b = w * i / (n - 1.0);
          const double v = high ? employer_profit(in, a, pt.w_high, pt.w_low, b, pt.b_low)
                                : employer_profit(in, a, pt.w_high, pt.w_low, pt.b_high, b);
          if (v > best_v) best_v = v, best_b = b;
        }
        EXPECT_NEAR(best_b, high ? pt.b_high : pt.b_low, w / (n - 1.0) + 1e-15);
      }
    }
  }
}

TEST(ReducedObjective, ContinuousAcrossBreakPoints) {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 200; ++n) {
    const Instance in = wagetheft::testing::random_table_instance(rng);
    for (double a0 : find_break_points(in).sorted()) {
      if (a0 - 1e-7 <= 0.0 || a0 + 1e-7 >= kEffortCap) continue;
      // A jump would survive shrinking the window; a kink scales with it.
      const auto jump = [&](double d) {
        return std::abs(reduced_objective(in, a0 + d).profit - reduced_objective(in, a0 - d).profit);
      };
      const double floor = 1e-9 * (1 + std::abs(reduced_objective(in, a0).profit));
      EXPECT_LE(jump(1e-9), 0.05 * jump(1e-7) + floor) << "a0=" << a0;
    }
  }
}

TEST(ReducedObjective, SlopeMatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int n = 0; n < 100; ++n) {
    const Instance in = wagetheft::testing::random_table_instance(rng);
    const auto breaks = find_break_points(in).sorted();
    for (double a = 0.05; a < 0.96; a += 0.05) {
      const double h = 1e-6;
      bool near_kink = false;
      for (double b : breaks) near_kink = near_kink || std::abs(a - b) < 2 * h;
      if (near_kink) continue;
      const double fd =
          (reduced_objective(in, a + h).profit - reduced_objective(in, a - h).profit) / (2 * h);
      const double s = reduced_slope(in, a);
      EXPECT_NEAR(s, fd, 1e-5 * (1 + std::abs(s)) + 1e-8 * std::abs(reduced_objective(in, a).profit) / h)
          << "a=" << a;
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(ReducedObjective, TheftNonIncreasingInEnforcement) {
  for (double a : {0.2, 0.5, 0.8}) {
    double prev_h = INFINITY, prev_l = INFINITY;
    for (double sigma : wagetheft::testing::kSigmas) {
      const ReducedPoint pt = reduced_objective(wagetheft::testing::fig3_context(sigma, 0.2), a);
      EXPECT_LE(pt.b_high, prev_h);
      EXPECT_LE(pt.b_low, prev_l);
      prev_h = pt.b_high, prev_l = pt.b_low;
    }
    prev_h = prev_l = INFINITY;
    for (double gamma : wagetheft::testing::kInspection) {
      const ReducedPoint pt = reduced_objective(wagetheft::testing::fig3_context(1.0, gamma), a);
      EXPECT_LE(pt.b_high, prev_h);
      EXPECT_LE(pt.b_low, prev_l);
      prev_h = pt.b_high, prev_l = pt.b_low;
    }
  }
}

TEST(WorkerUtility, Examples) {
  const Instance in = illustrative();
  EXPECT_NEAR(worker_utility(in.cost, reduced_objective(in, 0.25)), 1.0, 1e-12);
  EXPECT_NEAR(worker_utility(in.cost, reduced_objective(in, 0.0)), 1.0, 1e-15);
  EXPECT_NEAR(worker_utility(in.cost, reduced_objective(in, 0.75)), 9.0, 1e-12);
}

TEST(TheftEliminated, PowerPenaltyNeverEliminates) {
  EXPECT_FALSE(theft_eliminated(PenaltySpec{5, 1.1}, 1.0));
  for (double sigma : wagetheft::testing::kSigmas)
    for (double gamma : wagetheft::testing::kInspection)
      EXPECT_FALSE(theft_eliminated(PenaltySpec{sigma, 1.5}, gamma));
  EXPECT_FALSE(theft_eliminated(PenaltySpec{1, 1.5}, 0.0));
}

TEST(TheftEliminated, LinearMarginalThreshold) {
  // Penalty capped at twice the theft: eta'(0) = 2 requires gamma >= 0.5.
  EXPECT_TRUE(theft_eliminated(2.0, 0.5));
  EXPECT_FALSE(theft_eliminated(2.0, 0.49));
  EXPECT_FALSE(theft_eliminated(2.0, 0.0));
  EXPECT_TRUE(theft_eliminated(10.0, 0.1));
}
