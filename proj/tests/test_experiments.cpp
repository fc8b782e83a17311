#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "wagetheft/experiments.hpp"

using namespace wagetheft;

namespace {

// P, yL, yH, sigma, p, gamma, k, q, u
const ParamVector kFig3{10, 30, 50, 1, 1.1, 0.2, 0.1, 3, 200};
const ParamVector kCostFigure{10, 30, 50, 1, 1.5, 0.1, 0.1, 3, 200};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST(Sweep, SigmaAxisGivesTenRowsWithFallingTheft) {
  const auto spec = SweepSpec::context(kFig3, "sigma", {0.25, 0.5, 0.75, 1, 1.25, 1.5, 2, 3, 4, 5});
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i - 1].param("sigma"), rows[i].param("sigma"));
    EXPECT_LE(rows[i].b_high, rows[i - 1].b_high + 1e-9);
  }
  const Report rep = qualitative_checks(rows, "sigma");
  EXPECT_TRUE(rep.passed()) << rep.to_text();
}

TEST(Sweep, TheftVanishesAtHighPenaltyScale) {
  ParamVector ctx = kFig3;
  ctx[5] = 0.5;
  const auto rows = run_sweep(SweepSpec::context(ctx, "sigma", {0.25, 5}));
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_GT(rows[0].b_high, 0.0);
  EXPECT_LT(rows[1].b_high, 1e-2 * rows[0].b_high);
}

TEST(Sweep, EqualPenaltyProductGivesEqualTheft) {
  ParamVector a = kFig3, b = kFig3;
  a[4] = b[4] = 1.5;
  a[5] = 1.0, a[3] = 0.5;
  b[5] = 0.5, b[3] = 1.0;
  const SweepRow ra = solve_cell(a);
  const SweepRow rb = solve_cell(b);
  EXPECT_NEAR(ra.beta, rb.beta, 1e-12 * ra.beta);
  EXPECT_NEAR(ra.b_high, rb.b_high, 1e-9 * ra.b_high);
  EXPECT_NEAR(ra.b_low, rb.b_low, 1e-9 * (1 + ra.b_low));
}

TEST(Sweep, HighWageRisesWithCostScale) {
  const auto rows = run_sweep(SweepSpec::context(kCostFigure, "k", {0.1, 0.5, 1}));
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].w_high, rows[i - 1].w_high);
    EXPECT_LE(rows[i].a_star, rows[i - 1].a_star);
  }
  EXPECT_TRUE(qualitative_checks(rows, "k").passed());
}

TEST(Sweep, EffortFallsWithCostGrowth) {
  const auto rows = run_sweep(SweepSpec::context(kCostFigure, "q", {0.1, 0.5, 1, 3, 5}));
  const Report rep = qualitative_checks(rows, "q");
  EXPECT_TRUE(rep.passed()) << rep.to_text();
  EXPECT_LT(rows.back().a_star, rows.front().a_star);
}

TEST(Sweep, WagesRiseWithReservationUtility) {
  const auto rows =
      run_sweep(SweepSpec::context(kFig3, "u", {10, 25, 50, 100, 200, 300, 400, 500, 600}));
  const Report rep = qualitative_checks(rows, "u");
  EXPECT_TRUE(rep.passed()) << rep.to_text();
}

TEST(Sweep, SingleCellEqualsDirectSolve) {
  SweepSpec spec = SweepSpec::context(kFig3, "sigma", {1});
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 1u);
  const SolveResult r = solve(instance_from_params(kFig3));
  EXPECT_EQ(rows[0].a_star, r.contract.effort);
  EXPECT_EQ(rows[0].w_high, r.contract.w_high);
  EXPECT_EQ(rows[0].w_low, r.contract.w_low);
  EXPECT_EQ(rows[0].b_high, r.contract.b_high);
  EXPECT_EQ(rows[0].b_low, r.contract.b_low);
  EXPECT_EQ(rows[0].profit, r.profit);
}

TEST(Sweep, ConstantAxisTriviallyPasses) {
  const auto rows = run_sweep(SweepSpec::context(kFig3, "gamma", {0.2}));
  EXPECT_TRUE(qualitative_checks(rows, "gamma").passed());
  EXPECT_TRUE(qualitative_checks(rows, "sigma").passed());
}

TEST(Sweep, UnrecognizedFamilyThrows) {
  const auto rows = run_sweep(SweepSpec::context(kFig3, "P", {10, 20}));
  EXPECT_THROW(qualitative_checks(rows, "P"), ValidationError);
}

TEST(Sweep, OrderingIsLexicographicAndDeduplicated) {
  SweepSpec spec = SweepSpec::context(kFig3, "u", {300, 10, 300, 50});
  spec["P"] = {20, 10};
  const auto rows = run_sweep(spec, 3);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i - 1].params, rows[i].params);
}

TEST(Sweep, BadCellsBecomeErrorRows) {
  SweepSpec spec = SweepSpec::context(kFig3, "p", {0.5, 1.1});
  spec["k"] = {-1, 0.1};
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 4u);
  // Rows sort by p before k.
  EXPECT_EQ(rows[0].error, "invalid_k");
  EXPECT_EQ(rows[1].error, "invalid_p");
  EXPECT_EQ(rows[2].error, "invalid_k");
  EXPECT_TRUE(rows[3].error.empty());
  EXPECT_THROW(run_sweep(SweepSpec::context(kFig3, "q", {})), ValidationError);
}

TEST(SweepInvariants, BetaColumnAndCapsOnTableSubgrid) {
  SweepSpec spec;
  spec["P"] = {10, 40};
  spec["q"] = {0.5, 3};
  spec["u"] = {10, 200, 600};
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 2u * 2 * 1 * 10 * 5 * 6 * 3 * 2 * 3);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.error.empty()) << r.error;
    EXPECT_EQ(r.beta, ideal_theft(PenaltySpec{r.param("sigma"), r.param("p")}, r.param("gamma")));
    EXPECT_LE(r.b_high, r.beta);
    EXPECT_LE(r.b_low, r.beta);
    EXPECT_GE(r.effective_high(), 0.0);
    EXPECT_GE(r.effective_low(), 0.0);
  }
}

TEST(SweepInvariants, BetaIgnoresReservationUtilityAndCost) {
  SweepSpec spec;
  spec["P"] = {10};
  spec["yL"] = {30};
  spec["sigma"] = {0.5, 2};
  spec["gamma"] = {0.1, 1};
  const auto rows = run_sweep(spec);
  std::map<std::pair<double, std::pair<double, double>>, std::set<double>> betas;
  for (const auto& r : rows)
    betas[{r.param("sigma"), {r.param("p"), r.param("gamma")}}].insert(r.beta);
  for (const auto& [key, values] : betas) EXPECT_EQ(values.size(), 1u);
}

TEST(SweepCsv, SchemaAndValues) {
  SweepSpec spec = SweepSpec::context(kFig3, "sigma", {1, 2});
  spec["k"] = {-1, 0.1};
  const auto rows = run_sweep(spec);
  std::ostringstream os;
  write_sweep_csv(os, rows);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, kSweepCsvHeader);
  const auto header = split(line);
  ASSERT_EQ(header.size(), 22u);
  std::size_t n = 0;
  while (std::getline(is, line)) {
    const auto cells = split(line);
    ASSERT_EQ(cells.size(), header.size()) << line;
    const SweepRow& r = rows[n++];
    if (!r.error.empty()) {
      EXPECT_EQ(cells.back(), r.error);
      continue;
    }
    EXPECT_TRUE(cells.back().empty());
    EXPECT_NEAR(std::stod(cells[10]), r.a_star, 1e-11 * (1 + r.a_star));
    EXPECT_NEAR(std::stod(cells[15]), r.w_high - r.b_high, 1e-11 * (1 + r.w_high));
    EXPECT_EQ(line.find(';'), std::string::npos);
  }
  EXPECT_EQ(n, rows.size());
}

TEST(SweepRow, TheftShareAbsentWithoutWage) {
  SweepRow r;
  r.w_high = 4;
  r.b_high = 1;
  EXPECT_DOUBLE_EQ(*r.theft_share_high(), 0.25);
  EXPECT_FALSE(r.theft_share_low().has_value());
}
