#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace mfl;

namespace {

std::vector<Path> single(const Path& p) { return {p}; }

}  // namespace

TEST(EvaluateFull, SinglePathSumsArcsAndFixedCosts) {
  const auto in = fx::t1();
  EXPECT_DOUBLE_EQ(evaluate_full(in, single(make_path(0, 0, 0, 0))), 485.0);
}

TEST(EvaluateFull, ZeroFixedCostsLeaveArcCostsOnly) {
  auto in = fx::t1();
  for (int l = 1; l <= 4; ++l) std::fill(in.fixed[l].begin(), in.fixed[l].end(), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_full(in, single(make_path(0, 0, 0, 0))), 115.0);
}

TEST(EvaluateFull, SecondDistributionCenterPath) {
  const auto in = fx::t2();
  EXPECT_DOUBLE_EQ(evaluate_full(in, single(make_path(1, 0, 0, 0))), 497.0);
}

TEST(EvaluateFull, OutOfRangeIndexThrows) {
  const auto in = fx::t1();
  try {
    evaluate_full(in, single(make_path(1, 0, 0, 0)));
    FAIL() << "expected IndexOutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IndexOutOfRange);
  }
}

TEST(CheckFeasible, UniqueValidSolutionHasNoViolations) {
  const auto in = fx::t1();
  EXPECT_TRUE(check_feasible(in, rebuild_counters(in, single(make_path(0, 0, 0, 0)))).empty());
}

TEST(CheckFeasible, PlantIneligibilityIsReported) {
  auto in = fx::t1();
  in.elig_pr(0, 0) = 0;
  const auto v = check_feasible(in, rebuild_counters(in, single(make_path(0, 0, 0, 0))));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::PlantIneligible);
  EXPECT_EQ(v[0].retailer, 0);
}

TEST(CheckFeasible, SplitAcrossBoundedLevelIsOneBoundViolation) {
  auto in = fx::t2(2);
  in.ub[1] = 1;
  const auto v = check_feasible(in, rebuild_counters(in, {make_path(0, 0, 0, 0), make_path(1, 0, 0, 0)}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::OpenBoundExceeded);
  EXPECT_EQ(v[0].level, Level::D);
  EXPECT_EQ(v[0].retailer, -1);
}

TEST(CheckFeasible, IneligibleArcIsReportedAtItsUpperLevel) {
  auto in = fx::t2();
  in.arc[2](0, 1) = 0;  // w1 -> d2 no longer eligible
  const auto v = check_feasible(in, rebuild_counters(in, single(make_path(1, 0, 0, 0))));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::IneligibleArc);
  EXPECT_EQ(v[0].level, Level::W);
}

TEST(CheckFeasible, ViolationsOrderedByRetailerThenLevel) {
  auto in = fx::t2(2);
  in.ub[1] = 1;
  in.elig_pr(0, 1) = 0;
  in.arc[1](1, 0) = 0;
  const auto v = check_feasible(in, rebuild_counters(in, {make_path(1, 0, 0, 0), make_path(0, 0, 0, 0)}));
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].retailer, 0);
  EXPECT_EQ(v[0].kind, ViolationKind::IneligibleArc);
  EXPECT_EQ(v[1].retailer, 1);
  EXPECT_EQ(v[1].kind, ViolationKind::PlantIneligible);
  EXPECT_EQ(v[2].kind, ViolationKind::OpenBoundExceeded);
}

TEST(RebuildCounters, SinglePathUsesEachFacilityOnce) {
  const auto in = fx::t1();
  const auto s = rebuild_counters(in, single(make_path(0, 0, 0, 0)));
  for (Level l : kFacilityLevels) {
    EXPECT_EQ(s.usage(l, 0), 1);
    EXPECT_EQ(s.open_count(l), 1);
  }
  EXPECT_DOUBLE_EQ(s.objective(), 485.0);
}

TEST(RebuildCounters, SharedFacilityCountsBothRetailers) {
  const auto in = fx::t2(2);
  const auto s = rebuild_counters(in, {make_path(0, 0, 0, 0), make_path(0, 0, 0, 0)});
  EXPECT_EQ(s.usage(Level::D, 0), 2);
  EXPECT_EQ(s.usage(Level::D, 1), 0);
  EXPECT_EQ(s.open_count(Level::D), 1);
  EXPECT_FALSE(s.is_open(Level::D, 1));
}

TEST(RebuildCounters, ObjectiveMatchesFullEvaluationOnRandomInstance) {
  const auto in = fx::random_medium(5, 5, 20);
  Rng rng(9);
  const auto s = construct_initial(in, rng);
  EXPECT_DOUBLE_EQ(s.objective(), evaluate_full(in, s.paths()));
  EXPECT_DOUBLE_EQ(s.objective(), fx::objective(in, s.paths()));
}

TEST(Validate, RetailerWithoutPathIsRejected) {
  auto in = fx::t2(2);
  in.arc[1](0, 1) = 0;
  in.arc[1](1, 1) = 0;
  EXPECT_EQ(retailers_without_path(in), std::vector<int>{1});
  try {
    validate(in);
    FAIL() << "expected InvalidInstance";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidInstance);
  }
}

TEST(Validate, EmptyPlantInterestSetIsRejected) {
  auto in = fx::t1();
  in.elig_pr(0, 0) = 0;
  EXPECT_THROW(validate(in), Error);
}

TEST(Validate, BoundOutsideLevelSizeIsRejected) {
  auto in = fx::t1();
  in.ub[2] = 0;
  EXPECT_THROW(validate(in), Error);
  in.ub[2] = 2;
  EXPECT_THROW(validate(in), Error);
}

TEST(Validate, NegativeCostIsRejected) {
  auto in = fx::t1();
  in.fixed[3][0] = -1;
  EXPECT_THROW(validate(in), Error);
}

TEST(Validate, FourLevelInstanceHasNoSupplierData) {
  auto p = default_params(4);
  p.R = 30;
  p.seed = 3;
  const auto in = generate(p);
  EXPECT_EQ(in.size[4], 0);
  EXPECT_TRUE(in.arc[4].empty());
  EXPECT_TRUE(in.fixed[4].empty());
  EXPECT_NO_THROW(validate(in));
}

TEST(Solution, ReassignUpdatesCountersAndObjective) {
  const auto in = fx::t2(2);
  auto s = rebuild_counters(in, {make_path(0, 0, 0, 0), make_path(0, 0, 0, 0)});
  const auto re = s.evaluate_reassignment(in, 1, make_path(1, 0, 0, 0));
  EXPECT_TRUE(re.admissible);
  EXPECT_DOUBLE_EQ(re.delta, 2.0 + 60.0);  // d1 stays open for retailer 0
  s.reassign(in, 1, make_path(1, 0, 0, 0), re.delta);
  EXPECT_EQ(s.open_count(Level::D), 2);
  EXPECT_DOUBLE_EQ(s.objective(), fx::objective(in, s.paths()));
}
