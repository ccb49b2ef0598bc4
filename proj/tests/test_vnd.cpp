#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "fixtures.hpp"

using namespace mfl;

namespace {

VndConfig config(int max_local, std::uint64_t seed) {
  VndConfig c;
  c.max_local = max_local;
  c.master_seed = seed;
  c.threads = 1;
  return c;
}

std::vector<Variant> all_variants() { return {kAllVariants.begin(), kAllVariants.end()}; }

}  // namespace

TEST(Construct, SingleFacilityChain) {
  const auto in = fx::t1();
  Rng rng(0);
  const auto s = construct_initial(in, rng);
  EXPECT_EQ(s.path(0), make_path(0, 0, 0, 0));
  EXPECT_DOUBLE_EQ(s.objective(), 485.0);
}

TEST(Construct, PicksCheaperDistributionCenter) {
  const auto in = fx::t2();
  Rng rng(0);
  EXPECT_EQ(construct_initial(in, rng).path(0)[Level::D], 0);
}

TEST(Construct, RandomInstancesAreFeasible) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto in = fx::random_tiny(seed, seed % 2 ? 4 : 5);
    Rng rng(seed);
    const auto s = construct_initial(in, rng);
    EXPECT_TRUE(check_feasible(in, s).empty()) << "seed " << seed;
    EXPECT_DOUBLE_EQ(s.objective(), fx::objective(in, s.paths()));
  }
}

TEST(Construct, DeskScaleGridBothLevelCounts) {
  for (int levels : {4, 5}) {
    auto base = default_params(levels);
    base.R = 200;
    for (const auto& cell : full_grid(base, 1)) {
      auto p = cell.params;
      p.seed = 1234;
      const auto in = generate(p);
      Rng rng(5);
      const auto s = construct_initial(in, rng);
      EXPECT_TRUE(check_feasible(in, s).empty())
          << levels << " levels " << density_name(p.density_class) << "/" << fixed_name(p.fixed_class);
    }
  }
}

TEST(Construct, TightBoundsNeedOpenSetSearch) {
  // Two retailers whose cheapest distribution centers differ, but only one
  // center may open and only the third one reaches both.
  auto in = fx::blank(2, 3, 1, 1, 1);
  in.arc[1](0, 0) = 1;
  in.arc[1](1, 1) = 1;
  in.arc[1](2, 0) = 50;
  in.arc[1](2, 1) = 50;
  for (int d = 0; d < 3; ++d) in.arc[2](0, d) = 10;
  in.arc[3](0, 0) = 10;
  in.arc[4](0, 0) = 10;
  in.elig_pr(0, 0) = in.elig_pr(0, 1) = 1;
  in.ub = {0, 1, 1, 1, 1};
  Rng rng(3);
  const auto s = construct_initial(in, rng);
  EXPECT_TRUE(check_feasible(in, s).empty());
  EXPECT_EQ(s.path(0)[Level::D], 2);
  EXPECT_EQ(s.path(1)[Level::D], 2);
}

TEST(Construct, InfeasibleBoundsFail) {
  auto in = fx::blank(2, 2, 1, 1, 1);
  in.arc[1](0, 0) = 1;
  in.arc[1](1, 1) = 1;
  in.arc[2](0, 0) = in.arc[2](0, 1) = 10;
  in.arc[3](0, 0) = 10;
  in.arc[4](0, 0) = 10;
  in.elig_pr(0, 0) = in.elig_pr(0, 1) = 1;
  in.ub = {0, 1, 1, 1, 1};
  Rng rng(3);
  try {
    construct_initial(in, rng, 3);
    FAIL() << "expected ConstructionFailed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ConstructionFailed);
  }
}

TEST(Descent, ExhaustiveOneFlipOnSingleChainIsANoOp) {
  const auto in = fx::t1();
  auto s = rebuild_counters(in, {make_path(0, 0, 0, 0)});
  Rng rng(1);
  EXPECT_FALSE(algorithm0(in, s, 1, rng));
  EXPECT_DOUBLE_EQ(s.objective(), 485.0);
}

TEST(Descent, ExhaustiveReachesUniqueLocalOptimumInOneMove) {
  const auto in = fx::b1();
  auto s = rebuild_counters(in, {make_path(0, 0, 0, 0), make_path(0, 0, 0, 0)});
  Rng rng(1);
  SearchClock clock;
  Descent d(in, rng, clock);
  EXPECT_TRUE(d.exhaustive(s, 1));
  EXPECT_EQ(d.trace().moves, 1u);
  EXPECT_EQ(s.path(1)[Level::D], 1);
  EXPECT_DOUBLE_EQ(s.objective(), 555.0);
  EXPECT_TRUE(fx::one_flip_local(in, s.paths()));
}

TEST(Descent, FirstImprovementStopsAfterOneMove) {
  const auto in = fx::b1();
  auto s = rebuild_counters(in, {make_path(0, 0, 0, 0), make_path(0, 0, 0, 0)});
  Rng rng(2);
  EXPECT_TRUE(algorithm0_k(in, s, 1, rng));
  EXPECT_DOUBLE_EQ(s.objective(), 555.0);
  EXPECT_FALSE(algorithm0_k(in, s, 1, rng));
  EXPECT_FALSE(algorithm0_k(in, s, 2, rng));
}

TEST(Descent, ExhaustiveLeavesOneFlipLocalOptimum) {
  for (int levels : {4, 5}) {
    const auto in = fx::random_medium(50 + levels, levels, 30);
    Rng rng(levels);
    auto s = construct_initial(in, rng);
    algorithm0(in, s, 1, rng);
    EXPECT_TRUE(fx::one_flip_local(in, s.paths()));
    EXPECT_DOUBLE_EQ(s.objective(), fx::objective(in, s.paths()));
  }
}

TEST(MultiStart, SingleChain) {
  const auto in = fx::t1();
  EXPECT_DOUBLE_EQ(multi_start(in, config(5, 1)).best.objective(), 485.0);
}

TEST(MultiStart, OneStartEqualsConstructionPlusOneFlipDescent) {
  const auto in = fx::random_medium(8, 5, 30);
  const auto cfg = config(1, 77);
  const auto ms = multi_start(in, cfg);
  Rng rng(multi_start_seed(77, 0));
  auto s = construct_initial(in, rng);
  algorithm0(in, s, 1, rng);
  EXPECT_EQ(ms.best.paths(), s.paths());
  EXPECT_DOUBLE_EQ(ms.best.objective(), s.objective());
}

TEST(MultiStart, KeepsTheLowestStart) {
  const auto in = fx::random_medium(9, 4, 30);
  const auto ms = multi_start(in, config(8, 3));
  ASSERT_EQ(ms.start_objectives.size(), 8u);
  const double lowest = *std::min_element(ms.start_objectives.begin(), ms.start_objectives.end());
  EXPECT_DOUBLE_EQ(ms.best.objective(), lowest);
  EXPECT_DOUBLE_EQ(ms.start_objectives[ms.best_start], lowest);
  for (int i = 0; i < ms.best_start; ++i) EXPECT_GT(ms.start_objectives[i], lowest);
}

TEST(MultiStart, WorkerCountDoesNotChangeTheResult) {
  const auto in = fx::random_medium(10, 5, 30);
  auto one = config(6, 4);
  auto four = one;
  four.threads = 4;
  const auto a = multi_start(in, one);
  const auto b = multi_start(in, four);
  EXPECT_EQ(a.best.paths(), b.best.paths());
  EXPECT_EQ(a.start_objectives, b.start_objectives);
  EXPECT_EQ(a.best_start, b.best_start);
}

TEST(MultiStart, InvalidConfig) {
  const auto in = fx::t1();
  EXPECT_THROW(multi_start(in, config(0, 1)), Error);
  auto c = config(1, 1);
  c.time_limit = 0.0;
  EXPECT_THROW(multi_start(in, c), Error);
}

TEST(Variants, SingleChainTraceHasOnlyTheStart) {
  const auto in = fx::t1();
  auto cfg = config(2, 1);
  cfg.record_trace = true;
  for (auto& [v, res] : run_variants(in, cfg, all_variants())) {
    EXPECT_DOUBLE_EQ(res.solution.objective(), 485.0) << variant_name(v);
    EXPECT_EQ(res.trace.points.size(), 1u);
    EXPECT_EQ(res.trace.moves, 0u);
  }
}

TEST(Variants, ReachOptimumOnTwoRetailerInstance) {
  const auto in = fx::b1();
  const auto opt = fx::optimum_by_assignments(in);
  ASSERT_TRUE(opt);
  EXPECT_DOUBLE_EQ(*opt, 555.0);
  for (auto& [v, res] : run_variants(in, config(3, 2), all_variants()))
    EXPECT_DOUBLE_EQ(res.solution.objective(), *opt) << variant_name(v);
}

TEST(Variants, NeverWorseThanMultiStart) {
  for (int levels : {4, 5}) {
    const auto in = fx::random_medium(30 + levels, levels, 40);
    const auto cfg = config(4, 6);
    const double start = multi_start(in, cfg).best.objective();
    for (auto& [v, res] : run_variants(in, cfg, all_variants())) {
      EXPECT_LE(res.solution.objective(), start) << variant_name(v);
      EXPECT_TRUE(check_feasible(in, res.solution).empty());
      EXPECT_DOUBLE_EQ(res.solution.objective(), fx::objective(in, res.solution.paths()));
      EXPECT_DOUBLE_EQ(res.trace.final_objective, res.solution.objective());
    }
  }
}

TEST(Variants, ResultsAreOneFlipLocalOptima) {
  for (int levels : {4, 5}) {
    const auto in = fx::random_medium(60 + levels, levels, 30);
    for (auto& [v, res] : run_variants(in, config(3, 8), all_variants()))
      EXPECT_TRUE(fx::one_flip_local(in, res.solution.paths())) << variant_name(v);
  }
}

TEST(Variants, TinyInstancesAgainstExhaustiveOptimum) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto in = fx::random_tiny(1000 + seed, seed % 3 ? 5 : 4);
    const double opt = fx::optimum_by_open_sets(in);
    if (const auto lit = fx::optimum_by_assignments(in)) {
      EXPECT_DOUBLE_EQ(*lit, opt);
    }
    for (auto& [v, res] : run_variants(in, config(3, seed), all_variants())) {
      EXPECT_GE(res.solution.objective(), opt - 1e-9) << variant_name(v) << " seed " << seed;
      EXPECT_TRUE(check_feasible(in, res.solution).empty());
      EXPECT_TRUE(fx::one_flip_local(in, res.solution.paths()));
    }
  }
}

TEST(Variants, SameSeedSameSolution) {
  const auto in = fx::random_medium(12, 5, 40);
  const auto a = run_variants(in, config(3, 99), all_variants());
  const auto b = run_variants(in, config(3, 99), all_variants());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].second.solution.paths(), b[i].second.solution.paths());
    EXPECT_EQ(a[i].second.trace.moves, b[i].second.trace.moves);
  }
}

TEST(Variants, WrappersMatchSolveAndPerVariantMultiStart) {
  const auto in = fx::random_medium(13, 4, 30);
  auto cfg = config(2, 5);
  const auto per = run_variants(in, cfg, all_variants(), true);
  for (const auto& [v, res] : per) {
    auto c = cfg;
    c.master_seed = variant_seed(cfg.master_seed, v);
    VndResult direct;
    switch (v) {
      case Variant::BVND: direct = bvnd(in, c); break;
      case Variant::PVND: direct = pvnd(in, c); break;
      case Variant::CVND: direct = cvnd(in, c); break;
      case Variant::UVND: direct = uvnd(in, c); break;
    }
    EXPECT_EQ(direct.solution.paths(), res.solution.paths()) << variant_name(v);
  }
}

TEST(Variants, EveryAppliedMoveImprovesAndStaysFeasible) {
  const auto in = fx::random_medium(14, 5, 40);
  std::atomic<int> moves{0}, bad{0};
  auto cfg = config(4, 1);
  cfg.threads = 2;
  cfg.on_move = [&](const Instance&, const Solution& after, double before) {
    ++moves;
    if (!(after.objective() < before) || !check_feasible(in, after).empty() ||
        std::abs(after.objective() - fx::objective(in, after.paths())) > 1e-6)
      ++bad;
  };
  run_variants(in, cfg, all_variants());
  EXPECT_GT(moves.load(), 0);
  EXPECT_EQ(bad.load(), 0);
}

TEST(Variants, TraceIsMonotone) {
  const auto in = fx::random_medium(15, 5, 40);
  auto cfg = config(2, 3);
  cfg.record_trace = true;
  for (auto& [v, res] : run_variants(in, cfg, all_variants())) {
    const auto& pts = res.trace.points;
    ASSERT_FALSE(pts.empty());
    for (std::size_t i = 1; i < pts.size(); ++i) {
      EXPECT_LT(pts[i].objective, pts[i - 1].objective);
      EXPECT_GE(pts[i].elapsed, pts[i - 1].elapsed);
    }
    EXPECT_DOUBLE_EQ(pts.back().objective, res.solution.objective());
    EXPECT_DOUBLE_EQ(pts.back().elapsed, res.trace.time_to_best);
  }
}

TEST(Variants, TimeLimitTruncatesButStaysFeasible) {
  const auto in = fx::random_medium(16, 5, 80);
  auto cfg = config(20, 3);
  cfg.clock = ClockKind::Work;
  cfg.time_limit = 1e-5;  // 100 evaluations
  for (auto& [v, res] : run_variants(in, cfg, all_variants())) {
    EXPECT_TRUE(res.trace.truncated) << variant_name(v);
    EXPECT_TRUE(check_feasible(in, res.solution).empty());
  }
}

TEST(Variants, WorkClockTimesAreReproducible) {
  const auto in = fx::random_medium(17, 4, 40);
  auto cfg = config(3, 21);
  cfg.clock = ClockKind::Work;
  cfg.threads = 3;
  const auto a = run_variants(in, cfg, all_variants());
  cfg.threads = 1;
  const auto b = run_variants(in, cfg, all_variants());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].second.trace.time_to_best, b[i].second.trace.time_to_best);
    EXPECT_EQ(a[i].second.trace.evaluations, b[i].second.trace.evaluations);
    EXPECT_GT(a[i].second.trace.time_to_best, 0.0);
  }
}

TEST(Variants, NamesRoundTrip) {
  for (Variant v : kAllVariants) {
    EXPECT_EQ(parse_variant(variant_name(v)), v);
    EXPECT_EQ(parse_variant(io::lower(std::string(variant_name(v)))), v);
  }
  EXPECT_FALSE(parse_variant("xvnd"));
}
