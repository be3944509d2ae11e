#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "gadop/errors.hpp"
#include "gadop/generate.hpp"
#include "gadop/lshape.hpp"
#include "gadop/model.hpp"
#include "gadop/oracle.hpp"

using namespace gadop;

namespace {

ScenarioSpace two_by_two(const Instance& inst, double p_ground, double p_break, std::vector<std::size_t> broken) {
  ScenarioSpace sc = fixtures::fly_or_ground(inst.num_drones(), p_ground, inst);
  sc.breakdown[0].probability = 1.0 - p_break;
  BreakdownScenario b{BoolGrid(inst.num_customers(), inst.num_drones()), p_break};
  for (std::size_t i : broken)
    for (std::size_t d = 0; d < inst.num_drones(); ++d) b.breaks.set(i, d, true);
  sc.breakdown.push_back(b);
  return sc;
}

}  // namespace

TEST(Feedback, TravelExample) {
  const auto inst = fixtures::star({7.0}, 1, 1);
  const auto f = compute_feedback(inst, fixtures::fly_or_ground(1, 0.1, inst));
  EXPECT_NEAR(f.travel(0, 0), -0.063, 1e-12);
}

TEST(Feedback, PenaltyExample) {
  const auto inst = fixtures::star({7.0}, 1, 1);
  const auto f = compute_feedback(inst, two_by_two(inst, 0.1, 0.1, {0}));
  EXPECT_NEAR(f.penalty(0, 0), -3.8, 1e-12);
  EXPECT_NEAR(f.repair(0, 0), -0.9 * 0.1 * 50.0, 1e-12);
  EXPECT_NEAR(f.repair_max[0], -4.5, 1e-12);
}

TEST(Feedback, DeterministicScenarios) {
  const auto inst = fixtures::star({2.0, 5.0}, 1, 2);
  const auto f = compute_feedback(inst, deterministic_space(inst));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t d = 0; d < 2; ++d) {
      EXPECT_EQ(f.penalty(i, d), 0.0);
      EXPECT_EQ(f.repair(i, d), 0.0);
      EXPECT_DOUBLE_EQ(f.travel(i, d), -inst.drone_cost(i));
    }
}

TEST(Feedback, MaxOverCustomers) {
  const auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 1);
  const auto f = compute_feedback(inst, two_by_two(inst, 0.2, 0.3, {1}));
  EXPECT_EQ(f.repair_max[0], std::max({f.repair(0, 0), f.repair(1, 0), f.repair(2, 0)}));
  EXPECT_EQ(f.repair_max[0], 0.0);
}

TEST(SecondStage, Examples) {
  const auto inst = fixtures::star({7.0, 3.0}, 1, 1);
  BoolGrid x(2, 1);
  x.set(0, 0, true);
  const auto grounded = solve_second_stage(inst, x, {{true}, 1.0});
  EXPECT_TRUE(grounded.takeoff_penalties(0, 0));
  EXPECT_FALSE(grounded.takeoff_penalties(1, 0));
  EXPECT_DOUBLE_EQ(grounded.cost, inst.costs.penalty);
  const auto flying = solve_second_stage(inst, x, {{false}, 1.0});
  EXPECT_FALSE(flying.takeoff_penalties(0, 0));
  EXPECT_NEAR(flying.cost, 0.07, 1e-12);
}

TEST(ThirdStage, BrokenCustomerServedLast) {
  const auto inst = fixtures::star({2.0, 3.0}, 1, 1);
  const auto sc = two_by_two(inst, 0.0, 0.5, {0});
  BoolGrid x(2, 1);
  x.set(0, 0, true);
  x.set(1, 0, true);
  const auto r = solve_third_stage(inst, x, sc.takeoff[0], sc.breakdown);
  EXPECT_EQ(r.drone_order[1][0], 1);
  EXPECT_EQ(r.drone_order[0][0], 2);
  EXPECT_NEAR(r.cost, 0.5 * (inst.costs.penalty + inst.costs.repair), 1e-9);
}

TEST(ThirdStage, GroundedCostsNothing) {
  const auto inst = fixtures::star({2.0, 3.0}, 1, 1);
  const auto sc = two_by_two(inst, 0.0, 0.5, {0, 1});
  BoolGrid x(2, 1, true);
  const auto r = solve_third_stage(inst, x, {{true}, 1.0}, sc.breakdown);
  EXPECT_EQ(r.cost, 0.0);
}

TEST(ThirdStage, SingleCustomerClosedForm) {
  const auto inst = fixtures::star({2.0}, 1, 1);
  const double q = 0.37;
  const auto sc = two_by_two(inst, 0.0, q, {0});
  BoolGrid x(1, 1, true);
  const auto r = solve_third_stage(inst, x, sc.takeoff[0], sc.breakdown);
  EXPECT_NEAR(r.cost, q * (inst.costs.penalty + inst.costs.repair), 1e-9);
  EXPECT_EQ(r.drone_order[0][0], 1);
}

// Third-stage order against every permutation for up to 6 served customers.
TEST(ThirdStage, MatchesPermutationSearch) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    GeneratorOptions g;
    g.customers = 2 + seed % 5;
    g.drones = 1;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {1, 4, 0.0, 0.35});
    BoolGrid x(inst.num_customers(), 1, true);
    const auto r = solve_third_stage(inst, x, sc.takeoff[0], sc.breakdown);
    std::vector<std::size_t> perm(inst.num_customers());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    double best = 1e300;
    do {
      double c = 0.0;
      for (const auto& l : sc.breakdown) {
        const auto k = stranded_count(perm, l.breaks, 0);
        c += l.probability * (inst.costs.penalty * static_cast<double>(k) + (k ? inst.costs.repair : 0.0));
      }
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(r.cost, best, 1e-6) << "seed " << seed;
  }
}

TEST(LShape, TwoMasterSolvesAndMatchesMonolith) {
  for (std::uint64_t seed = 100; seed < 115; ++seed) {
    GeneratorOptions g;
    g.customers = 3 + seed % 3;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {1 + seed % 3, 1 + seed % 4, 0.3, 0.3});
    const auto r = run_lshape(inst, sc);
    EXPECT_EQ(r.master_solves, 2u);
    ASSERT_EQ(r.iterations.size(), 2u);
    EXPECT_FALSE(r.iterations[0].converged);
    EXPECT_TRUE(r.iterations[1].converged);
    const auto m = build_monolith(inst, sc);
    const auto sol = milp::solve(m.problem);
    EXPECT_NEAR(r.cost.total, sol.objective, 1e-6) << "seed " << seed;
    EXPECT_NEAR(r.cost.total, evaluate_plan(r.plan, inst, sc).total, 1e-12);
  }
}

// Two-point spaces have nested breakdown sets, where the master uses the
// closed-form recourse bound instead of an order block.
TEST(LShape, NestedBreakdownsMatchMonolith) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    GeneratorOptions g;
    g.customers = 4 + seed % 3;
    g.drones = 2;
    g.time_windows = seed % 3 == 0;
    const auto inst = random_instance(seed, g);
    auto sc = two_point_spaces(0.2, 0.3, 0.4, inst);
    if (seed % 2 == 0) {
      // Third pattern nested in the second.
      BreakdownScenario b{BoolGrid(inst.num_customers(), inst.num_drones()), 0.1};
      b.breaks.set(0, 0, true);
      sc.breakdown[0].probability -= 0.1;
      sc.breakdown.push_back(b);
    }
    const auto r = run_lshape(inst, sc);
    EXPECT_EQ(r.master_solves, 2u) << "seed " << seed;
    const auto o = solve_exhaustive(inst, sc);
    ASSERT_TRUE(o.feasible);
    EXPECT_NEAR(r.cost.total, o.objective, 1e-6) << "seed " << seed;
  }
}

TEST(LShape, DeterministicEqualsMonolith) {
  const auto inst = fixtures::star({2.0, 3.0, 9.0, 4.0}, 1, 2);
  const auto sc = deterministic_space(inst);
  const auto r = run_lshape(inst, sc);
  const auto sol = milp::solve(build_monolith(inst, sc).problem);
  EXPECT_NEAR(r.cost.total, sol.objective, 1e-6);
  EXPECT_EQ(r.master_solves, 2u);
}

TEST(LShape, FeedbackConstantAndNonPositive) {
  GeneratorOptions g;
  g.customers = 5;
  const auto inst = random_instance(9, g);
  const auto sc = random_scenarios(inst, 9, {3, 3, 0.4, 0.4});
  const auto r = run_lshape(inst, sc);
  ASSERT_EQ(r.feedback.size(), 2u);
  EXPECT_TRUE(r.feedback[0] == r.feedback[1]);
  EXPECT_TRUE(r.feedback[0] == compute_feedback(inst, sc));
  for (const auto* m : {&r.feedback[0].penalty, &r.feedback[0].travel, &r.feedback[0].repair})
    for (double v : m->data()) EXPECT_LE(v, 0.0);
}

TEST(LShape, ParallelMatchesSequential) {
  GeneratorOptions g;
  g.customers = 5;
  g.drones = 3;
  const auto inst = random_instance(17, g);
  const auto sc = random_scenarios(inst, 17, {6, 3, 0.4, 0.3});
  LShapeOptions seq;
  seq.threads = 1;
  LShapeOptions par;
  par.threads = 4;
  const auto a = run_lshape(inst, sc, seq);
  const auto b = run_lshape(inst, sc, par);
  EXPECT_EQ(a.plan, b.plan);
  EXPECT_EQ(a.cost.total, b.cost.total);
  ASSERT_EQ(a.iterations.size(), b.iterations.size());
  for (std::size_t k = 0; k < a.iterations.size(); ++k) {
    EXPECT_EQ(a.iterations[k].second_stage_costs, b.iterations[k].second_stage_costs);
    EXPECT_EQ(a.iterations[k].third_stage_costs, b.iterations[k].third_stage_costs);
    EXPECT_EQ(a.iterations[k].master_objective, b.iterations[k].master_objective);
  }
  EXPECT_EQ(a.cache_hits, b.cache_hits);
}

TEST(LShape, AggregateCutsConvergeAtTwo) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    GeneratorOptions g;
    g.customers = 4;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {2, 3, 0.3, 0.3});
    LShapeOptions opt;
    opt.cut_mode = CutMode::Aggregate;
    const auto r = run_lshape(inst, sc, opt);
    EXPECT_EQ(r.master_solves, 2u);
    EXPECT_GE(r.cost.total, solve_exhaustive(inst, sc).objective - 1e-6);
    EXPECT_GE(r.iterations[1].theta1, 0.0);
    EXPECT_GE(r.iterations[1].theta2, 0.0);
  }
}

TEST(LShape, IterationCapRaises) {
  const auto inst = fixtures::star({2.0, 3.0}, 1, 1);
  LShapeOptions opt;
  opt.max_iterations = 1;
  EXPECT_THROW(run_lshape(inst, deterministic_space(inst), opt), NonConvergence);
}

TEST(LShape, CacheReusesSubproblems) {
  GeneratorOptions g;
  g.customers = 4;
  g.drones = 1;
  g.randomize_costs = false;
  g.area_km = 6.0;
  const auto inst = random_instance(5, g);
  const auto sc = random_scenarios(inst, 5, {3, 3, 0.2, 0.3});
  const auto r = run_lshape(inst, sc);
  EXPECT_EQ(r.subproblems_solved + r.cache_hits, 2u);
}
