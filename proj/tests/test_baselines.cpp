#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gadop/baselines.hpp"
#include "gadop/errors.hpp"
#include "gadop/generate.hpp"
#include "gadop/lshape.hpp"
#include "gadop/oracle.hpp"

using namespace gadop;

TEST(Evf, DerivedProbabilities) {
  const auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 2);
  auto sc = fixtures::fly_or_ground(2, 0.25, inst);
  sc.breakdown[0].probability = 0.6;
  BreakdownScenario b{BoolGrid(3, 2), 0.4};
  b.breaks.set(1, 0, true);
  sc.breakdown.push_back(b);
  const auto p = derive_evf_probabilities(inst, sc);
  EXPECT_DOUBLE_EQ(p.ground_prob[0], 0.25);
  EXPECT_DOUBLE_EQ(p.break_prob[1], 0.2);
  EXPECT_DOUBLE_EQ(p.break_prob[0], 0.0);
  EXPECT_DOUBLE_EQ(p.repair_prob[0], 0.4);
  EXPECT_DOUBLE_EQ(p.repair_prob[1], 0.0);
}

TEST(Evf, ZeroProbabilitiesMatchDeterministicOptimum) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GeneratorOptions g;
    g.customers = 4;
    const auto inst = random_instance(seed, g);
    const auto sc = deterministic_space(inst);
    const auto e = solve_evf(inst, sc);
    ASSERT_EQ(e.status, milp::Status::Optimal);
    EXPECT_NEAR(e.cost.total, solve_exhaustive(inst, sc).objective, 1e-6);
    EXPECT_NEAR(e.model_objective, e.cost.total, 1e-6);
    const auto g2 = run_lshape(inst, sc);
    EXPECT_EQ(e.plan.drone_assign, g2.plan.drone_assign);
    EXPECT_EQ(e.plan.truck_assign, g2.plan.truck_assign);
  }
}

TEST(Evf, AlwaysGroundedPrefersTruckWhenPenaltyHigh) {
  auto inst = fixtures::star({2.0}, 1, 1);
  inst.drones[0].initial_cost = 0.0;
  inst.trucks[0].initial_cost = 10.0;
  inst.costs.penalty = 20.0;
  EvfProbabilities p{{1.0}, {0.0}, {0.0}};
  auto m = build_evf(inst, p);
  auto sol = milp::solve(m.problem);
  auto plan = decode_baseline(sol, m, inst);
  EXPECT_TRUE(plan.truck_assign(0, 0));
  EXPECT_NEAR(sol.objective, 10.0 + 2.0 * 2.0 * 0.105, 1e-9);
  inst.costs.penalty = 5.0;
  m = build_evf(inst, p);
  sol = milp::solve(m.problem);
  plan = decode_baseline(sol, m, inst);
  EXPECT_TRUE(plan.drone_assign(0, 0));
  EXPECT_NEAR(sol.objective, 5.0, 1e-9);
}

TEST(Evf, LiteralFormSwapsWeights) {
  auto inst = fixtures::star({2.0}, 1, 1);
  EvfProbabilities p{{0.3}, {0.5}, {0.4}};
  EvfOptions lit;
  lit.literal = true;
  const auto a = build_evf(inst, p, lit);
  const auto b = build_evf(inst, p);
  const int x = a.layout.xhat(0, 0);
  const double pen = inst.costs.penalty;
  const double cr = inst.drone_cost(0);
  EXPECT_NEAR(a.problem.variable(x).objective, cr * 0.3 + pen * 0.7 + pen * 0.7 * 0.5, 1e-12);
  EXPECT_NEAR(b.problem.variable(x).objective, cr * 0.7 + pen * 0.3 + pen * 0.7 * 0.5, 1e-12);
  EXPECT_NEAR(a.problem.objective_offset, inst.costs.repair * 0.7 * 0.4, 1e-12);
  EXPECT_NEAR(b.problem.variable(b.layout.drone_used[0]).objective,
              inst.drones[0].initial_cost + inst.costs.repair * 0.7 * 0.4, 1e-12);
}

TEST(Evf, NeverBeatsGadop) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorOptions g;
    g.customers = 5;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {3, 3, 0.4, 0.4});
    const auto e = solve_evf(inst, sc);
    const auto r = run_lshape(inst, sc);
    EXPECT_GE(e.cost.total, r.cost.total - 1e-6) << "seed " << seed;
  }
}

TEST(Pdstsp, OutOfRangeIsPureTsp) {
  const auto inst = fixtures::star({8.0, 9.0, 10.0}, 1, 2);
  const auto r = solve_pdstsp(inst, deterministic_space(inst));
  ASSERT_EQ(r.status, milp::Status::Optimal);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(r.plan.truck_assign(i, 0));
  EXPECT_EQ(r.plan.truck_tour(0).size(), 3u);
  EXPECT_NEAR(r.cost.total, 280.0 + 2.0 * 27.0 * 0.105, 1e-9);
}

TEST(Pdstsp, FreeDronesTakeEverything) {
  auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 2);
  for (auto& d : inst.drones) d.initial_cost = 0.0;
  for (auto& c : inst.costs.drone_roundtrip_cost) c = 0.0;
  const auto r = solve_pdstsp(inst, deterministic_space(inst));
  EXPECT_FALSE(r.plan.truck_used[0]);
  EXPECT_NEAR(r.cost.total, 0.0, 1e-12);
}

TEST(Pdstsp, IgnoresLimits) {
  auto inst = fixtures::star({2.0, 3.0, 9.0}, 1, 1);
  inst.trucks[0].daily_distance_km = 1.0;
  inst.trucks[0].capacity_kg = 0.5;
  const auto r = solve_pdstsp(inst, deterministic_space(inst));
  EXPECT_EQ(r.status, milp::Status::Optimal);
  EXPECT_TRUE(r.plan.truck_assign(2, 0));
}

TEST(Pdstsp, RequiresOneTruck) {
  const auto inst = fixtures::star({2.0}, 2, 1);
  EXPECT_THROW(build_pdstsp(inst), UnsupportedFleet);
}

TEST(Pdstsp, ScenarioIndependentPlan) {
  GeneratorOptions g;
  g.customers = 5;
  const auto inst = random_instance(4, g);
  const auto a = solve_pdstsp(inst, deterministic_space(inst));
  const auto b = solve_pdstsp(inst, random_scenarios(inst, 4, {3, 3, 0.5, 0.5}));
  EXPECT_EQ(a.plan, b.plan);
}
