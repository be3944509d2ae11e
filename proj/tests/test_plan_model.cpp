#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "gadop/errors.hpp"
#include "gadop/generate.hpp"
#include "gadop/model.hpp"
#include "gadop/oracle.hpp"
#include "gadop/plan.hpp"

using namespace gadop;

namespace {

milp::Solution solve_monolith(const MonolithModel& m) {
  auto sol = milp::solve(m.problem);
  EXPECT_EQ(sol.status, milp::Status::Optimal);
  return sol;
}

ScenarioSpace single_break(const Instance& inst, std::size_t customer, std::size_t drone) {
  ScenarioSpace sc = deterministic_space(inst);
  sc.breakdown[0].breaks.set(customer, drone, true);
  return sc;
}

}  // namespace

TEST(EvaluatePlan, SuffixPenaltyAndOneRepair) {
  const auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 1);
  auto plan = FirstStagePlan::empty(inst);
  plan.assign_drone_sequence(0, {0, 1, 2});
  const auto sc = single_break(inst, 1, 0);
  const auto c = evaluate_plan(plan, inst, sc);
  EXPECT_NEAR(c.expected_penalty, 2.0 * inst.costs.penalty, 1e-12);
  EXPECT_NEAR(c.expected_repair, inst.costs.repair, 1e-12);
  EXPECT_NEAR(c.expected_drone_travel, 0.005 * 2.0 * (2.0 + 3.0 + 4.0), 1e-12);
  EXPECT_NEAR(c.total, c.drone_initial + c.expected_drone_travel + c.expected_penalty + c.expected_repair, 1e-9);
}

TEST(EvaluatePlan, GroundedDronePaysPenaltyOnly) {
  const auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 1);
  auto plan = FirstStagePlan::empty(inst);
  plan.assign_drone_sequence(0, {2, 0, 1});
  auto sc = single_break(inst, 0, 0);
  sc.takeoff[0].grounded[0] = true;
  const auto c = evaluate_plan(plan, inst, sc);
  EXPECT_NEAR(c.expected_penalty, 3.0 * inst.costs.penalty, 1e-12);
  EXPECT_EQ(c.expected_drone_travel, 0.0);
  EXPECT_EQ(c.expected_repair, 0.0);
  EXPECT_EQ(c.drone_initial, inst.drones[0].initial_cost);
}

TEST(EvaluatePlan, DeterministicHasNoRecourse) {
  const auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 2);
  auto plan = FirstStagePlan::empty(inst);
  plan.assign_truck_route(0, {1});
  plan.assign_drone_sequence(0, {0});
  plan.assign_drone_sequence(1, {2});
  const auto c = evaluate_plan(plan, inst, deterministic_space(inst));
  EXPECT_EQ(c.expected_penalty, 0.0);
  EXPECT_EQ(c.expected_repair, 0.0);
  EXPECT_NEAR(c.truck_travel, 2.0 * 3.0 * 0.105, 1e-12);
}

TEST(EvaluatePlan, NamesViolatedRule) {
  const auto inst = fixtures::star({2.0, 3.0, 9.0}, 1, 1);
  auto plan = FirstStagePlan::empty(inst);
  plan.assign_drone_sequence(0, {0, 1});
  try {
    evaluate_plan(plan, inst, deterministic_space(inst));
    FAIL() << "expected InfeasiblePlan";
  } catch (const InfeasiblePlan& e) {
    EXPECT_EQ(e.constraint, "allocation");
  }
  plan.assign_drone_sequence(0, {0, 1, 2});
  try {
    evaluate_plan(plan, inst, deterministic_space(inst));
    FAIL() << "expected InfeasiblePlan";
  } catch (const InfeasiblePlan& e) {
    EXPECT_EQ(e.constraint, "trip-distance");
  }
  plan.assign_drone_sequence(0, {0, 1});
  plan.assign_truck_route(0, {2});
  plan.drone_order[1][0] = 1;
  try {
    evaluate_plan(plan, inst, deterministic_space(inst));
    FAIL() << "expected InfeasiblePlan";
  } catch (const InfeasiblePlan& e) {
    EXPECT_EQ(e.constraint, "drone-order");
  }
}

TEST(Monolith, SingleCustomerGoesToCheaperDrone) {
  const auto inst = fixtures::star({2.0}, 1, 1);
  const auto m = build_monolith(inst, deterministic_space(inst));
  const auto dec = decode(solve_monolith(m), m.decoder);
  EXPECT_TRUE(dec.plan.drone_assign(0, 0));
  EXPECT_NEAR(dec.cost.total, inst.drones[0].initial_cost + inst.drone_cost(0), 1e-9);
}

TEST(Monolith, TripLimitForcesTruck) {
  const auto inst = fixtures::star({8.0, 2.0}, 1, 2);
  const auto m = build_monolith(inst, deterministic_space(inst));
  const auto dec = decode(solve_monolith(m), m.decoder);
  for (std::size_t d = 0; d < 2; ++d) EXPECT_FALSE(dec.plan.drone_assign(0, d));
  EXPECT_TRUE(dec.plan.truck_assign(0, 0));
}

TEST(Monolith, ZeroCustomers) {
  const auto inst = fixtures::star({}, 1, 2);
  const auto m = build_monolith(inst, deterministic_space(inst));
  const auto dec = decode(solve_monolith(m), m.decoder);
  EXPECT_EQ(dec.cost.total, 0.0);
  EXPECT_FALSE(dec.plan.truck_used[0]);
}

TEST(Monolith, ModelTooLarge) {
  const auto inst = fixtures::star({1.0, 2.0, 3.0}, 1, 2);
  ModelOptions opt;
  opt.max_variables = 10;
  EXPECT_THROW(build_monolith(inst, deterministic_space(inst), opt), ModelTooLarge);
}

TEST(Monolith, PruningDoesNotChangeOptimum) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GeneratorOptions g;
    g.customers = 4;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {3, 3, 0.4, 0.3});
    ModelOptions full;
    full.prune_inert_recourse = false;
    const auto a = milp::solve(build_monolith(inst, sc).problem);
    const auto b = milp::solve(build_monolith(inst, sc, full).problem);
    EXPECT_NEAR(a.objective, b.objective, 1e-6) << "seed " << seed;
  }
}

TEST(Monolith, UncertaintyMovesCustomersOffDrones) {
  GeneratorOptions g;
  g.customers = 6;
  g.randomize_costs = false;
  g.area_km = 8.0;
  const auto inst = random_instance(21, g);
  const auto count = [&](const ScenarioSpace& sc) {
    const auto m = build_monolith(inst, sc);
    const auto dec = decode(solve_monolith(m), m.decoder);
    std::size_t k = 0;
    for (std::size_t i = 0; i < inst.num_customers(); ++i)
      for (std::size_t d = 0; d < inst.num_drones(); ++d) k += dec.plan.drone_assign(i, d);
    return std::make_pair(k, dec.cost.total);
  };
  const auto det = count(deterministic_space(inst));
  const auto rnd = count(two_point_spaces(0.1, 0.1, 0.2, inst));
  EXPECT_LE(rnd.first, det.first);
  EXPECT_GE(rnd.second, det.second - 1e-9);
}

// Z^a values in the solver equal the order suffix of the decoded plan.
TEST(Monolith, SuffixPropertyOnDecodedSolutions) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorOptions g;
    g.customers = 5;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {2, 3, 0.3, 0.4});
    ModelOptions opt;
    opt.prune_inert_recourse = false;
    const auto m = build_monolith(inst, sc, opt);
    const auto sol = solve_monolith(m);
    const auto dec = decode(sol, m.decoder);
    const auto& R = m.decoder.recourse();
    for (std::size_t w = 0; w < sc.takeoff.size(); ++w)
      for (std::size_t l = 0; l < sc.breakdown.size(); ++l)
        for (std::size_t d = 0; d < inst.num_drones(); ++d) {
          const auto& block = R.breakdown[w][l * inst.num_drones() + d];
          for (std::size_t i = 0; i < inst.num_customers(); ++i) {
            const bool z = sol.values[static_cast<std::size_t>(block.penalty[i])] > 0.5;
            EXPECT_EQ(z, dec.recourse.breakdown_penalties[w][l](i, d))
                << "seed " << seed << " w " << w << " l " << l << " d " << d << " i " << i;
          }
          const bool rep = sol.values[static_cast<std::size_t>(block.repair)] > 0.5;
          EXPECT_EQ(rep, dec.recourse.repairs[w](d, l));
        }
  }
}

// No permutation of a drone's customers beats the solver's order.
TEST(Monolith, OrderPessimism) {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    GeneratorOptions g;
    g.customers = 6;
    g.drones = 1;
    g.area_km = 7.0;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {2, 4, 0.2, 0.3});
    const auto m = build_monolith(inst, sc);
    const auto dec = decode(solve_monolith(m), m.decoder);
    auto seq = dec.plan.drone_sequence(0);
    const double mine = dec.cost.expected_penalty + dec.cost.expected_repair;
    std::sort(seq.begin(), seq.end());
    do {
      auto p = dec.plan;
      p.assign_drone_sequence(0, seq);
      const auto c = evaluate_plan(p, inst, sc);
      EXPECT_GE(c.expected_penalty + c.expected_repair, mine - 1e-9) << "seed " << seed;
    } while (std::next_permutation(seq.begin(), seq.end()));
  }
}

TEST(Monolith, CostScalingKeepsArgmin) {
  for (std::uint64_t seed = 3; seed <= 7; ++seed) {
    GeneratorOptions g;
    g.customers = 4;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {2, 2, 0.3, 0.3});
    auto scaled = inst;
    const double k = 3.5;
    scaled.costs.penalty *= k;
    scaled.costs.repair *= k;
    for (auto& t : scaled.trucks) t.initial_cost *= k;
    for (auto& d : scaled.drones) d.initial_cost *= k;
    for (auto& c : scaled.costs.drone_roundtrip_cost) c *= k;
    for (std::size_t a = 0; a < scaled.costs.truck_arc_cost.rows(); ++a)
      for (std::size_t b = 0; b < scaled.costs.truck_arc_cost.cols(); ++b) scaled.costs.truck_arc_cost(a, b) *= k;
    const auto base = solve_exhaustive(inst, sc);
    const auto m = build_monolith(scaled, sc);
    const auto dec = decode(solve_monolith(m), m.decoder);
    EXPECT_NEAR(dec.cost.total, k * base.objective, 1e-6 * k);
    EXPECT_NEAR(evaluate_plan(dec.plan, inst, sc).total, base.objective, 1e-6);
  }
}

TEST(Monolith, TimeWindowsRespected) {
  GeneratorOptions g;
  g.customers = 5;
  g.time_windows = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {2, 2, 0.3, 0.3});
    const auto m = build_monolith(inst, sc);
    const auto dec = decode(solve_monolith(m), m.decoder);
    EXPECT_NO_THROW(check_plan(dec.plan, inst));
    EXPECT_NEAR(dec.cost.total, solve_exhaustive(inst, sc).objective, 1e-6);
  }
}

TEST(Monolith, DecodeRejectsForeignObjective) {
  const auto inst = fixtures::star({2.0, 3.0}, 1, 1);
  const auto m = build_monolith(inst, deterministic_space(inst));
  auto sol = solve_monolith(m);
  sol.objective += 1.0;
  EXPECT_THROW(decode(sol, m.decoder), DecodeMismatch);
}

TEST(Symmetry, InterchangeableDroneGroups) {
  auto inst = fixtures::star({2.0, 3.0}, 1, 3);
  auto sc = deterministic_space(inst);
  EXPECT_EQ(interchangeable_drones(inst, &sc), (std::vector<std::vector<std::size_t>>{{0, 1, 2}}));
  sc.breakdown[0].breaks.set(1, 2, true);
  EXPECT_EQ(interchangeable_drones(inst, &sc), (std::vector<std::vector<std::size_t>>{{0, 1}}));
  EXPECT_EQ(interchangeable_drones(inst, nullptr).size(), 1u);
  inst.drones[1].initial_cost = 90.0;
  EXPECT_TRUE(interchangeable_drones(inst, &sc).empty());
}

TEST(Symmetry, IdenticalTrucksKeepOptimum) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GeneratorOptions g;
    g.customers = 4;
    g.trucks = 2;
    g.drones = 1;
    auto inst = random_instance(seed, g);
    inst.trucks[1] = inst.trucks[0];
    inst.trucks[1].id = 2;
    inst.trucks[0].capacity_kg = inst.trucks[1].capacity_kg = 3.0;
    const auto sc = random_scenarios(inst, seed, {2, 2, 0.3, 0.3});
    const auto m = build_monolith(inst, sc);
    const auto sol = milp::solve(m.problem);
    const auto o = solve_exhaustive(inst, sc);
    ASSERT_EQ(sol.status == milp::Status::Optimal, o.feasible) << "seed " << seed;
    if (o.feasible) EXPECT_NEAR(sol.objective, o.objective, 1e-6) << "seed " << seed;
  }
}
