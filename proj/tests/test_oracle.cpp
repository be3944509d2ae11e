#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gadop/errors.hpp"
#include "gadop/generate.hpp"
#include "gadop/oracle.hpp"

using namespace gadop;

TEST(Oracle, SingleDroneOnlyCustomer) {
  auto inst = fixtures::star({2.0}, 0, 1);
  const auto r = solve_exhaustive(inst, deterministic_space(inst));
  ASSERT_TRUE(r.feasible);
  EXPECT_TRUE(r.plan.drone_assign(0, 0));
  EXPECT_NEAR(r.objective, 100.0 + 0.02, 1e-12);
}

TEST(Oracle, TruckDominates) {
  auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 1);
  inst.trucks[0].initial_cost = 1.0;
  inst.drones[0].initial_cost = 50.0;
  const auto r = solve_exhaustive(inst, deterministic_space(inst));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(r.plan.truck_assign(i, 0));
  EXPECT_NEAR(r.objective, 1.0 + 2.0 * 9.0 * 0.105, 1e-12);
}

TEST(Oracle, EmptyInstance) {
  const auto inst = fixtures::star({}, 1, 1);
  const auto r = solve_exhaustive(inst, deterministic_space(inst));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_FALSE(r.plan.truck_used[0]);
  EXPECT_FALSE(r.plan.drone_used[0]);
}

TEST(Oracle, CapsEnforced) {
  const auto inst = fixtures::star({1, 1, 1, 1, 1, 1, 1, 1}, 1, 1);
  EXPECT_THROW(solve_exhaustive(inst, deterministic_space(inst)), CapExceeded);
  const auto drones = fixtures::star({1.0}, 1, 4);
  EXPECT_THROW(solve_exhaustive(drones, deterministic_space(drones)), CapExceeded);
}

TEST(Oracle, InfeasibleWhenNothingFits) {
  auto inst = fixtures::star({9.0}, 0, 1);
  const auto r = solve_exhaustive(inst, deterministic_space(inst));
  EXPECT_FALSE(r.feasible);
}

TEST(Oracle, DeterministicTieBreak) {
  const auto inst = fixtures::star({2.0, 2.0}, 0, 2);
  const auto a = solve_exhaustive(inst, deterministic_space(inst));
  const auto b = solve_exhaustive(inst, deterministic_space(inst), {}, 4);
  EXPECT_EQ(a.plan, b.plan);
  EXPECT_TRUE(a.plan.drone_assign(0, 0));
  EXPECT_TRUE(a.plan.drone_assign(1, 0));
}

// The oracle's evaluator and evaluate_plan agree on every plan the oracle can
// build: each assignment with every truck tour and drone order.
TEST(Oracle, EvaluatorsAgreeOnEnumeratedPlans) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    GeneratorOptions g;
    g.customers = 4;
    auto inst = random_instance(seed, g);
    for (auto& c : inst.customers) c.package_weight_kg = 1.0;
    const auto sc = random_scenarios(inst, seed, {3, 3, 0.4, 0.4});
    const std::size_t nv = inst.num_trucks() + inst.num_drones();
    std::size_t checked = 0;
    std::vector<std::size_t> digit(inst.num_customers(), 0);
    for (bool more = true; more;) {
      std::vector<std::vector<std::size_t>> sets(nv);
      for (std::size_t i = 0; i < digit.size(); ++i) sets[digit[i]].push_back(i);
      std::vector<std::vector<std::size_t>> perms = sets;
      for (bool inner = true; inner;) {
        auto plan = FirstStagePlan::empty(inst);
        for (std::size_t v = 0; v < nv; ++v) {
          if (v < inst.num_trucks()) {
            plan.assign_truck_route(v, perms[v]);
          } else {
            plan.assign_drone_sequence(v - inst.num_trucks(), perms[v]);
          }
        }
        try {
          const double a = evaluate_plan(plan, inst, sc).total;
          EXPECT_NEAR(a, oracle_plan_cost(plan, inst, sc), 1e-9);
          ++checked;
        } catch (const InfeasiblePlan&) {
        }
        inner = false;
        for (std::size_t v = 0; v < nv && !inner; ++v) inner = std::next_permutation(perms[v].begin(), perms[v].end());
      }
      more = false;
      for (std::size_t i = digit.size(); i-- > 0;) {
        if (++digit[i] < nv) {
          more = true;
          break;
        }
        digit[i] = 0;
      }
    }
    EXPECT_GT(checked, 100u);
  }
}

TEST(CrossCheck, DeterministicFourCustomers) {
  const auto inst = fixtures::star({2.0, 3.0, 5.0, 9.0}, 1, 2);
  const auto r = cross_check(inst, deterministic_space(inst));
  EXPECT_TRUE(r.agrees());
  EXPECT_TRUE(r.oracle_feasible);
}

TEST(CrossCheck, RandomSeeds) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorOptions g;
    g.customers = 3 + seed % 3;
    const auto inst = random_instance(seed, g);
    const auto sc = random_scenarios(inst, seed, {1 + seed % 4, 1 + (seed / 4) % 4, 0.3, 0.3});
    const auto r = cross_check(inst, sc);
    EXPECT_TRUE(r.agrees()) << "seed " << seed << ": " << (r.flagged.empty() ? "" : r.flagged[0]);
  }
}

TEST(CrossCheck, RefusesInvalidInstance) {
  auto inst = fixtures::star({2.0, 3.0}, 1, 1);
  inst.distances_km(1, 1) = 4.0;
  try {
    cross_check(inst, deterministic_space(inst));
    FAIL();
  } catch (const InvalidInstance& e) {
    EXPECT_NE(std::string(e.what()).find("nonzero diagonal"), std::string::npos);
  }
}
