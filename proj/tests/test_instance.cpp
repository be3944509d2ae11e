#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gadop/errors.hpp"
#include "gadop/instance.hpp"
#include "gadop/scenario.hpp"

using namespace gadop;

TEST(Instance, WellFormedHasNoViolations) {
  const auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 2);
  EXPECT_TRUE(validate(inst).empty());
  EXPECT_NO_THROW(require_valid(inst));
}

TEST(Instance, NonzeroDiagonalFlagged) {
  auto inst = fixtures::star({2.0, 3.0}, 1, 1);
  inst.distances_km(1, 1) = 5.0;
  const auto v = validate(inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, "nonzero diagonal");
  EXPECT_THROW(require_valid(inst), InvalidInstance);
}

TEST(Instance, NegativeWeightFlagged) {
  auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 1);
  inst.customers[2].package_weight_kg = -1.0;
  const auto v = validate(inst);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "customers[2].package_weight_kg");
  EXPECT_EQ(v[0].rule, "negative weight");
}

TEST(Instance, TripLongerThanDailyLimitFlagged) {
  auto inst = fixtures::star({2.0}, 1, 1);
  inst.drones[0].trip_distance_km = 200.0;
  const auto v = validate(inst);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].rule, "trip limit exceeds daily limit");
}

TEST(Instance, ValidateIsPureAndIdempotent) {
  auto inst = fixtures::star({2.0, 3.0}, 1, 1);
  inst.distances_km(0, 0) = 1.0;
  inst.costs.penalty = -3.0;
  const auto copy = inst;
  const auto a = validate(inst);
  const auto b = validate(inst);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(inst.distances_km, copy.distances_km);
}

TEST(Instance, DefaultCostModelExamples) {
  Matrix k(3, 3);
  k(0, 1) = 10.0;
  k(1, 0) = 7.0;
  k(0, 2) = 7.0;
  k(2, 0) = 7.0;
  const auto c = default_cost_model(k);
  EXPECT_NEAR(c.truck_arc_cost(0, 1), 1.05, 1e-12);
  EXPECT_NEAR(c.drone_roundtrip_cost[2], 0.07, 1e-12);
  EXPECT_EQ(c.truck_arc_cost(1, 2), 0.0);
  EXPECT_EQ(c.penalty, 20.0);
  EXPECT_EQ(c.repair, 50.0);
}

TEST(Instance, DefaultCostModelFactorsOnRandomArcs) {
  std::mt19937_64 rng(11);
  const std::size_t n = 12;
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) k(i, j) = 100.0 * unit_uniform(rng);
  const auto c = default_cost_model(k);
  for (int s = 0; s < 100; ++s) {
    const std::size_t i = rng() % n;
    const std::size_t j = rng() % n;
    EXPECT_DOUBLE_EQ(c.truck_arc_cost(i, j), k(i, j) * 1.05 * 0.1);
  }
  for (std::size_t i = 1; i < n; ++i) EXPECT_DOUBLE_EQ(c.drone_roundtrip_cost[i], 0.005 * (k(i, 0) + k(0, i)));
}

TEST(Instance, EuclideanDistances) {
  const auto k = euclidean_distances({{0.0, 0.0}, {3.0, 4.0}});
  EXPECT_DOUBLE_EQ(k(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(k(1, 0), 5.0);
  EXPECT_DOUBLE_EQ(k(1, 1), 0.0);
}

TEST(Scenario, EnumerateTakeoffExamples) {
  const auto one = enumerate_takeoff(1, 0.1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0].grounded, std::vector<bool>{false});
  EXPECT_NEAR(one[0].probability, 0.9, 1e-15);
  EXPECT_EQ(one[1].grounded, std::vector<bool>{true});
  EXPECT_NEAR(one[1].probability, 0.1, 1e-15);

  const auto zero = enumerate_takeoff(3, 0.0);
  ASSERT_EQ(zero.size(), 8u);
  EXPECT_EQ(zero[0].probability, 1.0);
  for (std::size_t k = 1; k < 8; ++k) EXPECT_EQ(zero[k].probability, 0.0);

  const auto half = enumerate_takeoff(2, 0.5);
  ASSERT_EQ(half.size(), 4u);
  for (const auto& s : half) EXPECT_DOUBLE_EQ(s.probability, 0.25);

  EXPECT_THROW(enumerate_takeoff(21, 0.1), OverflowRejected);
}

TEST(Scenario, EnumerateTakeoffSumsToOne) {
  std::mt19937_64 rng(5);
  for (std::size_t d = 0; d <= 20; d += (d < 12 ? 1 : 4)) {
    const double p = unit_uniform(rng);
    const auto s = enumerate_takeoff(d, p);
    ASSERT_EQ(s.size(), std::size_t{1} << d);
    double sum = 0.0;
    for (const auto& w : s) sum += w.probability;
    EXPECT_NEAR(sum, 1.0, 1e-10) << "d'=" << d;
  }
}

TEST(Scenario, TwoPointSpaceBreaksFirstCustomers) {
  std::vector<double> radii(25, 3.0);
  const auto inst = fixtures::star(radii, 1, 3);
  const auto sc = two_point_spaces(0.1, 0.1, 0.2, inst);
  ASSERT_EQ(sc.takeoff.size(), 2u);
  ASSERT_EQ(sc.breakdown.size(), 2u);
  EXPECT_NEAR(sc.takeoff[1].probability, 0.1, 1e-15);
  EXPECT_EQ(sc.takeoff[1].grounded, std::vector<bool>(3, true));
  for (std::size_t i = 0; i < 25; ++i)
    for (std::size_t d = 0; d < 3; ++d) {
      EXPECT_EQ(sc.breakdown[1].breaks(i, d), i < 5);
      EXPECT_FALSE(sc.breakdown[0].breaks(i, d));
    }
  EXPECT_TRUE(validate(sc, inst).empty());
}

TEST(Scenario, TwoPointDegenerateAndFull) {
  const auto inst = fixtures::star({1.0, 2.0, 3.0}, 1, 2);
  const auto det = two_point_spaces(0.0, 0.0, 0.5, inst);
  ASSERT_EQ(det.takeoff.size(), 1u);
  ASSERT_EQ(det.breakdown.size(), 1u);
  EXPECT_EQ(det, deterministic_space(inst));
  const auto full = two_point_spaces(0.2, 0.3, 1.0, inst);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t d = 0; d < 2; ++d) EXPECT_TRUE(full.breakdown[1].breaks(i, d));
}

TEST(Scenario, ValueEquality) {
  const auto inst = fixtures::star({1.0, 2.0}, 1, 2);
  auto a = two_point_spaces(0.1, 0.1, 0.5, inst);
  auto b = two_point_spaces(0.1, 0.1, 0.5, inst);
  EXPECT_EQ(a, b);
  b.breakdown[1].breaks.set(1, 1, true);
  EXPECT_NE(a, b);
}

TEST(Scenario, ProbabilitiesMustSumToOne) {
  const auto inst = fixtures::star({1.0, 2.0}, 1, 1);
  auto sc = deterministic_space(inst);
  sc.takeoff[0].probability = 0.9;
  EXPECT_FALSE(validate(sc, inst).empty());
  EXPECT_THROW(require_valid(sc, inst), InvalidInstance);
}

TEST(Scenario, UnitUniformRange) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10000; ++k) {
    const double u = unit_uniform(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
