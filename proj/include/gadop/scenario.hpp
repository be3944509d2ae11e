#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "gadop/instance.hpp"
#include "gadop/matrix.hpp"

namespace gadop {

// Takeoff scenario: grounded[d] == true means drone d cannot leave the depot.
struct TakeoffScenario {
  std::vector<bool> grounded;
  double probability = 0.0;
  friend bool operator==(const TakeoffScenario&, const TakeoffScenario&) = default;
};

// Breakdown scenario: breaks(i, d) == true means drone d breaks down while
// serving customer position i. Rows are customers, columns drones.
struct BreakdownScenario {
  BoolGrid breaks;
  double probability = 0.0;
  friend bool operator==(const BreakdownScenario&, const BreakdownScenario&) = default;
};

struct ScenarioSpace {
  std::vector<TakeoffScenario> takeoff;
  std::vector<BreakdownScenario> breakdown;
  friend bool operator==(const ScenarioSpace&, const ScenarioSpace&) = default;

  // Probability that drone d takes off, sum over omega of P(omega)(1 - R_d).
  double flying_probability(std::size_t d) const;
  double grounded_probability(std::size_t d) const;
};

// Empty when the space is consistent with `instance`; otherwise one entry per problem.
std::vector<Violation> validate(const ScenarioSpace& space, const Instance& instance);
void require_valid(const ScenarioSpace& space, const Instance& instance);

inline constexpr std::size_t kMaxEnumeratedDrones = 20;

// All 2^d' grounded/flying combinations, drone 0 as the least significant bit.
// Throws OverflowRejected when num_drones > 20.
std::vector<TakeoffScenario> enumerate_takeoff(std::size_t num_drones, double per_drone_ground_prob);

// Two-point spaces: all-fly vs all-grounded, and no-break vs breakdown of the
// first ceil(fraction * c') customers on every drone. A zero-probability
// second point is omitted so p = 0 yields the deterministic space.
ScenarioSpace two_point_spaces(double p_ground, double p_break, double break_fraction, const Instance& instance);

// Single all-fly, no-break scenario.
ScenarioSpace deterministic_space(const Instance& instance);

// Helper for simulation studies: each (customer, drone) entry breaks
// independently with probability `prob`. Not used by the optimization model.
BreakdownScenario sample_independent_breakdown(std::size_t customers, std::size_t drones, double prob,
                                               std::mt19937_64& rng);

// Portable uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace gadop
