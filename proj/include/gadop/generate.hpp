#pragma once

#include <cstddef>
#include <cstdint>

#include "gadop/instance.hpp"
#include "gadop/scenario.hpp"

namespace gadop {

struct GeneratorOptions {
  std::size_t customers = 5;
  std::size_t trucks = 1;
  std::size_t drones = 2;
  double area_km = 12.0;  // customers uniform in a square of this side, depot at the centre
  bool randomize_costs = true;
  bool time_windows = false;
};

// Reproducible random desk-scale instance.
Instance random_instance(std::uint64_t seed, const GeneratorOptions& options = {});

struct ScenarioOptions {
  std::size_t takeoff = 2;
  std::size_t breakdown = 2;
  double ground_prob = 0.3;  // per entry of a drawn takeoff pattern
  double break_prob = 0.3;   // per (customer, drone) entry of a drawn breakdown matrix
};

// First takeoff scenario is all-fly and first breakdown scenario is no-break;
// the rest are random patterns. Probabilities are random and sum to 1.
ScenarioSpace random_scenarios(const Instance& instance, std::uint64_t seed, const ScenarioOptions& options = {});

}  // namespace gadop
