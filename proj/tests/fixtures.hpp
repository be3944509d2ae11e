#pragma once

#include <vector>

#include "gadop/instance.hpp"
#include "gadop/scenario.hpp"

namespace fixtures {

// Star instance: customer k at depot distance radii[k] on its own ray; the
// distance between two customers is the sum of their radii.
inline gadop::Instance star(const std::vector<double>& radii, std::size_t trucks, std::size_t drones) {
  using namespace gadop;
  Instance inst;
  inst.name = "star";
  const std::size_t n = radii.size();
  inst.distances_km = Matrix(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    inst.customers.push_back({static_cast<int>(i + 1), 1.0, WindowClass::None});
    inst.distances_km(0, i + 1) = inst.distances_km(i + 1, 0) = radii[i];
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) inst.distances_km(i + 1, j + 1) = radii[i] + radii[j];
  }
  inst.costs = default_cost_model(inst.distances_km);
  for (std::size_t t = 0; t < trucks; ++t) {
    TruckSpec tr;
    tr.id = static_cast<int>(t + 1);
    inst.trucks.push_back(tr);
  }
  for (std::size_t d = 0; d < drones; ++d) {
    DroneSpec dr;
    dr.id = static_cast<int>(d + 1);
    inst.drones.push_back(dr);
  }
  return inst;
}

inline gadop::ScenarioSpace fly_or_ground(std::size_t drones, double p_ground, const gadop::Instance& inst) {
  gadop::ScenarioSpace sc = gadop::deterministic_space(inst);
  sc.takeoff[0].probability = 1.0 - p_ground;
  sc.takeoff.push_back({std::vector<bool>(drones, true), p_ground});
  return sc;
}

}  // namespace fixtures
