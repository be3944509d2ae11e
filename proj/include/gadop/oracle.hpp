#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gadop/instance.hpp"
#include "gadop/plan.hpp"
#include "gadop/scenario.hpp"

namespace gadop {

struct OracleCaps {
  std::size_t max_customers = 7;
  std::size_t max_trucks = 2;
  std::size_t max_drones = 3;
};

struct OracleResult {
  bool feasible = false;
  FirstStagePlan plan;
  double objective = 0.0;
  std::size_t assignments_checked = 0;
};

// Exhaustive search over assignments, truck tours and drone orders. Does not
// touch the MILP core. Throws CapExceeded outside the caps.
OracleResult solve_exhaustive(const Instance& instance, const ScenarioSpace& scenarios, const OracleCaps& caps = {},
                              unsigned threads = 1);

// Expected payment of a plan, coded separately from evaluate_plan. Assumes the
// plan is feasible.
double oracle_plan_cost(const FirstStagePlan& plan, const Instance& instance, const ScenarioSpace& scenarios);

struct CrossCheckReport {
  double oracle = 0.0;
  double monolith = 0.0;
  double lshape = 0.0;
  bool oracle_feasible = false;
  std::vector<std::string> flagged;  // one line per pairwise gap above 1e-6

  bool agrees() const { return flagged.empty(); }
};

// Throws InvalidInstance for instances that fail validation.
CrossCheckReport cross_check(const Instance& instance, const ScenarioSpace& scenarios, const OracleCaps& caps = {});

}  // namespace gadop
