#pragma once

#include <vector>

#include "gadop/instance.hpp"
#include "gadop/milp.hpp"
#include "gadop/model.hpp"
#include "gadop/plan.hpp"
#include "gadop/scenario.hpp"

namespace gadop {

struct EvfProbabilities {
  std::vector<double> ground_prob;  // per drone, P(d)
  std::vector<double> break_prob;   // per customer, P(i)
  std::vector<double> repair_prob;  // per drone, M(d)
};

// P(d) is the grounded probability, P(i) the breakdown probability at customer
// i averaged over drones, M(d) the probability that any breakdown hits drone d.
EvfProbabilities derive_evf_probabilities(const Instance& instance, const ScenarioSpace& scenarios);

struct EvfOptions {
  // Literal form: drone travel weighted by P(d), grounded penalty by 1 - P(d)
  // and the repair term left as a constant. The default swaps the first two
  // and charges repairs only for used drones.
  bool literal = false;
};

struct BaselineModel {
  milp::Problem problem;
  FirstStageLayout layout;
};

BaselineModel build_evf(const Instance& instance, const EvfProbabilities& probs, const EvfOptions& options = {});

// Single-truck parallel drone scheduling with payment objective. No limits
// beyond drone payload and per-trip range, no time windows, no uncertainty.
// Throws UnsupportedFleet unless the instance has exactly one truck.
BaselineModel build_pdstsp(const Instance& instance);

// Drone customers are ordered by ascending index (morning first when the
// instance has windows).
FirstStagePlan decode_baseline(const milp::Solution& solution, const BaselineModel& model, const Instance& instance);

struct BaselineResult {
  FirstStagePlan plan;
  milp::Status status = milp::Status::Infeasible;
  double model_objective = 0.0;
  CostBreakdown cost;  // exact expectation under the true scenario space
};

BaselineResult solve_evf(const Instance& instance, const ScenarioSpace& scenarios, const EvfOptions& options = {},
                         const milp::Limits& limits = {}, const milp::Engine& engine = milp::default_engine());
BaselineResult solve_pdstsp(const Instance& instance, const ScenarioSpace& scenarios, const milp::Limits& limits = {},
                            const milp::Engine& engine = milp::default_engine());

}  // namespace gadop
