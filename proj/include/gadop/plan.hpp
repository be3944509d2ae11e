#pragma once

#include <cstddef>
#include <vector>

#include "gadop/instance.hpp"
#include "gadop/matrix.hpp"
#include "gadop/scenario.hpp"

namespace gadop {

// First-stage decisions. Customer rows are positions 0..c'-1; truck arcs are
// indexed by location (0 = depot).
struct FirstStagePlan {
  std::vector<bool> truck_used;
  std::vector<bool> drone_used;
  std::vector<BoolGrid> truck_arcs;  // per truck, (c'+1) x (c'+1)
  BoolGrid truck_assign;             // c' x t'
  BoolGrid drone_assign;             // c' x d'
  std::vector<std::vector<int>> truck_order;  // [customer][truck], MTZ labels 0..c'
  std::vector<std::vector<int>> drone_order;  // [customer][drone], 0 when unserved

  friend bool operator==(const FirstStagePlan&, const FirstStagePlan&) = default;

  // Zero-decision plan sized for the instance.
  static FirstStagePlan empty(const Instance& instance);

  // Order disambiguation indicator implied by the serving orders.
  bool order_disambig(std::size_t i, std::size_t j, std::size_t d) const {
    return drone_order[i][d] > drone_order[j][d];
  }

  // Customers of drone d sorted by serving order.
  std::vector<std::size_t> drone_sequence(std::size_t d) const;
  // Locations visited by truck t starting after the depot, following the arcs.
  // Empty when the truck has no outgoing depot arc.
  std::vector<std::size_t> truck_tour(std::size_t t) const;

  // Convenience setters used by baselines and tests.
  void assign_truck_route(std::size_t t, const std::vector<std::size_t>& customers);
  void assign_drone_sequence(std::size_t d, const std::vector<std::size_t>& customers);
};

struct RecourseOutcome {
  std::vector<BoolGrid> takeoff_penalties;                // [omega] c' x d'
  std::vector<std::vector<BoolGrid>> breakdown_penalties;  // [omega][lambda] c' x d'
  std::vector<BoolGrid> repairs;                          // [omega] d' x |Lambda|
};

struct CostBreakdown {
  double truck_initial = 0.0;
  double drone_initial = 0.0;
  double truck_travel = 0.0;
  double expected_drone_travel = 0.0;
  double expected_penalty = 0.0;
  double expected_repair = 0.0;
  double total = 0.0;
};

struct EvaluateOptions {
  // When false, capacity, distance and working-time limits are not checked
  // (the PDSTSP baseline ignores them).
  bool check_limits = true;
  // When false, window classes are ignored altogether.
  bool check_time_windows = true;
};

// Throws InfeasiblePlan naming the first violated first-stage rule.
void check_plan(const FirstStagePlan& plan, const Instance& instance, const EvaluateOptions& options = {});

// Number of customers that pay a breakdown penalty when drone d flies its
// sequence under breakdown matrix `breaks`: everything from the first broken
// served customer onwards.
std::size_t stranded_count(const std::vector<std::size_t>& sequence, const BoolGrid& breaks, std::size_t d);

RecourseOutcome recourse_of(const FirstStagePlan& plan, const Instance& instance, const ScenarioSpace& scenarios);

// Exact expected payment of a feasible plan.
CostBreakdown evaluate_plan(const FirstStagePlan& plan, const Instance& instance, const ScenarioSpace& scenarios,
                            const EvaluateOptions& options = {});

// Payment realised in one (omega, lambda) draw; shares the rules of evaluate_plan.
CostBreakdown realized_cost(const FirstStagePlan& plan, const Instance& instance, const TakeoffScenario& takeoff,
                            const BreakdownScenario& breakdown);

}  // namespace gadop
