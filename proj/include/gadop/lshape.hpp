#pragma once

#include <cstddef>
#include <vector>

#include "gadop/instance.hpp"
#include "gadop/matrix.hpp"
#include "gadop/milp.hpp"
#include "gadop/model.hpp"
#include "gadop/plan.hpp"
#include "gadop/scenario.hpp"

namespace gadop {

// Feedback coefficients returned to the master problem. All entries are <= 0.
struct FeedbackParameters {
  Matrix penalty;  // E^p, c' x d'
  Matrix travel;   // E^r
  Matrix repair;   // E^m
  std::vector<Matrix> penalty_aux;  // e^p per omega
  std::vector<Matrix> repair_aux;   // e^m per omega
  std::vector<double> repair_max;   // M_d = max_i E^m_{i,d}

  friend bool operator==(const FeedbackParameters&, const FeedbackParameters&) = default;
};

// Depends only on the instance and scenario space.
FeedbackParameters compute_feedback(const Instance& instance, const ScenarioSpace& scenarios);

struct SecondStageResult {
  BoolGrid takeoff_penalties;  // Z^b, c' x d'
  double cost = 0.0;           // drone travel when flying + grounded penalties
};

SecondStageResult solve_second_stage(const Instance& instance, const BoolGrid& drone_assign,
                                     const TakeoffScenario& takeoff);

struct ThirdStageResult {
  std::vector<std::vector<int>> drone_order;  // [customer][drone], 0 when unserved
  double cost = 0.0;                          // sum over lambda of P(lambda) (p Z^a + m Z^m)
  std::size_t nodes = 0;
};

// One MILP per flying drone over its served customers: a single serving
// order shared by all breakdown scenarios.
ThirdStageResult solve_third_stage(const Instance& instance, const BoolGrid& drone_assign,
                                   const TakeoffScenario& takeoff, const std::vector<BreakdownScenario>& breakdown,
                                   const milp::Engine& engine = milp::default_engine(), const milp::Limits& limits = {});

enum class CutMode {
  // Aggregate theta_1 cut plus an exact recourse bound on theta_2 built from
  // an omega-aggregated serving-order block. Matches the monolith optimum.
  Exact,
  // Both cuts aggregate, theta_2 one row per customer. Can underestimate.
  Aggregate,
};

struct LShapeOptions {
  CutMode cut_mode = CutMode::Exact;
  std::size_t max_iterations = 10;
  unsigned threads = 1;  // 0 = hardware concurrency
  milp::Limits limits;
  const milp::Engine* engine = nullptr;
};

struct IterationTrace {
  std::size_t k = 0;
  double master_objective = 0.0;
  bool has_theta = false;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double convergence_b = 0.0;
  bool converged = false;
  std::vector<double> second_stage_costs;  // per omega
  std::vector<double> third_stage_costs;   // per omega
  double master_time_s = 0.0;
  double subproblem_time_s = 0.0;
  std::size_t master_nodes = 0;
};

struct LShapeReport {
  FirstStagePlan plan;
  CostBreakdown cost;
  milp::Status status = milp::Status::Optimal;
  std::size_t master_solves = 0;
  std::vector<IterationTrace> iterations;
  std::vector<FeedbackParameters> feedback;  // one per iteration
  std::size_t cache_hits = 0;
  std::size_t subproblems_solved = 0;
  double wall_time_s = 0.0;
};

// Algorithm 1. Throws NonConvergence when max_iterations is exceeded.
LShapeReport run_lshape(const Instance& instance, const ScenarioSpace& scenarios, const LShapeOptions& options = {});

}  // namespace gadop
