#pragma once

#include <cstddef>
#include <vector>

#include "gadop/instance.hpp"
#include "gadop/milp.hpp"
#include "gadop/plan.hpp"
#include "gadop/scenario.hpp"

namespace gadop {

// Big-M used by every linking, order and suffix constraint.
inline double big_m(const Instance& instance) { return static_cast<double>(instance.num_customers()) + 1.0; }

struct FirstStageOptions {
  // Truck capacity, daily distances and truck working time. Drone payload and
  // per-trip range are always enforced.
  bool limits = true;
  // Serving orders U and disambiguation M with their constraints.
  bool orders = true;
  // Hard time windows; only emitted when the instance has window classes.
  bool time_windows = true;
  // Drone time-window rows (ordering and drone time limits).
  bool drone_time_windows = true;
  // Groups of interchangeable drones, ascending. Within a group the k-th drone
  // may serve customer i only when drone k-1 serves some customer j < i.
  std::vector<std::vector<std::size_t>> drone_groups;
  // Same ordering rule over trucks with identical specs.
  bool truck_symmetry = true;
};

// Drones with equal specs whose takeoff and breakdown columns match in every
// scenario (spec equality only when `scenarios` is null). Singletons are
// dropped.
std::vector<std::vector<std::size_t>> interchangeable_drones(const Instance& instance,
                                                             const ScenarioSpace* scenarios);

// Column indices of the first-stage variables; -1 where absent.
struct FirstStageLayout {
  std::size_t customers = 0;
  std::size_t trucks = 0;
  std::size_t drones = 0;
  std::vector<int> truck_used;
  std::vector<int> drone_used;
  std::vector<int> arcs;          // [(t * L + a) * L + b], L = c' + 1
  std::vector<int> truck_assign;  // [i * t' + t]
  std::vector<int> drone_assign;  // [i * d' + d]
  std::vector<int> truck_order;   // [i * t' + t]
  std::vector<int> drone_order;   // [i * d' + d]
  std::vector<int> disambig;      // [(i * c' + j) * d' + d]

  int arc(std::size_t t, std::size_t a, std::size_t b) const {
    const std::size_t l = customers + 1;
    return arcs[(t * l + a) * l + b];
  }
  int xbar(std::size_t i, std::size_t t) const { return truck_assign[i * trucks + t]; }
  int xhat(std::size_t i, std::size_t d) const { return drone_assign[i * drones + d]; }
  int s(std::size_t i, std::size_t t) const { return truck_order[i * trucks + t]; }
  int u(std::size_t i, std::size_t d) const { return drone_order.empty() ? -1 : drone_order[i * drones + d]; }
  int m(std::size_t i, std::size_t j, std::size_t d) const {
    return disambig.empty() ? -1 : disambig[(i * customers + j) * drones + d];
  }
};

// Adds the first-stage variables, their objective terms (initial and truck
// travel costs) and the first-stage constraints.
FirstStageLayout add_first_stage(milp::Problem& problem, const Instance& instance, const FirstStageOptions& options);

// Reads a plan back from solver values. Without order variables drone
// customers are numbered in ascending customer index (morning customers first
// when the instance has windows).
FirstStagePlan plan_from_values(const FirstStageLayout& layout, const Instance& instance,
                                const std::vector<double>& values);

// Lower bound on a breakdown penalty variable: a solver column or a constant.
struct Activation {
  int var = -1;
  double value = 0.0;
};

struct SuffixBlock {
  std::vector<int> penalty;  // Z^a per customer, -1 where absent
  int repair = -1;           // Z^m
};

// One drone under one breakdown matrix: Z^a_i >= activation_i for broken
// customers, the order-suffix rule over `orders` (U_{i,d} columns, or -1 for
// customers fixed at order 0), and Z^m >= Z^a_i. `customers` lists the rows
// that get a Z^a variable.
SuffixBlock add_suffix_block(milp::Problem& problem, const std::vector<int>& orders,
                             const std::vector<std::size_t>& customers, const std::vector<Activation>& activation,
                             double big_m, double penalty_weight, double repair_weight);

struct ModelOptions {
  std::size_t max_variables = 200000;
  // Skip Z^a / Z^m blocks for (drone, omega, lambda) triples that can never
  // activate: grounded drone or no breakdown entry for the drone.
  bool prune_inert_recourse = true;
};

struct RecourseLayout {
  std::vector<std::vector<int>> takeoff;               // [omega][i * d' + d]
  std::vector<std::vector<SuffixBlock>> breakdown;     // [omega][lambda * d' + d]; empty block when pruned
};

class Decoder {
 public:
  Decoder() = default;
  Decoder(FirstStageLayout first, RecourseLayout recourse, Instance instance, ScenarioSpace scenarios)
      : first_(std::move(first)), recourse_(std::move(recourse)), instance_(std::move(instance)),
        scenarios_(std::move(scenarios)) {}

  const FirstStageLayout& first_stage() const { return first_; }
  const RecourseLayout& recourse() const { return recourse_; }
  const Instance& instance() const { return instance_; }
  const ScenarioSpace& scenarios() const { return scenarios_; }

 private:
  FirstStageLayout first_;
  RecourseLayout recourse_;
  Instance instance_;
  ScenarioSpace scenarios_;
};

struct MonolithModel {
  milp::Problem problem;
  Decoder decoder;
};

// Deterministic equivalent of the three-stage program.
MonolithModel build_monolith(const Instance& instance, const ScenarioSpace& scenarios, const ModelOptions& options = {});

struct DecodedSolution {
  FirstStagePlan plan;
  RecourseOutcome recourse;
  CostBreakdown cost;
};

// Decodes and re-evaluates the plan; throws DecodeMismatch when the exact
// evaluation disagrees with the solver objective by more than 1e-6.
DecodedSolution decode(const milp::Solution& solution, const Decoder& decoder);

}  // namespace gadop
