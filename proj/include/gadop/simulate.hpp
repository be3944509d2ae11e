#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gadop/instance.hpp"
#include "gadop/milp.hpp"
#include "gadop/plan.hpp"
#include "gadop/scenario.hpp"

namespace gadop {

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;  // bins are [lo + k w, lo + (k+1) w), the last one closed
  std::vector<std::size_t> counts;
};

struct SimulationOptions {
  unsigned threads = 1;
  std::size_t bins = 20;
  EvaluateOptions evaluate;
};

struct SimulationResult {
  std::size_t samples = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation of the realized payment
  Histogram histogram;
  CostBreakdown category_means;
  std::vector<std::size_t> takeoff_counts;    // draws per omega
  std::vector<std::size_t> breakdown_counts;  // draws per lambda
};

// Draws are split into kSimulationPartitions fixed partitions, partition k
// seeded with splitmix64(seed + k), so results do not depend on `threads`.
inline constexpr std::size_t kSimulationPartitions = 16;

std::uint64_t splitmix64(std::uint64_t x);

// Index drawn by inverse CDF over the probabilities with one unit_uniform draw.
std::size_t draw_index(const std::vector<double>& probabilities, std::mt19937_64& rng);

// Throws InfeasiblePlan for infeasible plans and std::invalid_argument for n == 0.
SimulationResult simulate(const FirstStagePlan& plan, const Instance& instance, const ScenarioSpace& scenarios,
                          std::size_t n, std::uint64_t seed, const SimulationOptions& options = {});

struct MethodRow {
  std::string method;
  milp::Status status = milp::Status::Infeasible;
  CostBreakdown exact;
  SimulationResult simulated;
  std::size_t drone_customers = 0;
  std::size_t rank = 0;  // 1 = cheapest exact expectation
};

struct CompareOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  milp::Limits limits;
};

// GADOP (decomposition), EVF and PDSTSP plans scored under the true scenario
// space. PDSTSP is skipped unless the instance has exactly one truck.
std::vector<MethodRow> compare_methods(const Instance& instance, const ScenarioSpace& scenarios,
                                       const CompareOptions& options = {});

void write_comparison_csv(std::ostream& os, const std::string& instance_name, const std::vector<MethodRow>& rows);

}  // namespace gadop
