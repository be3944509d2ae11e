#include "gadop/generate.hpp"

#include <random>
#include <vector>

namespace gadop {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

std::vector<double> random_probabilities(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = uniform(rng, 0.05, 1.0);
    sum += x;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    p[k] /= sum;
    acc += p[k];
  }
  p[n - 1] = 1.0 - acc;
  return p;
}

}  // namespace

Instance random_instance(std::uint64_t seed, const GeneratorOptions& opt) {
  std::mt19937_64 rng(seed);
  Instance inst;
  inst.name = "random-" + std::to_string(seed);
  inst.coordinates.push_back({0.0, 0.0});
  const double half = opt.area_km / 2.0;
  for (std::size_t i = 0; i < opt.customers; ++i) {
    Customer c;
    c.id = static_cast<int>(i + 1);
    c.package_weight_kg = uniform(rng, 0.5, 2.6);
    if (opt.time_windows) {
      const double r = unit_uniform(rng);
      c.window_class = r < 0.3 ? WindowClass::Morning : r < 0.6 ? WindowClass::Afternoon : WindowClass::None;
    }
    inst.customers.push_back(c);
    inst.coordinates.push_back({uniform(rng, -half, half), uniform(rng, -half, half)});
  }
  inst.distances_km = euclidean_distances(inst.coordinates);
  double penalty = 20.0;
  double repair = 50.0;
  if (opt.randomize_costs) {
    penalty = uniform(rng, 2.0, 60.0);
    repair = uniform(rng, 5.0, 80.0);
  }
  inst.costs = default_cost_model(inst.distances_km, penalty, repair);
  for (std::size_t t = 0; t < opt.trucks; ++t) {
    TruckSpec tr;
    tr.id = static_cast<int>(t + 1);
    if (opt.randomize_costs) tr.initial_cost = uniform(rng, 40.0, 300.0);
    inst.trucks.push_back(tr);
  }
  for (std::size_t d = 0; d < opt.drones; ++d) {
    DroneSpec dr;
    dr.id = static_cast<int>(d + 1);
    if (opt.randomize_costs) dr.initial_cost = uniform(rng, 10.0, 120.0);
    if (opt.time_windows) dr.speed_kmh = 40.0;
    inst.drones.push_back(dr);
  }
  if (opt.time_windows) {
    inst.morning_limit_h = 4.0;
    inst.afternoon_limit_h = 4.0;
  }
  return inst;
}

ScenarioSpace random_scenarios(const Instance& inst, std::uint64_t seed, const ScenarioOptions& opt) {
  std::mt19937_64 rng(seed ^ 0x5ce7a41ULL);
  const std::size_t n = inst.num_customers();
  const std::size_t nd = inst.num_drones();
  ScenarioSpace sc;
  const auto pw = random_probabilities(rng, opt.takeoff);
  for (std::size_t w = 0; w < opt.takeoff; ++w) {
    TakeoffScenario s;
    s.grounded.assign(nd, false);
    if (w > 0)
      for (std::size_t d = 0; d < nd; ++d) s.grounded[d] = unit_uniform(rng) < opt.ground_prob;
    s.probability = pw[w];
    sc.takeoff.push_back(s);
  }
  const auto pl = random_probabilities(rng, opt.breakdown);
  for (std::size_t l = 0; l < opt.breakdown; ++l) {
    BreakdownScenario s;
    s.breaks = BoolGrid(n, nd);
    if (l > 0)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < nd; ++d) s.breaks.set(i, d, unit_uniform(rng) < opt.break_prob);
    s.probability = pl[l];
    sc.breakdown.push_back(s);
  }
  return sc;
}

}  // namespace gadop
