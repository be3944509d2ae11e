#include "gadop/scenario.hpp"

#include <cmath>
#include <string>

#include "gadop/errors.hpp"

namespace gadop {

double ScenarioSpace::flying_probability(std::size_t d) const {
  double p = 0.0;
  for (const auto& w : takeoff)
    if (!w.grounded[d]) p += w.probability;
  return p;
}

double ScenarioSpace::grounded_probability(std::size_t d) const {
  double p = 0.0;
  for (const auto& w : takeoff)
    if (w.grounded[d]) p += w.probability;
  return p;
}

std::vector<Violation> validate(const ScenarioSpace& space, const Instance& inst) {
  std::vector<Violation> out;
  const auto idx = [](const char* base, std::size_t k) { return std::string(base) + "[" + std::to_string(k) + "]"; };
  if (space.takeoff.empty()) out.push_back({"scenarios.takeoff", "must be nonempty"});
  if (space.breakdown.empty()) out.push_back({"scenarios.breakdown", "must be nonempty"});

  double total = 0.0;
  for (std::size_t w = 0; w < space.takeoff.size(); ++w) {
    const auto& s = space.takeoff[w];
    if (s.grounded.size() != inst.num_drones()) out.push_back({idx("scenarios.takeoff", w), "length must be d'"});
    if (!(s.probability >= 0.0 && s.probability <= 1.0)) {
      out.push_back({idx("scenarios.takeoff", w), "probability outside [0,1]"});
    }
    total += s.probability;
  }
  if (!space.takeoff.empty() && std::abs(total - 1.0) > 1e-9) {
    out.push_back({"scenarios.takeoff", "probabilities must sum to 1"});
  }

  total = 0.0;
  for (std::size_t l = 0; l < space.breakdown.size(); ++l) {
    const auto& s = space.breakdown[l];
    if (s.breaks.rows() != inst.num_customers() || s.breaks.cols() != inst.num_drones()) {
      out.push_back({idx("scenarios.breakdown", l), "matrix must be c' x d'"});
    }
    if (!(s.probability >= 0.0 && s.probability <= 1.0)) {
      out.push_back({idx("scenarios.breakdown", l), "probability outside [0,1]"});
    }
    total += s.probability;
  }
  if (!space.breakdown.empty() && std::abs(total - 1.0) > 1e-9) {
    out.push_back({"scenarios.breakdown", "probabilities must sum to 1"});
  }
  return out;
}

void require_valid(const ScenarioSpace& space, const Instance& instance) {
  const auto v = validate(space, instance);
  if (!v.empty()) throw InvalidInstance(v.front().field + ": " + v.front().rule);
}

std::vector<TakeoffScenario> enumerate_takeoff(std::size_t num_drones, double prob) {
  if (num_drones > kMaxEnumeratedDrones) {
    throw OverflowRejected("takeoff enumeration limited to " + std::to_string(kMaxEnumeratedDrones) + " drones");
  }
  if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidInstance("grounding probability outside [0,1]");
  const std::size_t count = std::size_t{1} << num_drones;
  std::vector<TakeoffScenario> out;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    TakeoffScenario s;
    s.grounded.resize(num_drones);
    double p = 1.0;
    for (std::size_t d = 0; d < num_drones; ++d) {
      const bool g = (mask >> d) & 1U;
      s.grounded[d] = g;
      p *= g ? prob : 1.0 - prob;
    }
    s.probability = p;
    out.push_back(std::move(s));
  }
  return out;
}

ScenarioSpace two_point_spaces(double p_ground, double p_break, double fraction, const Instance& inst) {
  for (double v : {p_ground, p_break, fraction}) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInstance("two-point parameters must lie in [0,1]");
  }
  const std::size_t n = inst.num_customers();
  const std::size_t m = inst.num_drones();
  ScenarioSpace space;
  space.takeoff.push_back({std::vector<bool>(m, false), 1.0 - p_ground});
  if (p_ground > 0.0) space.takeoff.push_back({std::vector<bool>(m, true), p_ground});

  space.breakdown.push_back({BoolGrid(n, m), 1.0 - p_break});
  if (p_break > 0.0) {
    BreakdownScenario b{BoolGrid(n, m), p_break};
    const auto broken = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-12));
    for (std::size_t i = 0; i < std::min(broken, n); ++i)
      for (std::size_t d = 0; d < m; ++d) b.breaks.set(i, d, true);
    space.breakdown.push_back(std::move(b));
  }
  return space;
}

ScenarioSpace deterministic_space(const Instance& inst) { return two_point_spaces(0.0, 0.0, 0.0, inst); }

BreakdownScenario sample_independent_breakdown(std::size_t customers, std::size_t drones, double prob,
                                               std::mt19937_64& rng) {
  BreakdownScenario s{BoolGrid(customers, drones), 1.0};
  for (std::size_t i = 0; i < customers; ++i)
    for (std::size_t d = 0; d < drones; ++d) s.breaks.set(i, d, unit_uniform(rng) < prob);
  return s;
}

}  // namespace gadop
