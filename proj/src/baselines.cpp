#include "gadop/baselines.hpp"

#include <algorithm>

#include "gadop/errors.hpp"

namespace gadop {

EvfProbabilities derive_evf_probabilities(const Instance& inst, const ScenarioSpace& sc) {
  const std::size_t n = inst.num_customers();
  const std::size_t nd = inst.num_drones();
  EvfProbabilities p;
  p.ground_prob.assign(nd, 0.0);
  p.repair_prob.assign(nd, 0.0);
  p.break_prob.assign(n, 0.0);
  for (std::size_t d = 0; d < nd; ++d) {
    p.ground_prob[d] = sc.grounded_probability(d);
    for (const auto& l : sc.breakdown) {
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) any = any || l.breaks(i, d);
      if (any) p.repair_prob[d] += l.probability;
    }
  }
  if (nd > 0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& l : sc.breakdown)
        for (std::size_t d = 0; d < nd; ++d)
          if (l.breaks(i, d)) p.break_prob[i] += l.probability;
      p.break_prob[i] /= static_cast<double>(nd);
    }
  }
  return p;
}

BaselineModel build_evf(const Instance& inst, const EvfProbabilities& pr, const EvfOptions& opt) {
  require_valid(inst);
  const std::size_t n = inst.num_customers();
  const std::size_t nd = inst.num_drones();
  if (pr.ground_prob.size() != nd || pr.repair_prob.size() != nd || pr.break_prob.size() != n) {
    throw InvalidInstance("evf probabilities: dimensions do not match the instance");
  }
  BaselineModel m;
  FirstStageOptions fo;
  fo.orders = false;
  for (const auto& g : interchangeable_drones(inst, nullptr)) {
    std::vector<std::vector<std::size_t>> split;
    for (std::size_t d : g) {
      auto it = std::find_if(split.begin(), split.end(), [&](const auto& s) {
        return pr.ground_prob[s[0]] == pr.ground_prob[d] && pr.repair_prob[s[0]] == pr.repair_prob[d];
      });
      if (it == split.end()) split.push_back({d});
      else it->push_back(d);
    }
    for (auto& s : split)
      if (s.size() > 1) fo.drone_groups.push_back(std::move(s));
  }
  m.layout = add_first_stage(m.problem, inst, fo);
  const double p = inst.costs.penalty;
  const double rep = inst.costs.repair;
  for (std::size_t d = 0; d < nd; ++d) {
    const double g = pr.ground_prob[d];
    const double travel_w = opt.literal ? g : 1.0 - g;
    const double ground_w = opt.literal ? 1.0 - g : g;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = inst.drone_cost(i) * travel_w + p * ground_w + p * (1.0 - g) * pr.break_prob[i];
      m.problem.add_objective(m.layout.xhat(i, d), c);
    }
    if (opt.literal) {
      m.problem.objective_offset += rep * (1.0 - g) * pr.repair_prob[d];
    } else {
      m.problem.add_objective(m.layout.drone_used[d], rep * (1.0 - g) * pr.repair_prob[d]);
    }
  }
  return m;
}

BaselineModel build_pdstsp(const Instance& inst) {
  require_valid(inst);
  if (inst.num_trucks() != 1) {
    throw UnsupportedFleet("pdstsp needs exactly one truck, instance has " + std::to_string(inst.num_trucks()));
  }
  BaselineModel m;
  FirstStageOptions fo;
  fo.limits = false;
  fo.orders = false;
  fo.time_windows = false;
  fo.drone_groups = interchangeable_drones(inst, nullptr);
  m.layout = add_first_stage(m.problem, inst, fo);
  for (std::size_t i = 0; i < inst.num_customers(); ++i)
    for (std::size_t d = 0; d < inst.num_drones(); ++d) m.problem.add_objective(m.layout.xhat(i, d), inst.drone_cost(i));
  return m;
}

FirstStagePlan decode_baseline(const milp::Solution& sol, const BaselineModel& m, const Instance& inst) {
  if (!sol.has_solution()) throw SolverFailure("baseline model has no solution to decode");
  return plan_from_values(m.layout, inst, sol.values);
}

namespace {

BaselineResult finish(const BaselineModel& m, const milp::Solution& sol, const Instance& inst, const ScenarioSpace& sc,
                      const EvaluateOptions& eo) {
  BaselineResult r;
  r.status = sol.status;
  if (!sol.has_solution()) {
    r.plan = FirstStagePlan::empty(inst);
    return r;
  }
  r.model_objective = sol.objective;
  r.plan = decode_baseline(sol, m, inst);
  r.cost = evaluate_plan(r.plan, inst, sc, eo);
  return r;
}

}  // namespace

BaselineResult solve_evf(const Instance& inst, const ScenarioSpace& sc, const EvfOptions& opt,
                         const milp::Limits& limits, const milp::Engine& engine) {
  require_valid(sc, inst);
  const auto m = build_evf(inst, derive_evf_probabilities(inst, sc), opt);
  return finish(m, engine.solve(m.problem, limits), inst, sc, {});
}

BaselineResult solve_pdstsp(const Instance& inst, const ScenarioSpace& sc, const milp::Limits& limits,
                            const milp::Engine& engine) {
  require_valid(sc, inst);
  const auto m = build_pdstsp(inst);
  EvaluateOptions eo;
  eo.check_limits = false;
  eo.check_time_windows = false;
  return finish(m, engine.solve(m.problem, limits), inst, sc, eo);
}

}  // namespace gadop
