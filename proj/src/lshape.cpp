#include "gadop/lshape.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <utility>

#include "gadop/errors.hpp"
#include "gadop/parallel.hpp"

namespace gadop {

using milp::Sense;
using milp::Term;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Morning customers first, then unconstrained, then afternoon.
int window_rank(const Instance& inst, std::size_t i) {
  const auto c = inst.customers[i].window_class;
  return c == WindowClass::Morning ? 0 : c == WindowClass::None ? 1 : 2;
}

std::vector<std::size_t> served_by(const BoolGrid& assign, std::size_t d) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assign.rows(); ++i)
    if (assign(i, d)) out.push_back(i);
  return out;
}

struct DroneOrder {
  std::vector<std::size_t> sequence;  // customers in serving order
  double cost = 0.0;
  std::size_t nodes = 0;
};

// Best shared serving order for one flying drone over `served`.
DroneOrder solve_drone_order(const Instance& inst, std::size_t d, const std::vector<std::size_t>& served,
                             const std::vector<BreakdownScenario>& breakdown, const milp::Engine& engine,
                             const milp::Limits& limits) {
  DroneOrder out;
  out.sequence = served;
  std::stable_sort(out.sequence.begin(), out.sequence.end(),
                   [&](std::size_t a, std::size_t b) { return window_rank(inst, a) < window_rank(inst, b); });
  const std::size_t k = served.size();
  bool any_break = false;
  for (const auto& l : breakdown)
    for (std::size_t i : served) any_break = any_break || l.breaks(i, d);
  if (k == 0 || !any_break) return out;

  milp::Problem p;
  const double delta = big_m(inst);
  const double kk = static_cast<double>(k);
  std::vector<int> u(k);
  for (std::size_t a = 0; a < k; ++a) u[a] = p.add_variable(1.0, kk, true, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const int m = p.add_binary(0.0);
      p.add_constraint({{u[a], 1.0}, {u[b], -1.0}, {m, -delta}}, Sense::LessEqual, -1.0);
      p.add_constraint({{u[a], 1.0}, {u[b], -1.0}, {m, -delta}}, Sense::GreaterEqual, 1.0 - delta);
      if (window_rank(inst, served[a]) == 0 && window_rank(inst, served[b]) == 2) {
        p.add_constraint({{u[a], 1.0}, {u[b], -1.0}}, Sense::LessEqual, 0.0);
      }
    }
  std::vector<std::size_t> local(k);
  for (std::size_t a = 0; a < k; ++a) local[a] = a;
  for (const auto& l : breakdown) {
    std::vector<Activation> act(k);
    bool hit = false;
    for (std::size_t a = 0; a < k; ++a) {
      act[a].value = l.breaks(served[a], d) ? 1.0 : 0.0;
      hit = hit || act[a].value > 0.5;
    }
    if (!hit) continue;
    add_suffix_block(p, u, local, act, delta, l.probability * inst.costs.penalty, l.probability * inst.costs.repair);
  }
  const auto sol = engine.solve(p, limits);
  if (!sol.has_solution()) throw SolverFailure("third-stage sub-problem has no solution");
  out.cost = sol.objective;
  out.nodes = sol.nodes_explored;
  std::vector<std::pair<long, std::size_t>> ranked;
  for (std::size_t a = 0; a < k; ++a) ranked.emplace_back(std::lround(sol.values[static_cast<std::size_t>(u[a])]), served[a]);
  std::sort(ranked.begin(), ranked.end());
  out.sequence.clear();
  for (const auto& r : ranked) out.sequence.push_back(r.second);
  return out;
}

}  // namespace

FeedbackParameters compute_feedback(const Instance& inst, const ScenarioSpace& sc) {
  const std::size_t n = inst.num_customers();
  const std::size_t nd = inst.num_drones();
  const double pen = inst.costs.penalty;
  const double rep = inst.costs.repair;
  FeedbackParameters f;
  f.penalty = Matrix(n, nd);
  f.travel = Matrix(n, nd);
  f.repair = Matrix(n, nd);
  for (const auto& w : sc.takeoff) {
    Matrix ep(n, nd);
    Matrix em(n, nd);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < nd; ++d) {
        const double fly = w.grounded[d] ? 0.0 : 1.0;
        double sum = 0.0;
        for (const auto& l : sc.breakdown) sum += l.probability * fly * (l.breaks(i, d) ? 1.0 : 0.0);
        ep(i, d) = pen * sum;
        em(i, d) = rep * sum;
      }
    f.penalty_aux.push_back(std::move(ep));
    f.repair_aux.push_back(std::move(em));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < nd; ++d) {
      double travel = 0.0;
      double penalty = 0.0;
      double repair = 0.0;
      for (std::size_t w = 0; w < sc.takeoff.size(); ++w) {
        const auto& om = sc.takeoff[w];
        const double grounded = om.grounded[d] ? 1.0 : 0.0;
        travel += om.probability * (1.0 - grounded);
        penalty += om.probability * (pen * grounded + f.penalty_aux[w](i, d));
        repair += om.probability * f.repair_aux[w](i, d);
      }
      f.travel(i, d) = -inst.drone_cost(i) * travel;
      f.penalty(i, d) = -penalty;
      f.repair(i, d) = -repair;
    }
  f.repair_max.assign(nd, 0.0);
  for (std::size_t d = 0; d < nd; ++d) {
    if (n == 0) continue;
    double best = f.repair(0, d);
    for (std::size_t i = 1; i < n; ++i) best = std::max(best, f.repair(i, d));
    f.repair_max[d] = best;
  }
  return f;
}

SecondStageResult solve_second_stage(const Instance& inst, const BoolGrid& assign, const TakeoffScenario& w) {
  SecondStageResult r;
  r.takeoff_penalties = BoolGrid(assign.rows(), assign.cols());
  for (std::size_t i = 0; i < assign.rows(); ++i)
    for (std::size_t d = 0; d < assign.cols(); ++d) {
      if (!assign(i, d)) continue;
      if (w.grounded[d]) {
        r.takeoff_penalties.set(i, d, true);
        r.cost += inst.costs.penalty;
      } else {
        r.cost += inst.drone_cost(i);
      }
    }
  return r;
}

ThirdStageResult solve_third_stage(const Instance& inst, const BoolGrid& assign, const TakeoffScenario& w,
                                   const std::vector<BreakdownScenario>& breakdown, const milp::Engine& engine,
                                   const milp::Limits& limits) {
  ThirdStageResult r;
  const std::size_t nd = assign.cols();
  r.drone_order.assign(assign.rows(), std::vector<int>(nd, 0));
  for (std::size_t d = 0; d < nd; ++d) {
    const auto served = served_by(assign, d);
    if (served.empty()) continue;
    DroneOrder o;
    if (w.grounded[d]) {
      o.sequence = served;
      std::stable_sort(o.sequence.begin(), o.sequence.end(),
                       [&](std::size_t a, std::size_t b) { return window_rank(inst, a) < window_rank(inst, b); });
    } else {
      o = solve_drone_order(inst, d, served, breakdown, engine, limits);
    }
    int label = 1;
    for (std::size_t i : o.sequence) r.drone_order[i][d] = label++;
    r.cost += o.cost;
    r.nodes += o.nodes;
  }
  return r;
}

namespace {

struct Master {
  milp::Problem problem;
  FirstStageLayout layout;
  int theta1 = -1;
  int theta2 = -1;
};

// Breakdown sets of drone d that are nonempty, as customer masks.
std::vector<std::vector<bool>> break_sets(const ScenarioSpace& sc, std::size_t n, std::size_t d) {
  std::vector<std::vector<bool>> sets;
  for (const auto& l : sc.breakdown) {
    std::vector<bool> b(n, false);
    bool hit = false;
    for (std::size_t i = 0; i < n; ++i) hit = (b[i] = l.breaks(i, d)) || hit;
    if (hit) sets.push_back(std::move(b));
  }
  return sets;
}

// True when the sets form a chain under inclusion. Serving the customers of
// larger sets before those of smaller ones is then optimal for every lambda
// at once and only the customers broken in lambda itself are stranded.
bool nested(const std::vector<std::vector<bool>>& sets) {
  const auto subset = [](const std::vector<bool>& a, const std::vector<bool>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && !b[i]) return false;
    return true;
  };
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = a + 1; b < sets.size(); ++b)
      if (!subset(sets[a], sets[b]) && !subset(sets[b], sets[a])) return false;
  return true;
}

Master build_master(const Instance& inst, const ScenarioSpace& sc, const FeedbackParameters* fb, CutMode mode) {
  Master m;
  const std::size_t n = inst.num_customers();
  const std::size_t nd = inst.num_drones();
  // Drones whose recourse needs the serving-order block in the exact bound.
  std::vector<bool> ordered(nd, false);
  bool any_order = false;
  if (fb != nullptr && mode == CutMode::Exact) {
    for (std::size_t d = 0; d < nd; ++d) {
      if (sc.flying_probability(d) <= 0.0) continue;
      // Window classes constrain the order, so the closed form only holds without them.
      const auto sets = break_sets(sc, n, d);
      ordered[d] = !sets.empty() && (inst.has_time_windows() || !nested(sets));
      any_order = any_order || ordered[d];
    }
  }
  FirstStageOptions fo;
  fo.orders = any_order;
  fo.drone_groups = interchangeable_drones(inst, &sc);
  m.layout = add_first_stage(m.problem, inst, fo);
  if (fb == nullptr) return m;
  auto& p = m.problem;
  const auto& L = m.layout;
  m.theta1 = p.add_continuous(0.0, milp::kInf, 1.0, "theta1");
  m.theta2 = p.add_continuous(0.0, milp::kInf, 1.0, "theta2");

  std::vector<Term> cut1{{m.theta1, 1.0}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < nd; ++d) cut1.push_back({L.xhat(i, d), fb->penalty(i, d) + fb->travel(i, d)});
  p.add_constraint(cut1, Sense::GreaterEqual, 0.0, "feedback_theta1");

  if (mode == CutMode::Aggregate) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Term> cut2{{m.theta2, 1.0}};
      for (std::size_t d = 0; d < nd; ++d) cut2.push_back({L.drone_used[d], fb->repair(i, d)});
      p.add_constraint(cut2, Sense::GreaterEqual, 0.0, "feedback_theta2(" + std::to_string(i + 1) + ")");
    }
    return m;
  }

  // Exact recourse bound: stranded customers beyond the broken ones plus one
  // repair per (drone, lambda), weighted by the flying probability.
  const double delta = big_m(inst);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<Term> cut2{{m.theta2, 1.0}};
  for (std::size_t d = 0; d < nd; ++d) {
    const double fly = sc.flying_probability(d);
    if (fly <= 0.0) continue;
    for (const auto& l : sc.breakdown) {
      std::vector<Activation> act(n);
      bool hit = false;
      for (std::size_t i = 0; i < n; ++i)
        if (l.breaks(i, d)) {
          act[i].var = L.xhat(i, d);
          hit = true;
        }
      if (!hit) continue;
      const double w = fly * l.probability;
      if (!ordered[d]) {
        // No extra stranding: only the repair, paid when a broken customer is served.
        const int r = p.add_continuous(0.0, 1.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
          if (l.breaks(i, d)) p.add_constraint({{r, 1.0}, {L.xhat(i, d), -1.0}}, Sense::GreaterEqual, 0.0);
        cut2.push_back({r, -w * inst.costs.repair});
        continue;
      }
      std::vector<int> orders(n);
      for (std::size_t i = 0; i < n; ++i) orders[i] = L.u(i, d);
      const auto block = add_suffix_block(p, orders, all, act, delta, 0.0, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        cut2.push_back({block.penalty[i], -w * inst.costs.penalty});
        if (l.breaks(i, d)) cut2.push_back({L.xhat(i, d), w * inst.costs.penalty});
      }
      cut2.push_back({block.repair, -w * inst.costs.repair});
    }
  }
  p.add_constraint(cut2, Sense::GreaterEqual, 0.0, "feedback_theta2");
  return m;
}

}  // namespace

LShapeReport run_lshape(const Instance& inst, const ScenarioSpace& sc, const LShapeOptions& opt) {
  const auto t_start = Clock::now();
  require_valid(inst);
  require_valid(sc, inst);
  const milp::Engine& engine = opt.engine ? *opt.engine : milp::default_engine();
  const std::size_t n = inst.num_customers();
  const std::size_t nd = inst.num_drones();
  const std::size_t nw = sc.takeoff.size();

  LShapeReport report;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, DroneOrder> cache;
  const FeedbackParameters* cuts = nullptr;
  FeedbackParameters last_feedback;

  for (std::size_t k = 0;; ++k) {
    if (k >= opt.max_iterations) throw NonConvergence("decomposition did not converge within iteration cap");
    IterationTrace tr;
    tr.k = k;

    auto t0 = Clock::now();
    Master master = build_master(inst, sc, cuts, opt.cut_mode);
    const auto sol = engine.solve(master.problem, opt.limits);
    ++report.master_solves;
    tr.master_time_s = since(t0);
    tr.master_nodes = sol.nodes_explored;
    if (!sol.has_solution()) {
      report.status = sol.status;
      report.iterations.push_back(tr);
      report.wall_time_s = since(t_start);
      return report;
    }
    if (sol.status == milp::Status::GapLimit) report.status = milp::Status::GapLimit;
    tr.master_objective = sol.objective;
    FirstStagePlan plan = plan_from_values(master.layout, inst, sol.values);
    if (master.theta1 >= 0) {
      tr.has_theta = true;
      tr.theta1 = sol.values[static_cast<std::size_t>(master.theta1)];
      tr.theta2 = sol.values[static_cast<std::size_t>(master.theta2)];
    }

    // Second and third stage for every takeoff scenario.
    t0 = Clock::now();
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> wanted;
    for (std::size_t d = 0; d < nd; ++d) {
      const auto served = served_by(plan.drone_assign, d);
      if (served.empty() || sc.flying_probability(d) <= 0.0) continue;
      bool flies = false;
      for (const auto& w : sc.takeoff) flies = flies || !w.grounded[d];
      if (!flies) continue;
      auto key = std::make_pair(d, served);
      if (cache.count(key)) {
        ++report.cache_hits;
      } else {
        wanted.push_back(std::move(key));
      }
    }
    std::vector<DroneOrder> fresh(wanted.size());
    parallel_for(wanted.size(), opt.threads, [&](std::size_t q) {
      fresh[q] = solve_drone_order(inst, wanted[q].first, wanted[q].second, sc.breakdown, engine, opt.limits);
    });
    report.subproblems_solved += wanted.size();
    for (std::size_t q = 0; q < wanted.size(); ++q) cache.emplace(wanted[q], std::move(fresh[q]));

    tr.second_stage_costs.assign(nw, 0.0);
    tr.third_stage_costs.assign(nw, 0.0);
    std::vector<bool> ordered(nd, false);
    parallel_for(nw, opt.threads, [&](std::size_t w) {
      tr.second_stage_costs[w] = solve_second_stage(inst, plan.drone_assign, sc.takeoff[w]).cost;
      double third = 0.0;
      for (std::size_t d = 0; d < nd; ++d) {
        if (sc.takeoff[w].grounded[d]) continue;
        const auto served = served_by(plan.drone_assign, d);
        if (served.empty()) continue;
        const auto it = cache.find({d, served});
        if (it != cache.end()) third += it->second.cost;
      }
      tr.third_stage_costs[w] = third;
    });
    for (std::size_t d = 0; d < nd; ++d) {
      const auto served = served_by(plan.drone_assign, d);
      const auto it = cache.find({d, served});
      if (served.empty() || it == cache.end()) continue;
      int label = 1;
      for (std::size_t i : it->second.sequence) plan.drone_order[i][d] = label++;
      ordered[d] = true;
    }
    for (std::size_t d = 0; d < nd; ++d) {
      if (ordered[d] || !master.layout.drone_order.empty()) continue;
      auto seq = served_by(plan.drone_assign, d);
      std::stable_sort(seq.begin(), seq.end(),
                       [&](std::size_t a, std::size_t b) { return window_rank(inst, a) < window_rank(inst, b); });
      int label = 1;
      for (std::size_t i : seq) plan.drone_order[i][d] = label++;
    }
    tr.subproblem_time_s = since(t0);

    // Feedback and convergence.
    last_feedback = compute_feedback(inst, sc);
    report.feedback.push_back(last_feedback);
    double b = 0.0;
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t i = 0; i < n; ++i)
        if (plan.drone_assign(i, d)) b += last_feedback.penalty(i, d) + last_feedback.travel(i, d);
      if (plan.drone_used[d]) b += last_feedback.repair_max[d];
    }
    tr.convergence_b = b;
    tr.converged = tr.has_theta && tr.theta1 + tr.theta2 >= b - 1e-9;
    report.iterations.push_back(tr);
    cuts = &report.feedback.back();

    if (tr.converged) {
      report.plan = std::move(plan);
      report.cost = evaluate_plan(report.plan, inst, sc);
      report.wall_time_s = since(t_start);
      return report;
    }
  }
}

}  // namespace gadop
