#include "gadop/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gadop/errors.hpp"

namespace gadop {

using milp::Sense;
using milp::Term;

namespace {

std::string idx(const char* base, std::initializer_list<std::size_t> ks) {
  std::string s = base;
  s += '(';
  bool first = true;
  for (auto k : ks) {
    if (!first) s += ',';
    s += std::to_string(k);
    first = false;
  }
  s += ')';
  return s;
}

double truck_arc_time(const Instance& inst, std::size_t t, std::size_t a, std::size_t b) {
  const auto& tr = inst.trucks[t];
  return inst.distances_km(a, b) / tr.speed_kmh.at(a, b) + tr.dropoff_time_h;
}

bool same_speed(const Speed& a, const Speed& b) {
  if (a.per_arc.has_value() != b.per_arc.has_value()) return false;
  return a.per_arc ? *a.per_arc == *b.per_arc : a.scalar == b.scalar;
}

bool same_truck(const TruckSpec& a, const TruckSpec& b) {
  return a.initial_cost == b.initial_cost && a.capacity_kg == b.capacity_kg &&
         a.daily_distance_km == b.daily_distance_km && a.daily_time_h == b.daily_time_h &&
         a.dropoff_time_h == b.dropoff_time_h && same_speed(a.speed_kmh, b.speed_kmh);
}

bool same_drone(const DroneSpec& a, const DroneSpec& b) {
  return a.initial_cost == b.initial_cost && a.capacity_kg == b.capacity_kg &&
         a.daily_distance_km == b.daily_distance_km && a.trip_distance_km == b.trip_distance_km &&
         a.speed_kmh == b.speed_kmh;
}

template <typename Same>
std::vector<std::vector<std::size_t>> group_by(std::size_t count, Same same) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> taken(count, false);
  for (std::size_t a = 0; a < count; ++a) {
    if (taken[a]) continue;
    std::vector<std::size_t> g{a};
    for (std::size_t b = a + 1; b < count; ++b)
      if (!taken[b] && same(a, b)) {
        taken[b] = true;
        g.push_back(b);
      }
    if (g.size() > 1) groups.push_back(std::move(g));
  }
  return groups;
}

// Customer i on member k needs a customer j < i on member k - 1, and member
// k is used only if member k - 1 is.
void add_ordering_rule(milp::Problem& p, std::size_t n, const std::vector<std::size_t>& g,
                       const std::function<int(std::size_t, std::size_t)>& assign, const std::vector<int>& used,
                       const std::string& tag) {
  for (std::size_t k = 1; k < g.size(); ++k) {
    p.add_constraint({{used[g[k]], 1.0}, {used[g[k - 1]], -1.0}}, Sense::LessEqual, 0.0, idx((tag + "_used").c_str(), {g[k]}));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Term> row{{assign(i, g[k]), 1.0}};
      for (std::size_t j = 0; j < i; ++j) row.push_back({assign(j, g[k - 1]), -1.0});
      p.add_constraint(row, Sense::LessEqual, 0.0, idx(tag.c_str(), {i + 1, g[k]}));
    }
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> interchangeable_drones(const Instance& inst, const ScenarioSpace* sc) {
  return group_by(inst.num_drones(), [&](std::size_t a, std::size_t b) {
    if (!same_drone(inst.drones[a], inst.drones[b])) return false;
    if (sc == nullptr) return true;
    for (const auto& w : sc->takeoff)
      if (w.grounded[a] != w.grounded[b]) return false;
    for (const auto& l : sc->breakdown)
      for (std::size_t i = 0; i < l.breaks.rows(); ++i)
        if (l.breaks(i, a) != l.breaks(i, b)) return false;
    return true;
  });
}

FirstStageLayout add_first_stage(milp::Problem& p, const Instance& inst, const FirstStageOptions& opt) {
  const std::size_t n = inst.num_customers();
  const std::size_t nt = inst.num_trucks();
  const std::size_t nd = inst.num_drones();
  const std::size_t locs = n + 1;
  const double delta = big_m(inst);
  const double cn = static_cast<double>(n);
  FirstStageLayout L;
  L.customers = n;
  L.trucks = nt;
  L.drones = nd;

  for (std::size_t t = 0; t < nt; ++t) L.truck_used.push_back(p.add_binary(inst.trucks[t].initial_cost, idx("Wbar", {t})));
  for (std::size_t d = 0; d < nd; ++d) L.drone_used.push_back(p.add_binary(inst.drones[d].initial_cost, idx("What", {d})));
  L.arcs.assign(nt * locs * locs, -1);
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t a = 0; a < locs; ++a)
      for (std::size_t b = 0; b < locs; ++b) {
        // V_{a,a,t} = 0 is encoded as a fixed column.
        const double ub = a == b ? 0.0 : 1.0;
        L.arcs[(t * locs + a) * locs + b] =
            p.add_variable(0.0, ub, true, a == b ? 0.0 : inst.costs.truck_arc_cost(a, b), idx("V", {a, b, t}));
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < nt; ++t) L.truck_assign.push_back(p.add_binary(0.0, idx("Xbar", {i + 1, t})));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < nd; ++d) L.drone_assign.push_back(p.add_binary(0.0, idx("Xhat", {i + 1, d})));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < nt; ++t) L.truck_order.push_back(p.add_continuous(0.0, cn, 0.0, idx("S", {i + 1, t})));
  if (opt.orders) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < nd; ++d) L.drone_order.push_back(p.add_continuous(0.0, cn, 0.0, idx("U", {i + 1, d})));
    L.disambig.assign(n * n * nd, -1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          for (std::size_t d = 0; d < nd; ++d) L.disambig[(i * n + j) * nd + d] = p.add_binary(0.0, idx("M", {i + 1, j + 1, d}));
  }

  // Initial-cost linking.
  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<Term> row;
    for (std::size_t i = 0; i < n; ++i) row.push_back({L.xbar(i, t), 1.0});
    row.push_back({L.truck_used[t], -delta});
    p.add_constraint(row, Sense::LessEqual, 0.0, idx("link_truck", {t}));
  }
  for (std::size_t d = 0; d < nd; ++d) {
    std::vector<Term> row;
    for (std::size_t i = 0; i < n; ++i) row.push_back({L.xhat(i, d), 1.0});
    row.push_back({L.drone_used[d], -delta});
    p.add_constraint(row, Sense::LessEqual, 0.0, idx("link_drone", {d}));
  }

  // Capacities and distance limits.
  for (std::size_t t = 0; t < nt && opt.limits; ++t) {
    std::vector<Term> row;
    for (std::size_t i = 0; i < n; ++i) row.push_back({L.xbar(i, t), inst.customers[i].package_weight_kg});
    p.add_constraint(row, Sense::LessEqual, inst.trucks[t].capacity_kg, idx("truck_capacity", {t}));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < nd; ++d) {
      p.add_constraint({{L.xhat(i, d), inst.customers[i].package_weight_kg}}, Sense::LessEqual,
                       inst.drones[d].capacity_kg, idx("drone_capacity", {i + 1, d}));
      p.add_constraint({{L.xhat(i, d), inst.roundtrip_km(i)}}, Sense::LessEqual, inst.drones[d].trip_distance_km,
                       idx("drone_trip", {i + 1, d}));
    }
  for (std::size_t d = 0; d < nd && opt.limits; ++d) {
    std::vector<Term> row;
    for (std::size_t i = 0; i < n; ++i) row.push_back({L.xhat(i, d), inst.roundtrip_km(i)});
    p.add_constraint(row, Sense::LessEqual, inst.drones[d].daily_distance_km, idx("drone_daily", {d}));
  }
  for (std::size_t t = 0; t < nt && opt.limits; ++t) {
    std::vector<Term> dist;
    std::vector<Term> time;
    for (std::size_t a = 0; a < locs; ++a)
      for (std::size_t b = 0; b < locs; ++b) {
        if (a == b) continue;
        dist.push_back({L.arc(t, a, b), inst.distances_km(a, b)});
        time.push_back({L.arc(t, a, b), truck_arc_time(inst, t, a, b)});
      }
    p.add_constraint(dist, Sense::LessEqual, inst.trucks[t].daily_distance_km, idx("truck_daily", {t}));
    p.add_constraint(time, Sense::LessEqual, inst.trucks[t].daily_time_h, idx("truck_time", {t}));
  }

  // Every customer served exactly once.
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> row;
    for (std::size_t t = 0; t < nt; ++t) row.push_back({L.xbar(i, t), 1.0});
    for (std::size_t d = 0; d < nd; ++d) row.push_back({L.xhat(i, d), 1.0});
    p.add_constraint(row, Sense::Equal, 1.0, idx("allocation", {i + 1}));
  }

  // Truck routing and MTZ subtour elimination.
  for (std::size_t t = 0; t < nt; ++t) {
    std::vector<Term> out;
    std::vector<Term> in;
    for (std::size_t i = 1; i < locs; ++i) {
      out.push_back({L.arc(t, 0, i), 1.0});
      in.push_back({L.arc(t, i, 0), 1.0});
    }
    p.add_constraint(out, Sense::LessEqual, 1.0, idx("depot_out", {t}));
    p.add_constraint(in, Sense::LessEqual, 1.0, idx("depot_in", {t}));
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Term> enter;
      std::vector<Term> leave;
      for (std::size_t a = 0; a < locs; ++a) {
        if (a == i + 1) continue;
        enter.push_back({L.arc(t, a, i + 1), 1.0});
        leave.push_back({L.arc(t, i + 1, a), 1.0});
      }
      enter.push_back({L.xbar(i, t), -1.0});
      leave.push_back({L.xbar(i, t), -1.0});
      p.add_constraint(enter, Sense::Equal, 0.0, idx("route_in", {i + 1, t}));
      p.add_constraint(leave, Sense::Equal, 0.0, idx("route_out", {i + 1, t}));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        p.add_constraint({{L.s(i, t), 1.0}, {L.s(j, t), -1.0}, {L.arc(t, i + 1, j + 1), cn}}, Sense::LessEqual, cn - 1.0,
                         idx("mtz", {i + 1, j + 1, t}));
      }
  }

  if (opt.orders) {
    for (std::size_t d = 0; d < nd; ++d) {
      for (std::size_t i = 0; i < n; ++i) {
        p.add_constraint({{L.xhat(i, d), 1.0}, {L.u(i, d), -1.0}}, Sense::LessEqual, 0.0, idx("order_min", {i + 1, d}));
        std::vector<Term> cap{{L.u(i, d), 1.0}};
        for (std::size_t k = 0; k < n; ++k) cap.push_back({L.xhat(k, d), -1.0});
        p.add_constraint(cap, Sense::LessEqual, 0.0, idx("order_max", {i + 1, d}));
        // Orders of customers the drone does not serve are pinned to 0.
        p.add_constraint({{L.u(i, d), 1.0}, {L.xhat(i, d), -cn}}, Sense::LessEqual, 0.0, idx("order_pin", {i + 1, d}));
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          const int m = L.m(i, j, d);
          p.add_constraint({{L.u(i, d), 1.0}, {L.u(j, d), -1.0}, {m, -delta}, {L.xhat(i, d), 1.0}}, Sense::LessEqual, 0.0,
                           idx("order_gap_hi", {i + 1, j + 1, d}));
          p.add_constraint({{L.u(i, d), 1.0}, {L.u(j, d), -1.0}, {L.xhat(i, d), -1.0}, {m, -delta}}, Sense::GreaterEqual,
                           -delta, idx("order_gap_lo", {i + 1, j + 1, d}));
        }
    }
  }

  if (opt.time_windows && inst.has_time_windows()) {
    std::vector<std::size_t> morning;
    std::vector<std::size_t> afternoon;
    for (std::size_t i = 0; i < n; ++i) {
      if (inst.customers[i].window_class == WindowClass::Morning) morning.push_back(i);
      if (inst.customers[i].window_class == WindowClass::Afternoon) afternoon.push_back(i);
    }
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t i : morning)
        for (std::size_t j : afternoon)
          p.add_constraint({{L.s(i, t), 1.0}, {L.s(j, t), -1.0}, {L.xbar(i, t), delta}}, Sense::LessEqual, delta,
                           idx("tw_truck_order", {i + 1, j + 1, t}));
      std::vector<Term> am;
      std::vector<Term> pm;
      for (std::size_t a = 0; a < locs; ++a)
        for (std::size_t m : morning)
          if (a != m + 1) am.push_back({L.arc(t, a, m + 1), truck_arc_time(inst, t, a, m + 1)});
      for (std::size_t i = 0; i < n; ++i) {
        pm.push_back({L.arc(t, i + 1, 0), truck_arc_time(inst, t, i + 1, 0)});
        for (std::size_t a : afternoon)
          if (a != i) pm.push_back({L.arc(t, i + 1, a + 1), truck_arc_time(inst, t, i + 1, a + 1)});
      }
      p.add_constraint(am, Sense::LessEqual, inst.morning_limit_h, idx("tw_truck_morning", {t}));
      p.add_constraint(pm, Sense::LessEqual, inst.afternoon_limit_h, idx("tw_truck_afternoon", {t}));
    }
    for (std::size_t d = 0; d < nd && opt.drone_time_windows; ++d) {
      const double q = inst.drones[d].speed_kmh.value_or(0.0);
      if (q <= 0.0) throw InvalidInstance("drones[" + std::to_string(d) + "].speed_kmh: required with time windows");
      std::vector<Term> am;
      std::vector<Term> pm;
      for (std::size_t m : morning) am.push_back({L.xhat(m, d), inst.roundtrip_km(m) / q});
      for (std::size_t a : afternoon) pm.push_back({L.xhat(a, d), inst.roundtrip_km(a) / q});
      p.add_constraint(am, Sense::LessEqual, inst.morning_limit_h, idx("tw_drone_morning", {d}));
      p.add_constraint(pm, Sense::LessEqual, inst.afternoon_limit_h, idx("tw_drone_afternoon", {d}));
      if (!opt.orders) continue;
      for (std::size_t i : morning)
        for (std::size_t j : afternoon)
          p.add_constraint({{L.u(i, d), 1.0}, {L.u(j, d), -1.0}, {L.xhat(i, d), delta}, {L.xhat(j, d), delta}},
                           Sense::LessEqual, 2.0 * delta, idx("tw_drone_order", {i + 1, j + 1, d}));
    }
  }
  for (const auto& g : opt.drone_groups)
    add_ordering_rule(p, n, g, [&](std::size_t i, std::size_t d) { return L.xhat(i, d); }, L.drone_used, "sym_drone");
  if (opt.truck_symmetry) {
    const auto groups = group_by(nt, [&](std::size_t a, std::size_t b) { return same_truck(inst.trucks[a], inst.trucks[b]); });
    for (const auto& g : groups)
      add_ordering_rule(p, n, g, [&](std::size_t i, std::size_t t) { return L.xbar(i, t); }, L.truck_used, "sym_truck");
  }
  return L;
}

FirstStagePlan plan_from_values(const FirstStageLayout& L, const Instance& inst, const std::vector<double>& x) {
  const auto bit = [&](int v) { return v >= 0 && x[static_cast<std::size_t>(v)] > 0.5; };
  const auto num = [&](int v) { return v >= 0 ? static_cast<int>(std::lround(x[static_cast<std::size_t>(v)])) : 0; };
  FirstStagePlan plan = FirstStagePlan::empty(inst);
  const std::size_t n = L.customers;
  for (std::size_t t = 0; t < L.trucks; ++t) {
    plan.truck_used[t] = bit(L.truck_used[t]);
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b <= n; ++b) plan.truck_arcs[t].set(a, b, bit(L.arc(t, a, b)));
    for (std::size_t i = 0; i < n; ++i) {
      plan.truck_assign.set(i, t, bit(L.xbar(i, t)));
      plan.truck_order[i][t] = num(L.s(i, t));
    }
    // S is continuous; label customers by their position on the tour.
    int label = 1;
    for (std::size_t loc : plan.truck_tour(t))
      if (loc > 0 && plan.truck_assign(loc - 1, t)) plan.truck_order[loc - 1][t] = label++;
  }
  for (std::size_t d = 0; d < L.drones; ++d) {
    plan.drone_used[d] = bit(L.drone_used[d]);
    for (std::size_t i = 0; i < n; ++i) plan.drone_assign.set(i, d, bit(L.xhat(i, d)));
    std::vector<std::size_t> seq;
    for (std::size_t i = 0; i < n; ++i)
      if (plan.drone_assign(i, d)) seq.push_back(i);
    if (!L.drone_order.empty()) {
      const auto val = [&](std::size_t i) { return x[static_cast<std::size_t>(L.u(i, d))]; };
      std::stable_sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) { return val(a) < val(b); });
      int label = 1;
      for (std::size_t i : seq) plan.drone_order[i][d] = label++;
      continue;
    }
    const auto rank = [&](std::size_t i) {
      const auto c = inst.customers[i].window_class;
      return c == WindowClass::Morning ? 0 : c == WindowClass::None ? 1 : 2;
    };
    std::stable_sort(seq.begin(), seq.end(), [&](std::size_t a, std::size_t b) { return rank(a) < rank(b); });
    int label = 1;
    for (std::size_t i : seq) plan.drone_order[i][d] = label++;
  }
  return plan;
}

SuffixBlock add_suffix_block(milp::Problem& p, const std::vector<int>& orders, const std::vector<std::size_t>& customers,
                             const std::vector<Activation>& activation, double delta, double penalty_weight,
                             double repair_weight) {
  SuffixBlock b;
  b.penalty.assign(orders.size(), -1);
  for (std::size_t k = 0; k < customers.size(); ++k) {
    const std::size_t i = customers[k];
    const Activation& a = activation[k];
    const double lb = a.var < 0 && a.value > 0.5 ? 1.0 : 0.0;
    b.penalty[i] = p.add_variable(lb, 1.0, true, penalty_weight);
    if (a.var >= 0) p.add_constraint({{b.penalty[i], 1.0}, {a.var, -1.0}}, Sense::GreaterEqual, 0.0);
  }
  b.repair = p.add_binary(repair_weight);
  for (std::size_t i : customers) {
    for (std::size_t j : customers) {
      if (i == j) continue;
      std::vector<Term> row{{b.penalty[j], delta}, {b.penalty[i], -delta}};
      if (orders[i] >= 0) row.push_back({orders[i], 1.0});
      if (orders[j] >= 0) row.push_back({orders[j], -1.0});
      p.add_constraint(row, Sense::LessEqual, delta);
    }
    p.add_constraint({{b.repair, 1.0}, {b.penalty[i], -1.0}}, Sense::GreaterEqual, 0.0);
  }
  return b;
}

namespace {

bool drone_has_break(const BreakdownScenario& l, std::size_t d) {
  for (std::size_t i = 0; i < l.breaks.rows(); ++i)
    if (l.breaks(i, d)) return true;
  return false;
}

std::size_t estimate_variables(const Instance& inst, const ScenarioSpace& sc) {
  const std::size_t n = inst.num_customers();
  const std::size_t nt = inst.num_trucks();
  const std::size_t nd = inst.num_drones();
  std::size_t first = nt + nd + nt * (n + 1) * (n + 1) + 2 * n * nt + 2 * n * nd + n * n * nd;
  return first + sc.takeoff.size() * (n * nd + sc.breakdown.size() * nd * (n + 1));
}

}  // namespace

MonolithModel build_monolith(const Instance& inst, const ScenarioSpace& sc, const ModelOptions& opt) {
  require_valid(inst);
  require_valid(sc, inst);
  const std::size_t estimate = estimate_variables(inst, sc);
  if (estimate > opt.max_variables) throw ModelTooLarge(estimate, opt.max_variables);

  MonolithModel model;
  auto& p = model.problem;
  FirstStageOptions fo;
  fo.drone_groups = interchangeable_drones(inst, &sc);
  const FirstStageLayout L = add_first_stage(p, inst, fo);
  const std::size_t n = inst.num_customers();
  const std::size_t nd = inst.num_drones();
  const double delta = big_m(inst);
  const double pen = inst.costs.penalty;
  const double rep = inst.costs.repair;

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  RecourseLayout R;
  for (std::size_t w = 0; w < sc.takeoff.size(); ++w) {
    const auto& om = sc.takeoff[w];
    std::vector<int> zb(n * nd, -1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < nd; ++d) {
        const bool grounded = om.grounded[d];
        // Drone travel is paid only when the drone takes off.
        if (!grounded) p.add_objective(L.xhat(i, d), om.probability * inst.drone_cost(i));
        const int z = p.add_binary(om.probability * pen, idx("Zb", {i + 1, d, w}));
        zb[i * nd + d] = z;
        p.add_constraint({{z, 1.0}, {L.xhat(i, d), grounded ? -1.0 : 0.0}}, Sense::Equal, 0.0, idx("takeoff_penalty", {i + 1, d, w}));
      }
    R.takeoff.push_back(std::move(zb));

    std::vector<SuffixBlock> blocks(sc.breakdown.size() * nd);
    for (std::size_t l = 0; l < sc.breakdown.size(); ++l) {
      const auto& lam = sc.breakdown[l];
      for (std::size_t d = 0; d < nd; ++d) {
        if (opt.prune_inert_recourse && (om.grounded[d] || !drone_has_break(lam, d))) continue;
        std::vector<int> orders(n);
        std::vector<Activation> act(n);
        for (std::size_t i = 0; i < n; ++i) {
          orders[i] = L.u(i, d);
          if (!om.grounded[d] && lam.breaks(i, d)) act[i].var = L.xhat(i, d);
        }
        const double weight = om.probability * lam.probability;
        blocks[l * nd + d] = add_suffix_block(p, orders, all, act, delta, weight * pen, weight * rep);
      }
    }
    R.breakdown.push_back(std::move(blocks));
  }
  model.decoder = Decoder(L, std::move(R), inst, sc);
  return model;
}

DecodedSolution decode(const milp::Solution& sol, const Decoder& dec) {
  if (!sol.has_solution()) throw DecodeMismatch(std::string("no solution to decode (status ") + milp::to_string(sol.status) + ")");
  DecodedSolution out;
  out.plan = plan_from_values(dec.first_stage(), dec.instance(), sol.values);
  try {
    out.cost = evaluate_plan(out.plan, dec.instance(), dec.scenarios());
  } catch (const InfeasiblePlan& e) {
    throw DecodeMismatch(std::string("decoded plan is infeasible: ") + e.what());
  }
  out.recourse = recourse_of(out.plan, dec.instance(), dec.scenarios());
  const double gap = out.cost.total - sol.objective;
  const bool exact = sol.status == milp::Status::Optimal;
  if ((exact && std::abs(gap) > 1e-6) || (!exact && gap > 1e-6)) {
    throw DecodeMismatch("decoded total " + std::to_string(out.cost.total) + " differs from solver objective " +
                         std::to_string(sol.objective));
  }
  return out;
}

}  // namespace gadop
