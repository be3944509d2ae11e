#include "gadop/plan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gadop/errors.hpp"

namespace gadop {

namespace {

bool within(double lhs, double rhs) { return lhs <= rhs + 1e-7 * std::max(1.0, std::abs(rhs)); }

[[noreturn]] void fail(const char* rule, const std::string& detail) { throw InfeasiblePlan(rule, detail); }

std::string name_truck(std::size_t t) { return "truck " + std::to_string(t); }
std::string name_drone(std::size_t d) { return "drone " + std::to_string(d); }
std::string name_customer(std::size_t i) { return "customer " + std::to_string(i + 1); }

void check_shapes(const FirstStagePlan& p, const Instance& inst) {
  const std::size_t n = inst.num_customers();
  const std::size_t nt = inst.num_trucks();
  const std::size_t nd = inst.num_drones();
  const bool ok = p.truck_used.size() == nt && p.drone_used.size() == nd && p.truck_arcs.size() == nt &&
                  p.truck_assign.rows() == n && p.truck_assign.cols() == nt && p.drone_assign.rows() == n &&
                  p.drone_assign.cols() == nd && p.truck_order.size() == n && p.drone_order.size() == n;
  if (!ok) fail("shape", "plan dimensions do not match the instance");
  for (const auto& a : p.truck_arcs)
    if (a.rows() != n + 1 || a.cols() != n + 1) fail("shape", "truck arc matrix must be (c'+1) x (c'+1)");
  for (std::size_t i = 0; i < n; ++i)
    if (p.truck_order[i].size() != nt || p.drone_order[i].size() != nd) fail("shape", "order table width");
}

double truck_arc_time(const Instance& inst, std::size_t t, std::size_t a, std::size_t b) {
  const auto& tr = inst.trucks[t];
  return inst.distances_km(a, b) / tr.speed_kmh.at(a, b) + tr.dropoff_time_h;
}

double drone_flight_time(const Instance& inst, std::size_t d, std::size_t i) {
  const double q = *inst.drones[d].speed_kmh;
  return inst.distances_km(0, i + 1) / q + inst.distances_km(i + 1, 0) / q;
}

}  // namespace

FirstStagePlan FirstStagePlan::empty(const Instance& inst) {
  const std::size_t n = inst.num_customers();
  FirstStagePlan p;
  p.truck_used.assign(inst.num_trucks(), false);
  p.drone_used.assign(inst.num_drones(), false);
  p.truck_arcs.assign(inst.num_trucks(), BoolGrid(n + 1, n + 1));
  p.truck_assign = BoolGrid(n, inst.num_trucks());
  p.drone_assign = BoolGrid(n, inst.num_drones());
  p.truck_order.assign(n, std::vector<int>(inst.num_trucks(), 0));
  p.drone_order.assign(n, std::vector<int>(inst.num_drones(), 0));
  return p;
}

std::vector<std::size_t> FirstStagePlan::drone_sequence(std::size_t d) const {
  std::vector<std::size_t> seq;
  for (std::size_t i = 0; i < drone_assign.rows(); ++i)
    if (drone_assign(i, d)) seq.push_back(i);
  std::stable_sort(seq.begin(), seq.end(),
                   [&](std::size_t a, std::size_t b) { return drone_order[a][d] < drone_order[b][d]; });
  return seq;
}

std::vector<std::size_t> FirstStagePlan::truck_tour(std::size_t t) const {
  const auto& arcs = truck_arcs[t];
  const std::size_t locs = arcs.rows();
  std::vector<std::size_t> tour;
  std::size_t at = 0;
  for (std::size_t step = 0; step < locs; ++step) {
    std::size_t next = locs;
    for (std::size_t j = 0; j < locs; ++j)
      if (arcs(at, j)) {
        next = j;
        break;
      }
    if (next == locs || next == 0) break;
    tour.push_back(next);
    at = next;
  }
  return tour;
}

void FirstStagePlan::assign_truck_route(std::size_t t, const std::vector<std::size_t>& customers) {
  auto& arcs = truck_arcs[t];
  arcs = BoolGrid(arcs.rows(), arcs.cols());
  for (std::size_t i = 0; i < truck_assign.rows(); ++i) {
    truck_assign.set(i, t, false);
    truck_order[i][t] = 0;
  }
  std::size_t prev = 0;
  int label = 1;
  for (std::size_t c : customers) {
    truck_assign.set(c, t, true);
    truck_order[c][t] = label++;
    arcs.set(prev, c + 1, true);
    prev = c + 1;
  }
  if (!customers.empty()) arcs.set(prev, 0, true);
  truck_used[t] = !customers.empty();
}

void FirstStagePlan::assign_drone_sequence(std::size_t d, const std::vector<std::size_t>& customers) {
  for (std::size_t i = 0; i < drone_assign.rows(); ++i) {
    drone_assign.set(i, d, false);
    drone_order[i][d] = 0;
  }
  int label = 1;
  for (std::size_t c : customers) {
    drone_assign.set(c, d, true);
    drone_order[c][d] = label++;
  }
  drone_used[d] = !customers.empty();
}

void check_plan(const FirstStagePlan& p, const Instance& inst, const EvaluateOptions& opt) {
  check_shapes(p, inst);
  const std::size_t n = inst.num_customers();
  const std::size_t nt = inst.num_trucks();
  const std::size_t nd = inst.num_drones();

  for (std::size_t i = 0; i < n; ++i) {
    int count = 0;
    for (std::size_t t = 0; t < nt; ++t) count += p.truck_assign(i, t);
    for (std::size_t d = 0; d < nd; ++d) count += p.drone_assign(i, d);
    if (count != 1) fail("allocation", name_customer(i) + " is served " + std::to_string(count) + " times");
  }

  for (std::size_t t = 0; t < nt; ++t) {
    const auto& arcs = p.truck_arcs[t];
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.truck_assign(i, t)) continue;
      if (!p.truck_used[t]) fail("linking", name_truck(t) + " serves customers but is not used");
      weight += inst.customers[i].package_weight_kg;
    }
    if (opt.check_limits && !within(weight, inst.trucks[t].capacity_kg)) {
      fail("truck-capacity", name_truck(t) + " carries " + std::to_string(weight) + " kg");
    }
    int depot_out = 0;
    int depot_in = 0;
    for (std::size_t a = 0; a <= n; ++a) {
      if (arcs(a, a)) fail("routing", name_truck(t) + " has a self loop");
      if (a > 0) {
        depot_out += arcs(0, a);
        depot_in += arcs(a, 0);
      }
    }
    if (depot_out > 1 || depot_in > 1) fail("routing", name_truck(t) + " leaves or enters the depot twice");
    std::size_t served = 0;
    for (std::size_t i = 0; i < n; ++i) {
      int in = 0;
      int out = 0;
      for (std::size_t a = 0; a <= n; ++a) {
        in += arcs(a, i + 1);
        out += arcs(i + 1, a);
      }
      const int x = p.truck_assign(i, t);
      if (in != x || out != x) fail("routing", name_truck(t) + " degree mismatch at " + name_customer(i));
      served += x;
    }
    const auto tour = p.truck_tour(t);
    if (tour.size() != served) fail("subtour", name_truck(t) + " route is not a single depot cycle");

    double dist = 0.0;
    double time = 0.0;
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b <= n; ++b)
        if (arcs(a, b)) {
          dist += inst.distances_km(a, b);
          time += truck_arc_time(inst, t, a, b);
        }
    if (opt.check_limits && !within(dist, inst.trucks[t].daily_distance_km)) {
      fail("truck-daily-distance", name_truck(t) + " drives " + std::to_string(dist) + " km");
    }
    if (opt.check_limits && !within(time, inst.trucks[t].daily_time_h)) {
      fail("truck-time", name_truck(t) + " needs " + std::to_string(time) + " h");
    }
  }

  for (std::size_t d = 0; d < nd; ++d) {
    const auto& dr = inst.drones[d];
    double daily = 0.0;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
      if (!p.drone_assign(i, d)) continue;
      if (!p.drone_used[d]) fail("linking", name_drone(d) + " serves customers but is not used");
      const double trip = inst.roundtrip_km(i);
      if (!within(inst.customers[i].package_weight_kg, dr.capacity_kg)) {
        fail("drone-capacity", name_customer(i) + " is too heavy for " + name_drone(d));
      }
      if (!within(trip, dr.trip_distance_km)) {
        fail("trip-distance", name_customer(i) + " is out of range of " + name_drone(d));
      }
      daily += trip;
      labels.push_back(p.drone_order[i][d]);
    }
    if (opt.check_limits && !within(daily, dr.daily_distance_km)) {
      fail("drone-daily-distance", name_drone(d) + " flies " + std::to_string(daily) + " km");
    }
    std::sort(labels.begin(), labels.end());
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (labels[k] != static_cast<int>(k) + 1) {
        fail("drone-order", name_drone(d) + " serving orders must be distinct values 1..n");
      }
    }
  }

  if (!inst.has_time_windows() || !opt.check_time_windows) return;
  const auto cls = [&](std::size_t i) { return inst.customers[i].window_class; };
  for (std::size_t d = 0; d < nd; ++d) {
    const auto seq = p.drone_sequence(d);
    bool seen_afternoon = false;
    double morning = 0.0;
    double afternoon = 0.0;
    for (std::size_t i : seq) {
      if (cls(i) == WindowClass::Afternoon) {
        seen_afternoon = true;
        afternoon += drone_flight_time(inst, d, i);
      } else if (cls(i) == WindowClass::Morning) {
        if (seen_afternoon) fail("time-window", name_drone(d) + " serves a morning customer after an afternoon one");
        morning += drone_flight_time(inst, d, i);
      }
    }
    if (opt.check_limits && (!within(morning, inst.morning_limit_h) || !within(afternoon, inst.afternoon_limit_h))) {
      fail("time-window-limit", name_drone(d) + " exceeds a window time limit");
    }
  }
  for (std::size_t t = 0; t < nt; ++t) {
    bool seen_afternoon = false;
    for (std::size_t loc : p.truck_tour(t)) {
      const auto c = cls(loc - 1);
      if (c == WindowClass::Afternoon) seen_afternoon = true;
      if (c == WindowClass::Morning && seen_afternoon) {
        fail("time-window", name_truck(t) + " serves a morning customer after an afternoon one");
      }
    }
    const auto& arcs = p.truck_arcs[t];
    double morning = 0.0;
    double afternoon = 0.0;
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b <= n; ++b) {
        if (!arcs(a, b)) continue;
        if (b > 0 && cls(b - 1) == WindowClass::Morning) morning += truck_arc_time(inst, t, a, b);
        if (a > 0 && (b == 0 || cls(b - 1) == WindowClass::Afternoon)) afternoon += truck_arc_time(inst, t, a, b);
      }
    if (opt.check_limits && (!within(morning, inst.morning_limit_h) || !within(afternoon, inst.afternoon_limit_h))) {
      fail("time-window-limit", name_truck(t) + " exceeds a window time limit");
    }
  }
}

std::size_t stranded_count(const std::vector<std::size_t>& sequence, const BoolGrid& breaks, std::size_t d) {
  for (std::size_t k = 0; k < sequence.size(); ++k)
    if (breaks(sequence[k], d)) return sequence.size() - k;
  return 0;
}

RecourseOutcome recourse_of(const FirstStagePlan& p, const Instance& inst, const ScenarioSpace& sc) {
  const std::size_t n = inst.num_customers();
  const std::size_t nd = inst.num_drones();
  RecourseOutcome r;
  std::vector<std::vector<std::size_t>> seq(nd);
  for (std::size_t d = 0; d < nd; ++d) seq[d] = p.drone_sequence(d);
  for (const auto& w : sc.takeoff) {
    BoolGrid zb(n, nd);
    BoolGrid rep(nd, sc.breakdown.size());
    std::vector<BoolGrid> za;
    for (std::size_t d = 0; d < nd; ++d)
      if (w.grounded[d])
        for (std::size_t i : seq[d]) zb.set(i, d, true);
    for (std::size_t l = 0; l < sc.breakdown.size(); ++l) {
      BoolGrid g(n, nd);
      for (std::size_t d = 0; d < nd; ++d) {
        if (w.grounded[d]) continue;
        const std::size_t k = stranded_count(seq[d], sc.breakdown[l].breaks, d);
        for (std::size_t s = seq[d].size() - k; s < seq[d].size(); ++s) g.set(seq[d][s], d, true);
        if (k > 0) rep.set(d, l, true);
      }
      za.push_back(std::move(g));
    }
    r.takeoff_penalties.push_back(std::move(zb));
    r.breakdown_penalties.push_back(std::move(za));
    r.repairs.push_back(std::move(rep));
  }
  return r;
}

namespace {

CostBreakdown deterministic_part(const FirstStagePlan& p, const Instance& inst) {
  CostBreakdown c;
  const std::size_t n = inst.num_customers();
  for (std::size_t t = 0; t < inst.num_trucks(); ++t) {
    if (p.truck_used[t]) c.truck_initial += inst.trucks[t].initial_cost;
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b <= n; ++b)
        if (p.truck_arcs[t](a, b)) c.truck_travel += inst.costs.truck_arc_cost(a, b);
  }
  for (std::size_t d = 0; d < inst.num_drones(); ++d)
    if (p.drone_used[d]) c.drone_initial += inst.drones[d].initial_cost;
  return c;
}

void finish(CostBreakdown& c) {
  c.total = c.truck_initial + c.drone_initial + c.truck_travel + c.expected_drone_travel + c.expected_penalty +
            c.expected_repair;
}

}  // namespace

CostBreakdown evaluate_plan(const FirstStagePlan& p, const Instance& inst, const ScenarioSpace& sc,
                            const EvaluateOptions& opt) {
  require_valid(inst);
  require_valid(sc, inst);
  check_plan(p, inst, opt);
  CostBreakdown c = deterministic_part(p, inst);
  const std::size_t nd = inst.num_drones();
  const double pen = inst.costs.penalty;
  const double rep = inst.costs.repair;
  std::vector<std::vector<std::size_t>> seq(nd);
  std::vector<double> travel(nd, 0.0);
  for (std::size_t d = 0; d < nd; ++d) {
    seq[d] = p.drone_sequence(d);
    for (std::size_t i : seq[d]) travel[d] += inst.drone_cost(i);
  }
  for (const auto& w : sc.takeoff) {
    double drone_travel = 0.0;
    double grounded_penalty = 0.0;
    double third_penalty = 0.0;
    double third_repair = 0.0;
    for (std::size_t d = 0; d < nd; ++d) {
      if (w.grounded[d]) {
        grounded_penalty += pen * static_cast<double>(seq[d].size());
        continue;
      }
      drone_travel += travel[d];
      for (const auto& l : sc.breakdown) {
        const std::size_t k = stranded_count(seq[d], l.breaks, d);
        third_penalty += l.probability * pen * static_cast<double>(k);
        if (k > 0) third_repair += l.probability * rep;
      }
    }
    c.expected_drone_travel += w.probability * drone_travel;
    c.expected_penalty += w.probability * (grounded_penalty + third_penalty);
    c.expected_repair += w.probability * third_repair;
  }
  finish(c);
  return c;
}

CostBreakdown realized_cost(const FirstStagePlan& p, const Instance& inst, const TakeoffScenario& w,
                            const BreakdownScenario& l) {
  CostBreakdown c = deterministic_part(p, inst);
  for (std::size_t d = 0; d < inst.num_drones(); ++d) {
    const auto seq = p.drone_sequence(d);
    if (w.grounded[d]) {
      c.expected_penalty += inst.costs.penalty * static_cast<double>(seq.size());
      continue;
    }
    for (std::size_t i : seq) c.expected_drone_travel += inst.drone_cost(i);
    const std::size_t k = stranded_count(seq, l.breaks, d);
    c.expected_penalty += inst.costs.penalty * static_cast<double>(k);
    if (k > 0) c.expected_repair += inst.costs.repair;
  }
  finish(c);
  return c;
}

}  // namespace gadop
