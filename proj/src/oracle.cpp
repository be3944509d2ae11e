#include "gadop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "gadop/errors.hpp"
#include "gadop/lshape.hpp"
#include "gadop/model.hpp"
#include "gadop/parallel.hpp"

namespace gadop {

namespace {

constexpr double kInfCost = std::numeric_limits<double>::infinity();

bool fits(double lhs, double rhs) { return lhs <= rhs + 1e-7 * std::max(1.0, std::abs(rhs)); }

WindowClass cls(const Instance& inst, std::size_t i) { return inst.customers[i].window_class; }

// Morning before afternoon along the sequence.
bool ordered_by_window(const Instance& inst, const std::vector<std::size_t>& seq) {
  bool afternoon = false;
  for (std::size_t i : seq) {
    if (cls(inst, i) == WindowClass::Afternoon) afternoon = true;
    if (cls(inst, i) == WindowClass::Morning && afternoon) return false;
  }
  return true;
}

double truck_leg_time(const Instance& inst, const TruckSpec& tr, std::size_t a, std::size_t b) {
  return inst.distances_km(a, b) / tr.speed_kmh.at(a, b) + tr.dropoff_time_h;
}

// Travel cost of the tour, or infinity when a limit is broken.
double truck_tour_cost(const Instance& inst, std::size_t t, const std::vector<std::size_t>& seq) {
  const auto& tr = inst.trucks[t];
  const bool tw = inst.has_time_windows();
  if (tw && !ordered_by_window(inst, seq)) return kInfCost;
  double km = 0.0, hours = 0.0, am = 0.0, pm = 0.0, cost = 0.0;
  std::size_t at = 0;
  for (std::size_t step = 0; step <= seq.size(); ++step) {
    const std::size_t to = step < seq.size() ? seq[step] + 1 : 0;
    const double leg = truck_leg_time(inst, tr, at, to);
    km += inst.distances_km(at, to);
    hours += leg;
    cost += inst.costs.truck_arc_cost(at, to);
    if (to > 0 && cls(inst, to - 1) == WindowClass::Morning) am += leg;
    if (at > 0 && (to == 0 || cls(inst, to - 1) == WindowClass::Afternoon)) pm += leg;
    at = to;
  }
  if (!fits(km, tr.daily_distance_km) || !fits(hours, tr.daily_time_h)) return kInfCost;
  if (tw && (!fits(am, inst.morning_limit_h) || !fits(pm, inst.afternoon_limit_h))) return kInfCost;
  return cost;
}

// Expected drone payment for a fixed serving sequence, initial cost excluded.
double drone_sequence_cost(const Instance& inst, const ScenarioSpace& sc, std::size_t d,
                           const std::vector<std::size_t>& seq) {
  double fly = 0.0;
  double ground = 0.0;
  for (const auto& w : sc.takeoff) (w.grounded[d] ? ground : fly) += w.probability;
  double travel = 0.0;
  for (std::size_t i : seq) travel += inst.drone_cost(i);
  double breakdown = 0.0;
  for (const auto& l : sc.breakdown) {
    std::size_t first = seq.size();
    for (std::size_t k = 0; k < seq.size(); ++k)
      if (l.breaks(seq[k], d)) {
        first = k;
        break;
      }
    if (first == seq.size()) continue;
    breakdown += l.probability * (inst.costs.penalty * static_cast<double>(seq.size() - first) + inst.costs.repair);
  }
  return fly * (travel + breakdown) + ground * inst.costs.penalty * static_cast<double>(seq.size());
}

bool drone_set_feasible(const Instance& inst, std::size_t d, const std::vector<std::size_t>& set) {
  const auto& dr = inst.drones[d];
  double daily = 0.0, am = 0.0, pm = 0.0;
  for (std::size_t i : set) {
    const double rt = inst.roundtrip_km(i);
    if (!fits(inst.customers[i].package_weight_kg, dr.capacity_kg) || !fits(rt, dr.trip_distance_km)) return false;
    daily += rt;
    if (inst.has_time_windows()) {
      if (!dr.speed_kmh || *dr.speed_kmh <= 0.0)
        throw InvalidInstance("drones[" + std::to_string(d) + "].speed_kmh: required with time windows");
      const double h = inst.distances_km(0, i + 1) / *dr.speed_kmh + inst.distances_km(i + 1, 0) / *dr.speed_kmh;
      if (cls(inst, i) == WindowClass::Morning) am += h;
      if (cls(inst, i) == WindowClass::Afternoon) pm += h;
    }
  }
  if (!fits(daily, dr.daily_distance_km)) return false;
  if (inst.has_time_windows() && (!fits(am, inst.morning_limit_h) || !fits(pm, inst.afternoon_limit_h))) return false;
  return true;
}

struct Best {
  double cost = kInfCost;  // includes the initial cost; 0 for the empty set
  std::vector<std::size_t> seq;
};

Best best_for(const Instance& inst, const ScenarioSpace& sc, std::size_t v, unsigned mask) {
  const std::size_t nt = inst.num_trucks();
  std::vector<std::size_t> set;
  for (std::size_t i = 0; i < inst.num_customers(); ++i)
    if (mask >> i & 1U) set.push_back(i);
  Best b;
  if (set.empty()) {
    b.cost = 0.0;
    return b;
  }
  double fixed = 0.0;
  if (v < nt) {
    double w = 0.0;
    for (std::size_t i : set) w += inst.customers[i].package_weight_kg;
    if (!fits(w, inst.trucks[v].capacity_kg)) return b;
    fixed = inst.trucks[v].initial_cost;
  } else {
    if (!drone_set_feasible(inst, v - nt, set)) return b;
    fixed = inst.drones[v - nt].initial_cost;
  }
  std::vector<std::size_t> perm = set;
  do {
    double c;
    if (v < nt) {
      c = truck_tour_cost(inst, v, perm);
    } else {
      c = inst.has_time_windows() && !ordered_by_window(inst, perm) ? kInfCost
                                                                    : drone_sequence_cost(inst, sc, v - nt, perm);
    }
    if (c < kInfCost && fixed + c < b.cost - 1e-12) {
      b.cost = fixed + c;
      b.seq = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return b;
}

}  // namespace

OracleResult solve_exhaustive(const Instance& inst, const ScenarioSpace& sc, const OracleCaps& caps, unsigned threads) {
  const std::size_t n = inst.num_customers();
  const std::size_t nt = inst.num_trucks();
  const std::size_t nd = inst.num_drones();
  if (n > caps.max_customers || nt > caps.max_trucks || nd > caps.max_drones) {
    throw CapExceeded("oracle handles at most " + std::to_string(caps.max_customers) + " customers, " +
                      std::to_string(caps.max_trucks) + " trucks and " + std::to_string(caps.max_drones) + " drones");
  }
  const std::size_t nv = nt + nd;
  const std::size_t masks = std::size_t{1} << n;
  std::vector<Best> table(nv * masks);
  parallel_for(table.size(), threads, [&](std::size_t k) {
    table[k] = best_for(inst, sc, k / masks, static_cast<unsigned>(k % masks));
  });

  OracleResult res;
  res.plan = FirstStagePlan::empty(inst);
  if (n == 0) {
    res.feasible = true;
    res.assignments_checked = 1;
    return res;
  }
  if (nv == 0) return res;
  // Customer 0 is the most significant digit, so the first minimum found is
  // the lexicographically smallest assignment.
  std::vector<std::size_t> digit(n, 0);
  std::vector<unsigned> mask(nv);
  double best = kInfCost;
  std::vector<std::size_t> best_digit;
  for (;;) {
    ++res.assignments_checked;
    std::fill(mask.begin(), mask.end(), 0U);
    for (std::size_t i = 0; i < n; ++i) mask[digit[i]] |= 1U << i;
    double total = 0.0;
    for (std::size_t v = 0; v < nv && total < kInfCost; ++v) total += table[v * masks + mask[v]].cost;
    if (total < best - 1e-9) {
      best = total;
      best_digit = digit;
    }
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++digit[pos] < nv) break;
      digit[pos] = 0;
      if (pos == 0) {
        pos = n + 1;
        break;
      }
    }
    if (pos == n + 1) break;
  }
  if (best == kInfCost) return res;
  res.feasible = true;
  res.objective = best;
  std::fill(mask.begin(), mask.end(), 0U);
  for (std::size_t i = 0; i < n; ++i) mask[best_digit[i]] |= 1U << i;
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& seq = table[v * masks + mask[v]].seq;
    if (v < nt) {
      res.plan.assign_truck_route(v, seq);
    } else {
      res.plan.assign_drone_sequence(v - nt, seq);
    }
  }
  return res;
}

double oracle_plan_cost(const FirstStagePlan& plan, const Instance& inst, const ScenarioSpace& sc) {
  double total = 0.0;
  for (std::size_t t = 0; t < inst.num_trucks(); ++t) {
    if (plan.truck_used[t]) total += inst.trucks[t].initial_cost;
    const auto& arcs = plan.truck_arcs[t];
    for (std::size_t a = 0; a < arcs.rows(); ++a)
      for (std::size_t b = 0; b < arcs.cols(); ++b)
        if (arcs(a, b)) total += inst.costs.truck_arc_cost(a, b);
  }
  for (std::size_t d = 0; d < inst.num_drones(); ++d) {
    if (plan.drone_used[d]) total += inst.drones[d].initial_cost;
    std::vector<std::pair<int, std::size_t>> keyed;
    for (std::size_t i = 0; i < inst.num_customers(); ++i)
      if (plan.drone_assign(i, d)) keyed.emplace_back(plan.drone_order[i][d], i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> seq;
    for (const auto& k : keyed) seq.push_back(k.second);
    total += drone_sequence_cost(inst, sc, d, seq);
  }
  return total;
}

CrossCheckReport cross_check(const Instance& inst, const ScenarioSpace& sc, const OracleCaps& caps) {
  require_valid(inst);
  require_valid(sc, inst);
  CrossCheckReport r;
  const auto oracle = solve_exhaustive(inst, sc, caps);
  r.oracle_feasible = oracle.feasible;
  r.oracle = oracle.feasible ? oracle.objective : kInfCost;

  const auto mono = build_monolith(inst, sc);
  const auto sol = milp::solve(mono.problem);
  r.monolith = sol.status == milp::Status::Optimal ? decode(sol, mono.decoder).cost.total : kInfCost;
  if (sol.status != milp::Status::Optimal && sol.status != milp::Status::Infeasible) {
    r.flagged.push_back(std::string("monolith status ") + milp::to_string(sol.status));
  }

  const auto ls = run_lshape(inst, sc);
  r.lshape = ls.status == milp::Status::Optimal ? ls.cost.total : kInfCost;

  const auto compare = [&](const char* a, double x, const char* b, double y) {
    const bool both_inf = std::isinf(x) && std::isinf(y);
    if (!both_inf && !(std::abs(x - y) <= 1e-6)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s %.9f vs %s %.9f", a, x, b, y);
      r.flagged.emplace_back(buf);
    }
  };
  compare("oracle", r.oracle, "monolith", r.monolith);
  compare("oracle", r.oracle, "lshape", r.lshape);
  compare("monolith", r.monolith, "lshape", r.lshape);
  return r;
}

}  // namespace gadop
