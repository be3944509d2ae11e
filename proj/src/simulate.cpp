#include "gadop/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "gadop/baselines.hpp"
#include "gadop/lshape.hpp"
#include "gadop/parallel.hpp"

namespace gadop {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t draw_index(const std::vector<double>& probs, std::mt19937_64& rng) {
  const double u = unit_uniform(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last = k;
    acc += probs[k];
    if (u < acc) return k;
  }
  return last;
}

namespace {

struct Partial {
  std::vector<double> totals;
  CostBreakdown sums;
  std::vector<std::size_t> takeoff;
  std::vector<std::size_t> breakdown;
};

void add(CostBreakdown& a, const CostBreakdown& b) {
  a.truck_initial += b.truck_initial;
  a.drone_initial += b.drone_initial;
  a.truck_travel += b.truck_travel;
  a.expected_drone_travel += b.expected_drone_travel;
  a.expected_penalty += b.expected_penalty;
  a.expected_repair += b.expected_repair;
  a.total += b.total;
}

}  // namespace

SimulationResult simulate(const FirstStagePlan& plan, const Instance& inst, const ScenarioSpace& sc, std::size_t n,
                          std::uint64_t seed, const SimulationOptions& opt) {
  if (n == 0) throw std::invalid_argument("simulate: need at least one draw");
  require_valid(inst);
  require_valid(sc, inst);
  check_plan(plan, inst, opt.evaluate);
  const std::size_t nw = sc.takeoff.size();
  const std::size_t nl = sc.breakdown.size();
  std::vector<CostBreakdown> table(nw * nl);
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t l = 0; l < nl; ++l) table[w * nl + l] = realized_cost(plan, inst, sc.takeoff[w], sc.breakdown[l]);
  std::vector<double> pw(nw), pl(nl);
  for (std::size_t w = 0; w < nw; ++w) pw[w] = sc.takeoff[w].probability;
  for (std::size_t l = 0; l < nl; ++l) pl[l] = sc.breakdown[l].probability;

  std::vector<Partial> parts(kSimulationPartitions);
  parallel_for(kSimulationPartitions, opt.threads, [&](std::size_t k) {
    const std::size_t count = n / kSimulationPartitions + (k < n % kSimulationPartitions ? 1 : 0);
    std::mt19937_64 rng(splitmix64(seed + k));
    auto& part = parts[k];
    part.takeoff.assign(nw, 0);
    part.breakdown.assign(nl, 0);
    part.totals.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
      const std::size_t w = draw_index(pw, rng);
      const std::size_t l = draw_index(pl, rng);
      ++part.takeoff[w];
      ++part.breakdown[l];
      const auto& c = table[w * nl + l];
      add(part.sums, c);
      part.totals.push_back(c.total);
    }
  });

  SimulationResult r;
  r.samples = n;
  r.takeoff_counts.assign(nw, 0);
  r.breakdown_counts.assign(nl, 0);
  CostBreakdown sums;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& part : parts) {
    add(sums, part.sums);
    for (std::size_t w = 0; w < nw; ++w) r.takeoff_counts[w] += part.takeoff[w];
    for (std::size_t l = 0; l < nl; ++l) r.breakdown_counts[l] += part.breakdown[l];
    for (double x : part.totals) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  const double dn = static_cast<double>(n);
  r.category_means.truck_initial = sums.truck_initial / dn;
  r.category_means.drone_initial = sums.drone_initial / dn;
  r.category_means.truck_travel = sums.truck_travel / dn;
  r.category_means.expected_drone_travel = sums.expected_drone_travel / dn;
  r.category_means.expected_penalty = sums.expected_penalty / dn;
  r.category_means.expected_repair = sums.expected_repair / dn;
  r.category_means.total = sums.total / dn;
  r.mean = r.category_means.total;
  double ss = 0.0;
  for (const auto& part : parts)
    for (double x : part.totals) ss += (x - r.mean) * (x - r.mean);
  r.stddev = n > 1 ? std::sqrt(ss / (dn - 1.0)) : 0.0;

  r.histogram.lo = lo;
  r.histogram.hi = hi;
  r.histogram.counts.assign(std::max<std::size_t>(opt.bins, 1), 0);
  const std::size_t bins = r.histogram.counts.size();
  const double width = (hi - lo) / static_cast<double>(bins);
  for (const auto& part : parts)
    for (double x : part.totals) {
      std::size_t b = width > 0.0 ? static_cast<std::size_t>((x - lo) / width) : 0;
      r.histogram.counts[std::min(b, bins - 1)] += 1;
    }
  return r;
}

std::vector<MethodRow> compare_methods(const Instance& inst, const ScenarioSpace& sc, const CompareOptions& opt) {
  std::vector<MethodRow> rows;
  SimulationOptions so;
  so.threads = opt.threads;
  const auto count_drone = [&](const FirstStagePlan& p) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.drone_assign.rows(); ++i)
      for (std::size_t d = 0; d < p.drone_assign.cols(); ++d) k += p.drone_assign(i, d);
    return k;
  };
  const auto push = [&](const char* name, milp::Status st, const FirstStagePlan& plan, const CostBreakdown& cost,
                        const EvaluateOptions& eo) {
    MethodRow row;
    row.method = name;
    row.status = st;
    if (st == milp::Status::Optimal || st == milp::Status::GapLimit) {
      row.exact = cost;
      so.evaluate = eo;
      row.simulated = simulate(plan, inst, sc, opt.samples, opt.seed, so);
      row.drone_customers = count_drone(plan);
    }
    rows.push_back(std::move(row));
  };

  LShapeOptions lo;
  lo.threads = opt.threads;
  lo.limits = opt.limits;
  const auto g = run_lshape(inst, sc, lo);
  push("GADOP", g.status, g.plan, g.cost, {});
  const auto e = solve_evf(inst, sc, {}, opt.limits);
  push("EVF", e.status, e.plan, e.cost, {});
  if (inst.num_trucks() == 1) {
    const auto p = solve_pdstsp(inst, sc, opt.limits);
    EvaluateOptions eo;
    eo.check_limits = false;
    eo.check_time_windows = false;
    push("PDSTSP", p.status, p.plan, p.cost, eo);
  }

  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].status == milp::Status::Optimal || rows[k].status == milp::Status::GapLimit) idx.push_back(k);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].exact.total < rows[b].exact.total - 1e-9; });
  for (std::size_t r = 0; r < idx.size(); ++r) rows[idx[r]].rank = r + 1;
  return rows;
}

void write_comparison_csv(std::ostream& os, const std::string& name, const std::vector<MethodRow>& rows) {
  os << "instance,method,status,rank,drone_customers,exact_total,sim_mean,sim_stddev,truck_initial,drone_initial,"
        "truck_travel,drone_travel,penalty,repair\n";
  const auto money = [](double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    const auto& c = r.simulated.category_means;
    os << name << ',' << r.method << ',' << milp::to_string(r.status) << ',' << r.rank << ',' << r.drone_customers
       << ',' << money(r.exact.total) << ',' << money(r.simulated.mean) << ',' << money(r.simulated.stddev) << ','
       << money(c.truck_initial) << ',' << money(c.drone_initial) << ',' << money(c.truck_travel) << ','
       << money(c.expected_drone_travel) << ',' << money(c.expected_penalty) << ',' << money(c.expected_repair)
       << '\n';
  }
}

}  // namespace gadop
