#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gadop/baselines.hpp"
#include "gadop/errors.hpp"
#include "gadop/generate.hpp"
#include "gadop/io.hpp"
#include "gadop/lshape.hpp"
#include "gadop/model.hpp"
#include "gadop/parallel.hpp"
#include "gadop/render.hpp"
#include "gadop/simulate.hpp"
#include "gadop/solomon.hpp"

using namespace gadop;

namespace {

std::string money(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

// Scenario space: explicit file, then the instance document, then deterministic.
ScenarioSpace load_scenarios(const InstanceDocument& doc, const std::string& path) {
  if (!path.empty()) return scenarios_from_json(read_json(path), doc.instance);
  if (doc.scenarios) return *doc.scenarios;
  return deterministic_space(doc.instance);
}

int exit_for(milp::Status s) {
  if (s == milp::Status::Optimal) return 0;
  if (s == milp::Status::GapLimit) return 2;
  return 1;
}

struct SolveFlags {
  std::string instance;
  std::string scenarios;
  std::string method = "lshape";
  std::string out;
  std::string lp;
  std::string cut_mode = "exact";
  double time_cap = 0.0;
  unsigned threads = 0;
  bool evf_literal = false;
};

int cmd_solve(const SolveFlags& f) {
  const auto doc = read_instance_document(f.instance);
  const auto& inst = doc.instance;
  const auto sc = load_scenarios(doc, f.scenarios);
  require_valid(inst);
  require_valid(sc, inst);
  milp::Limits limits;
  if (f.time_cap > 0.0) limits.time_cap_s = f.time_cap;
  const unsigned threads = resolve_threads(f.threads);

  Json report;
  report["tool"] = "gadop solve";
  report["flags"] = {{"instance", f.instance}, {"scenarios", f.scenarios}, {"method", f.method},
                     {"time_cap", f.time_cap}, {"threads", threads},     {"cut_mode", f.cut_mode},
                     {"evf_literal", f.evf_literal}};
  report["instance_hash"] = hex64(instance_hash(inst, &sc));
  report["instance"] = inst.name;

  milp::Status status = milp::Status::Infeasible;
  FirstStagePlan plan;
  CostBreakdown cost;
  EvaluateOptions eo;
  const auto t0 = std::chrono::steady_clock::now();
  if (f.method == "monolith") {
    const auto model = build_monolith(inst, sc);
    if (!f.lp.empty()) {
      std::ofstream lp(f.lp);
      milp::write_lp(lp, model.problem);
    }
    const auto sol = milp::default_engine().solve(model.problem, limits);
    status = sol.status;
    report["solver"] = {{"engine", milp::default_engine().name()},
                        {"variables", model.problem.num_vars()},
                        {"constraints", model.problem.num_constraints()},
                        {"nodes", sol.nodes_explored},
                        {"simplex_iterations", sol.simplex_iterations},
                        {"objective", sol.objective},
                        {"best_bound", sol.best_bound}};
    if (sol.has_solution()) {
      const auto dec = decode(sol, model.decoder);
      plan = dec.plan;
      cost = dec.cost;
    }
  } else if (f.method == "lshape") {
    LShapeOptions lo;
    lo.cut_mode = f.cut_mode == "aggregate" ? CutMode::Aggregate : CutMode::Exact;
    lo.threads = threads;
    lo.limits = limits;
    const auto r = run_lshape(inst, sc, lo);
    status = r.status;
    plan = r.plan;
    cost = r.cost;
    Json trace = Json::array();
    for (const auto& it : r.iterations) trace.push_back(trace_to_json(it));
    report["solver"] = {{"engine", milp::default_engine().name()},
                        {"master_solves", r.master_solves},
                        {"subproblems_solved", r.subproblems_solved},
                        {"cache_hits", r.cache_hits}};
    report["lshape"] = {{"iterations", trace}};
    if (!r.feedback.empty()) report["lshape"]["feedback"] = feedback_to_json(r.feedback.back());
  } else if (f.method == "evf" || f.method == "pdstsp") {
    BaselineResult r;
    if (f.method == "evf") {
      EvfOptions eo2;
      eo2.literal = f.evf_literal;
      r = solve_evf(inst, sc, eo2, limits);
    } else {
      r = solve_pdstsp(inst, sc, limits);
      eo.check_limits = false;
      eo.check_time_windows = false;
    }
    status = r.status;
    plan = r.plan;
    cost = r.cost;
    report["solver"] = {{"engine", milp::default_engine().name()}, {"model_objective", r.model_objective}};
  } else {
    throw Error("unknown method " + f.method);
  }
  report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report["status"] = milp::to_string(status);
  if (status == milp::Status::Optimal || status == milp::Status::GapLimit) {
    report["plan"] = plan_to_json(plan, inst);
    report["cost"] = cost_to_json(cost);
    report["recourse_per_takeoff"] = Json::array();
    for (const auto& w : sc.takeoff) {
      ScenarioSpace one{{TakeoffScenario{w.grounded, 1.0}}, sc.breakdown};
      report["recourse_per_takeoff"].push_back(evaluate_plan(plan, inst, one, eo).total);
    }
    std::cerr << f.method << ": " << milp::to_string(status) << ", total " << money(cost.total) << " (truck "
              << money(cost.truck_initial + cost.truck_travel) << ", drone "
              << money(cost.drone_initial + cost.expected_drone_travel) << ", penalty "
              << money(cost.expected_penalty) << ", repair " << money(cost.expected_repair) << ")\n";
  } else {
    std::cerr << f.method << ": " << milp::to_string(status) << '\n';
  }
  write_text(f.out, report.dump(2) + "\n");
  return exit_for(status);
}

int cmd_compare(const std::string& instance, const std::string& scen, std::size_t samples, std::uint64_t seed,
                unsigned threads, const std::string& out) {
  const auto doc = read_instance_document(instance);
  const auto sc = load_scenarios(doc, scen);
  CompareOptions co;
  co.samples = samples;
  co.seed = seed;
  co.threads = resolve_threads(threads);
  const auto rows = compare_methods(doc.instance, sc, co);
  std::ostringstream os;
  write_comparison_csv(os, doc.instance.name.empty() ? instance : doc.instance.name, rows);
  write_text(out, os.str());
  return 0;
}

struct SpeedupFlags {
  std::size_t drones = 2;
  std::size_t customers = 6;
  std::vector<std::size_t> takeoff{4, 8, 16};
  std::size_t breakdown = 2;
  std::uint64_t seed = 7;
  std::size_t repeats = 1;
  unsigned threads = 1;
  std::string out;
};

int cmd_speedup(const SpeedupFlags& f) {
  GeneratorOptions g;
  g.customers = f.customers;
  g.drones = f.drones;
  const auto inst = random_instance(f.seed, g);
  std::ostringstream os;
  os << "takeoff_scenarios,breakdown_scenarios,monolith_s,lshape_s,ratio,monolith_total,lshape_total\n";
  for (std::size_t nw : f.takeoff) {
    ScenarioOptions so;
    so.takeoff = nw;
    so.breakdown = f.breakdown;
    const auto sc = random_scenarios(inst, f.seed, so);
    double tm = 1e300, tl = 1e300, vm = 0.0, vl = 0.0;
    for (std::size_t r = 0; r < std::max<std::size_t>(f.repeats, 1); ++r) {
      auto t0 = std::chrono::steady_clock::now();
      const auto model = build_monolith(inst, sc);
      const auto sol = milp::solve(model.problem);
      tm = std::min(tm, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      vm = sol.objective;
      t0 = std::chrono::steady_clock::now();
      LShapeOptions lo;
      lo.threads = resolve_threads(f.threads);
      const auto rep = run_lshape(inst, sc, lo);
      tl = std::min(tl, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      vl = rep.cost.total;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.6f,%.6f,%.3f,%.2f,%.2f\n", nw, f.breakdown, tm, tl, tm / tl, vm, vl);
    os << buf;
  }
  write_text(f.out, os.str());
  return 0;
}

int cmd_render(const std::string& report_path, const std::string& instance, const std::string& svg) {
  const auto doc = read_instance_document(instance);
  const auto report = read_json(report_path);
  const auto plan = report.contains("plan") ? plan_from_json(report["plan"], doc.instance)
                                            : FirstStagePlan::empty(doc.instance);
  write_text(svg, render_svg(plan, doc.instance));
  return 0;
}

int cmd_simulate(const std::string& report_path, const std::string& instance, const std::string& scen,
                 std::size_t samples, std::uint64_t seed, unsigned threads, const std::string& out) {
  const auto doc = read_instance_document(instance);
  const auto sc = load_scenarios(doc, scen);
  const auto report = read_json(report_path);
  if (!report.contains("plan")) throw Error(report_path + ": report has no plan");
  const auto plan = plan_from_json(report["plan"], doc.instance);
  SimulationOptions so;
  so.threads = resolve_threads(threads);
  if (report.value("flags", Json::object()).value("method", std::string{}) == "pdstsp") {
    so.evaluate.check_limits = false;
    so.evaluate.check_time_windows = false;
  }
  const auto r = simulate(plan, doc.instance, sc, samples, seed, so);
  const auto exact = evaluate_plan(plan, doc.instance, sc, so.evaluate);
  Json j = {{"samples", r.samples},
            {"seed", seed},
            {"instance_hash", hex64(instance_hash(doc.instance, &sc))},
            {"mean", r.mean},
            {"stddev", r.stddev},
            {"exact", exact.total},
            {"category_means", cost_to_json(r.category_means)},
            {"histogram", histogram_to_json(r.histogram)},
            {"takeoff_counts", r.takeoff_counts},
            {"breakdown_counts", r.breakdown_counts}};
  std::cerr << "mean " << money(r.mean) << " stddev " << money(r.stddev) << " exact " << money(exact.total) << '\n';
  write_text(out, j.dump(2) + "\n");
  return 0;
}

struct ConvertFlags {
  std::string solomon;
  std::string out;
  std::vector<int> customers;
  std::size_t first = 0;
  std::size_t trucks = 1;
  std::size_t drones = 3;
  double scale = 1.0;
  double drone_speed = 0.0;
  bool map_windows = false;
  double p_ground = -1.0;
  double p_break = 0.1;
  double break_fraction = 0.2;
};

int cmd_convert(const ConvertFlags& f) {
  const auto data = read_solomon_file(f.solomon);
  std::vector<int> subset = f.customers;
  if (subset.empty() && f.first > 0) {
    for (std::size_t k = 1; k < data.rows.size() && subset.size() < f.first; ++k) subset.push_back(data.rows[k].id);
  }
  SolomonParams prm;
  prm.trucks = f.trucks;
  prm.drones = f.drones;
  prm.coordinate_scale = f.scale;
  prm.map_time_windows = f.map_windows;
  if (f.drone_speed > 0.0) prm.drone_speed_kmh = f.drone_speed;
  const auto inst = to_instance(data, subset, prm);
  require_valid(inst);
  if (f.p_ground >= 0.0) {
    const auto sc = two_point_spaces(f.p_ground, f.p_break, f.break_fraction, inst);
    write_instance_document(f.out, inst, &sc);
  } else {
    write_instance_document(f.out, inst, nullptr);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truck and drone delivery planning under takeoff and breakdown uncertainty"};
  app.require_subcommand(1);

  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "Solve an instance and write a JSON report");
  solve->add_option("--instance", sf.instance, "Instance JSON")->required();
  solve->add_option("--scenarios", sf.scenarios, "Scenario JSON overriding the instance's own");
  solve->add_option("--method", sf.method, "monolith | lshape | evf | pdstsp")
      ->check(CLI::IsMember({"monolith", "lshape", "evf", "pdstsp"}));
  solve->add_option("--out", sf.out, "Report path (stdout when omitted)");
  solve->add_option("--time-cap", sf.time_cap, "Seconds per MILP solve (0 = none)");
  solve->add_option("--threads", sf.threads, "Worker threads (0 = machine parallelism)");
  solve->add_option("--cut-mode", sf.cut_mode, "exact | aggregate")->check(CLI::IsMember({"exact", "aggregate"}));
  solve->add_flag("--evf-literal", sf.evf_literal, "EVF with travel weighted by P(d) and a constant repair term");
  solve->add_option("--lp", sf.lp, "Also write the monolith in LP format");

  std::string c_instance, c_scen, c_out;
  std::size_t c_samples = 10000;
  std::uint64_t c_seed = 1;
  unsigned c_threads = 0;
  auto* compare = app.add_subcommand("compare", "CSV comparison of GADOP, EVF and PDSTSP");
  compare->add_option("--instance", c_instance, "Instance JSON")->required();
  compare->add_option("--scenarios", c_scen, "Scenario JSON overriding the instance's own");
  compare->add_option("--samples", c_samples, "Monte Carlo draws per method");
  compare->add_option("--seed", c_seed, "Simulation seed");
  compare->add_option("--threads", c_threads, "Worker threads (0 = machine parallelism)");
  compare->add_option("--out", c_out, "CSV path (stdout when omitted)");

  SpeedupFlags pf;
  auto* speedup = app.add_subcommand("speedup", "Monolith vs decomposition wall time on generated instances");
  speedup->add_option("--drones", pf.drones, "Drones per instance");
  speedup->add_option("--customers", pf.customers, "Customers per instance");
  speedup->add_option("--takeoff-scenarios", pf.takeoff, "Comma list of takeoff scenario counts")->delimiter(',');
  speedup->add_option("--breakdown-scenarios", pf.breakdown, "Breakdown scenario count");
  speedup->add_option("--seed", pf.seed, "Generator seed");
  speedup->add_option("--repeats", pf.repeats, "Timing repeats, the fastest is kept");
  speedup->add_option("--threads", pf.threads, "Worker threads (0 = machine parallelism)");
  speedup->add_option("--out", pf.out, "CSV path (stdout when omitted)");

  std::string r_report, r_instance, r_svg;
  auto* render = app.add_subcommand("render", "SVG route map of a solve report");
  render->add_option("--report", r_report, "Solve report JSON")->required();
  render->add_option("--instance", r_instance, "Instance JSON")->required();
  render->add_option("--svg", r_svg, "SVG path (stdout when omitted)");

  std::string s_report, s_instance, s_scen, s_out;
  std::size_t s_samples = 100000;
  std::uint64_t s_seed = 1;
  unsigned s_threads = 0;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo replay of a solve report's plan");
  sim->add_option("--report", s_report, "Solve report JSON")->required();
  sim->add_option("--instance", s_instance, "Instance JSON")->required();
  sim->add_option("--scenarios", s_scen, "Scenario JSON overriding the instance's own");
  sim->add_option("--samples", s_samples, "Monte Carlo draws");
  sim->add_option("--seed", s_seed, "Simulation seed");
  sim->add_option("--threads", s_threads, "Worker threads (0 = machine parallelism)");
  sim->add_option("--out", s_out, "JSON path (stdout when omitted)");

  ConvertFlags cf;
  auto* convert = app.add_subcommand("convert", "Solomon text file to instance JSON");
  convert->add_option("--solomon", cf.solomon, "Solomon text file")->required();
  convert->add_option("--out", cf.out, "Instance JSON to write")->required();
  convert->add_option("--customers", cf.customers, "Solomon customer numbers")->delimiter(',');
  convert->add_option("--first", cf.first, "Take the first N customers");
  convert->add_option("--trucks", cf.trucks, "Truck count");
  convert->add_option("--drones", cf.drones, "Drone count");
  convert->add_option("--scale", cf.scale, "km per coordinate unit");
  convert->add_option("--drone-speed", cf.drone_speed, "Drone km/h, needed with time windows");
  convert->add_flag("--map-windows", cf.map_windows, "Map due/ready times to morning and afternoon classes");
  convert->add_option("--p-ground", cf.p_ground, "Embed a two-point scenario space with this grounding probability");
  convert->add_option("--p-break", cf.p_break, "Breakdown probability of the two-point space");
  convert->add_option("--break-fraction", cf.break_fraction, "Share of customers that break in the breakdown point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (*solve) return cmd_solve(sf);
    if (*compare) return cmd_compare(c_instance, c_scen, c_samples, c_seed, c_threads, c_out);
    if (*speedup) return cmd_speedup(pf);
    if (*render) return cmd_render(r_report, r_instance, r_svg);
    if (*sim) return cmd_simulate(s_report, s_instance, s_scen, s_samples, s_seed, s_threads, s_out);
    if (*convert) return cmd_convert(cf);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
