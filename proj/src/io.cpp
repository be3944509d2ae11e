#include "gadop/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gadop/errors.hpp"

namespace gadop {

namespace {

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInstance(std::string(what) + ": expected an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InvalidInstance(std::string(what) + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Json grid_json(const BoolGrid& g) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < g.cols(); ++c) row.push_back(g(r, c) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* window_name(WindowClass w) {
  return w == WindowClass::Morning ? "morning" : w == WindowClass::Afternoon ? "afternoon" : "none";
}

WindowClass window_from(const std::string& s) {
  if (s == "morning") return WindowClass::Morning;
  if (s == "afternoon") return WindowClass::Afternoon;
  if (s == "none") return WindowClass::None;
  throw InvalidInstance("customers.window: unknown class '" + s + "'");
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json j;
  j["name"] = inst.name;
  Json cs = Json::array();
  for (const auto& c : inst.customers)
    cs.push_back({{"id", c.id}, {"weight_kg", c.package_weight_kg}, {"window", window_name(c.window_class)}});
  j["customers"] = std::move(cs);
  Json ts = Json::array();
  for (const auto& t : inst.trucks) {
    Json tj = {{"id", t.id},
               {"initial_cost", t.initial_cost},
               {"capacity_kg", t.capacity_kg},
               {"daily_distance_km", t.daily_distance_km},
               {"daily_time_h", t.daily_time_h},
               {"dropoff_time_h", t.dropoff_time_h}};
    tj["speed_kmh"] = t.speed_kmh.per_arc ? matrix_json(*t.speed_kmh.per_arc) : Json(t.speed_kmh.scalar);
    ts.push_back(std::move(tj));
  }
  j["trucks"] = std::move(ts);
  Json ds = Json::array();
  for (const auto& d : inst.drones) {
    Json dj = {{"id", d.id},
               {"initial_cost", d.initial_cost},
               {"capacity_kg", d.capacity_kg},
               {"daily_distance_km", d.daily_distance_km},
               {"trip_distance_km", d.trip_distance_km}};
    if (d.speed_kmh) dj["speed_kmh"] = *d.speed_kmh;
    ds.push_back(std::move(dj));
  }
  j["drones"] = std::move(ds);
  j["distances_km"] = matrix_json(inst.distances_km);
  j["costs"] = {{"penalty", inst.costs.penalty},
                {"repair", inst.costs.repair},
                {"truck_arc_cost", matrix_json(inst.costs.truck_arc_cost)},
                {"drone_roundtrip_cost", inst.costs.drone_roundtrip_cost}};
  j["morning_limit_h"] = inst.morning_limit_h;
  j["afternoon_limit_h"] = inst.afternoon_limit_h;
  if (!inst.coordinates.empty()) {
    Json pts = Json::array();
    for (const auto& p : inst.coordinates) pts.push_back({p.x, p.y});
    j["coordinates"] = std::move(pts);
  }
  return j;
}

Instance instance_from_json(const Json& j) {
  try {
    Instance inst;
    inst.name = j.value("name", std::string{});
    for (const auto& c : j.at("customers")) {
      Customer cu;
      cu.id = c.at("id").get<int>();
      cu.package_weight_kg = c.value("weight_kg", 1.0);
      cu.window_class = window_from(c.value("window", std::string("none")));
      inst.customers.push_back(cu);
    }
    for (const auto& t : j.at("trucks")) {
      TruckSpec tr;
      tr.id = t.value("id", static_cast<int>(inst.trucks.size()) + 1);
      tr.initial_cost = t.value("initial_cost", tr.initial_cost);
      tr.capacity_kg = t.value("capacity_kg", tr.capacity_kg);
      tr.daily_distance_km = t.value("daily_distance_km", tr.daily_distance_km);
      tr.daily_time_h = t.value("daily_time_h", tr.daily_time_h);
      tr.dropoff_time_h = t.value("dropoff_time_h", tr.dropoff_time_h);
      if (t.contains("speed_kmh")) {
        if (t["speed_kmh"].is_array()) {
          tr.speed_kmh.per_arc = matrix_from(t["speed_kmh"], "trucks.speed_kmh");
        } else {
          tr.speed_kmh.scalar = t["speed_kmh"].get<double>();
        }
      }
      inst.trucks.push_back(std::move(tr));
    }
    for (const auto& d : j.at("drones")) {
      DroneSpec dr;
      dr.id = d.value("id", static_cast<int>(inst.drones.size()) + 1);
      dr.initial_cost = d.value("initial_cost", dr.initial_cost);
      dr.capacity_kg = d.value("capacity_kg", dr.capacity_kg);
      dr.daily_distance_km = d.value("daily_distance_km", dr.daily_distance_km);
      dr.trip_distance_km = d.value("trip_distance_km", dr.trip_distance_km);
      if (d.contains("speed_kmh")) dr.speed_kmh = d["speed_kmh"].get<double>();
      inst.drones.push_back(dr);
    }
    if (j.contains("coordinates")) {
      for (const auto& p : j["coordinates"]) inst.coordinates.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    if (j.contains("distances_km")) {
      inst.distances_km = matrix_from(j["distances_km"], "distances_km");
    } else if (!inst.coordinates.empty()) {
      inst.distances_km = euclidean_distances(inst.coordinates);
    } else {
      throw InvalidInstance("distances_km: missing and no coordinates to derive it from");
    }
    const Json costs = j.value("costs", Json::object());
    inst.costs = default_cost_model(inst.distances_km, costs.value("penalty", 20.0), costs.value("repair", 50.0));
    if (costs.contains("truck_arc_cost")) inst.costs.truck_arc_cost = matrix_from(costs["truck_arc_cost"], "costs.truck_arc_cost");
    if (costs.contains("drone_roundtrip_cost")) {
      inst.costs.drone_roundtrip_cost = costs["drone_roundtrip_cost"].get<std::vector<double>>();
    }
    inst.morning_limit_h = j.value("morning_limit_h", 0.0);
    inst.afternoon_limit_h = j.value("afternoon_limit_h", 0.0);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(std::string("instance document: ") + e.what());
  }
}

Json scenarios_to_json(const ScenarioSpace& sc) {
  Json j;
  Json tk = Json::array();
  for (const auto& w : sc.takeoff) {
    Json g = Json::array();
    for (bool b : w.grounded) g.push_back(b ? 1 : 0);
    tk.push_back({{"grounded", std::move(g)}, {"probability", w.probability}});
  }
  Json bk = Json::array();
  for (const auto& l : sc.breakdown) bk.push_back({{"breaks", grid_json(l.breaks)}, {"probability", l.probability}});
  j["takeoff"] = std::move(tk);
  j["breakdown"] = std::move(bk);
  return j;
}

ScenarioSpace scenarios_from_json(const Json& j, const Instance& inst) {
  try {
    ScenarioSpace sc;
    for (const auto& w : j.at("takeoff")) {
      TakeoffScenario t;
      for (const auto& g : w.at("grounded")) t.grounded.push_back(g.get<int>() != 0);
      t.probability = w.at("probability").get<double>();
      sc.takeoff.push_back(std::move(t));
    }
    for (const auto& l : j.at("breakdown")) {
      BreakdownScenario b;
      const auto& rows = l.at("breaks");
      b.breaks = BoolGrid(inst.num_customers(), inst.num_drones());
      if (rows.size() != inst.num_customers()) throw InvalidInstance("scenarios.breakdown.breaks: needs c' rows");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != inst.num_drones()) throw InvalidInstance("scenarios.breakdown.breaks: needs d' columns");
        for (std::size_t d = 0; d < rows[i].size(); ++d) b.breaks.set(i, d, rows[i][d].get<int>() != 0);
      }
      b.probability = l.at("probability").get<double>();
      sc.breakdown.push_back(std::move(b));
    }
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(std::string("scenario document: ") + e.what());
  }
}

InstanceDocument read_instance_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  InstanceDocument doc;
  doc.instance = instance_from_json(j);
  if (j.contains("scenarios")) doc.scenarios = scenarios_from_json(j["scenarios"], doc.instance);
  return doc;
}

void write_instance_document(const std::string& path, const Instance& inst, const ScenarioSpace* sc) {
  Json j = instance_to_json(inst);
  if (sc) j["scenarios"] = scenarios_to_json(*sc);
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

Json plan_to_json(const FirstStagePlan& p, const Instance& inst) {
  Json j;
  Json ts = Json::array();
  for (std::size_t t = 0; t < inst.num_trucks(); ++t) {
    Json route = Json::array();
    for (std::size_t loc : p.truck_tour(t)) route.push_back(loc);
    Json arcs = Json::array();
    for (std::size_t a = 0; a < p.truck_arcs[t].rows(); ++a)
      for (std::size_t b = 0; b < p.truck_arcs[t].cols(); ++b)
        if (p.truck_arcs[t](a, b)) arcs.push_back({a, b});
    ts.push_back({{"id", inst.trucks[t].id}, {"used", static_cast<bool>(p.truck_used[t])}, {"route", route},
                  {"arcs", arcs}});
  }
  Json ds = Json::array();
  for (std::size_t d = 0; d < inst.num_drones(); ++d) {
    Json seq = Json::array();
    for (std::size_t i : p.drone_sequence(d)) seq.push_back(i + 1);
    ds.push_back({{"id", inst.drones[d].id}, {"used", static_cast<bool>(p.drone_used[d])}, {"sequence", seq}});
  }
  j["trucks"] = std::move(ts);
  j["drones"] = std::move(ds);
  return j;
}

FirstStagePlan plan_from_json(const Json& j, const Instance& inst) {
  try {
    auto p = FirstStagePlan::empty(inst);
    const auto customer = [&](std::size_t id) {
      if (id < 1 || id > inst.num_customers()) throw UnknownCustomer("plan refers to customer " + std::to_string(id));
      return id - 1;
    };
    const auto& ts = j.at("trucks");
    for (std::size_t t = 0; t < ts.size() && t < inst.num_trucks(); ++t) {
      std::vector<std::size_t> route;
      for (const auto& loc : ts[t].at("route")) route.push_back(customer(loc.get<std::size_t>()));
      p.assign_truck_route(t, route);
      if (ts[t].value("used", false)) p.truck_used[t] = true;
    }
    const auto& ds = j.at("drones");
    for (std::size_t d = 0; d < ds.size() && d < inst.num_drones(); ++d) {
      std::vector<std::size_t> seq;
      for (const auto& c : ds[d].at("sequence")) seq.push_back(customer(c.get<std::size_t>()));
      p.assign_drone_sequence(d, seq);
      if (ds[d].value("used", false)) p.drone_used[d] = true;
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("plan document: ") + e.what());
  }
}

Json cost_to_json(const CostBreakdown& c) {
  return {{"truck_initial", c.truck_initial},
          {"drone_initial", c.drone_initial},
          {"truck_travel", c.truck_travel},
          {"expected_drone_travel", c.expected_drone_travel},
          {"expected_penalty", c.expected_penalty},
          {"expected_repair", c.expected_repair},
          {"total", c.total}};
}

Json feedback_to_json(const FeedbackParameters& f) {
  return {{"penalty", matrix_json(f.penalty)},
          {"travel", matrix_json(f.travel)},
          {"repair", matrix_json(f.repair)},
          {"repair_max", f.repair_max}};
}

Json trace_to_json(const IterationTrace& t) {
  Json j = {{"k", t.k},
            {"master_objective", t.master_objective},
            {"has_theta", t.has_theta},
            {"theta1", t.theta1},
            {"theta2", t.theta2},
            {"convergence_b", t.convergence_b},
            {"converged", t.converged},
            {"second_stage_costs", t.second_stage_costs},
            {"third_stage_costs", t.third_stage_costs},
            {"master_time_s", t.master_time_s},
            {"subproblem_time_s", t.subproblem_time_s},
            {"master_nodes", t.master_nodes}};
  return j;
}

Json histogram_to_json(const Histogram& h) { return {{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}}; }

std::uint64_t instance_hash(const Instance& inst, const ScenarioSpace* sc) {
  Json j = instance_to_json(inst);
  if (sc) j["scenarios"] = scenarios_to_json(*sc);
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace gadop
