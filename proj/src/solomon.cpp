#include "gadop/solomon.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gadop/errors.hpp"

namespace gadop {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double number(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ParseError(line, "expected a number, got '" + tok + "'");
  return v;
}

bool starts_with(const std::vector<std::string>& toks, const char* word) { return !toks.empty() && toks[0] == word; }

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

SolomonData parse_solomon(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l)) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(l);
    }
  }
  SolomonData data;
  std::size_t k = 0;
  const auto next_nonblank = [&]() {
    while (k < lines.size() && split(lines[k]).empty()) ++k;
    return k < lines.size();
  };
  if (!next_nonblank()) throw MissingSection("empty Solomon file");
  if (!starts_with(split(lines[k]), "VEHICLE")) {
    data.name = split(lines[k])[0];
    ++k;
  }
  if (!next_nonblank() || !starts_with(split(lines[k]), "VEHICLE")) throw MissingSection("VEHICLE section not found");
  ++k;
  if (!next_nonblank() || !starts_with(split(lines[k]), "NUMBER")) throw MissingSection("VEHICLE header not found");
  ++k;
  if (!next_nonblank()) throw MissingSection("VEHICLE values not found");
  {
    const auto toks = split(lines[k]);
    if (toks.size() != 2) throw ParseError(k + 1, "expected vehicle count and capacity");
    data.vehicles = static_cast<int>(number(toks[0], k + 1));
    data.capacity = number(toks[1], k + 1);
    ++k;
  }
  if (!next_nonblank() || !starts_with(split(lines[k]), "CUSTOMER")) throw MissingSection("CUSTOMER section not found");
  ++k;
  if (!next_nonblank() || !starts_with(split(lines[k]), "CUST")) throw MissingSection("CUSTOMER header not found");
  ++k;
  for (; k < lines.size(); ++k) {
    const auto toks = split(lines[k]);
    if (toks.empty()) continue;
    if (toks.size() != 7) throw ParseError(k + 1, "expected 7 fields, got " + std::to_string(toks.size()));
    SolomonRow r;
    r.id = static_cast<int>(number(toks[0], k + 1));
    r.x = number(toks[1], k + 1);
    r.y = number(toks[2], k + 1);
    r.demand = number(toks[3], k + 1);
    r.ready = number(toks[4], k + 1);
    r.due = number(toks[5], k + 1);
    r.service = number(toks[6], k + 1);
    data.rows.push_back(r);
  }
  if (data.rows.empty()) throw MissingSection("CUSTOMER table has no rows");
  return data;
}

SolomonData read_solomon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_solomon(ss.str());
}

std::string serialize_solomon(const SolomonData& d) {
  std::ostringstream os;
  os << (d.name.empty() ? "UNNAMED" : d.name) << "\n\nVEHICLE\nNUMBER     CAPACITY\n  " << d.vehicles << "         "
     << shortest(d.capacity) << "\n\nCUSTOMER\n"
     << "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME\n\n";
  for (const auto& r : d.rows) {
    os << "  " << r.id << ' ' << shortest(r.x) << ' ' << shortest(r.y) << ' ' << shortest(r.demand) << ' '
       << shortest(r.ready) << ' ' << shortest(r.due) << ' ' << shortest(r.service) << '\n';
  }
  return os.str();
}

Instance to_instance(const SolomonData& data, const std::vector<int>& subset, const SolomonParams& prm) {
  if (data.rows.empty()) throw MissingSection("Solomon data has no depot row");
  std::vector<const SolomonRow*> picked;
  if (subset.empty()) {
    for (std::size_t k = 1; k < data.rows.size(); ++k) picked.push_back(&data.rows[k]);
  } else {
    for (int id : subset) {
      const SolomonRow* hit = nullptr;
      for (std::size_t k = 1; k < data.rows.size() && !hit; ++k)
        if (data.rows[k].id == id) hit = &data.rows[k];
      if (!hit) throw UnknownCustomer("customer " + std::to_string(id) + " is not in " + data.name);
      picked.push_back(hit);
    }
  }
  Instance inst;
  inst.name = data.name;
  const double s = prm.coordinate_scale;
  inst.coordinates.push_back({data.rows[0].x * s, data.rows[0].y * s});
  const double horizon = data.rows[0].due;
  for (std::size_t k = 0; k < picked.size(); ++k) {
    Customer c;
    c.id = static_cast<int>(k + 1);
    c.package_weight_kg = prm.package_weight_kg.value_or(1.0);
    if (prm.map_time_windows) {
      if (picked[k]->due <= horizon / 2.0) {
        c.window_class = WindowClass::Morning;
      } else if (picked[k]->ready >= horizon / 2.0) {
        c.window_class = WindowClass::Afternoon;
      }
    }
    inst.customers.push_back(c);
    inst.coordinates.push_back({picked[k]->x * s, picked[k]->y * s});
  }
  inst.distances_km = euclidean_distances(inst.coordinates);
  inst.costs = default_cost_model(inst.distances_km, prm.penalty.value_or(20.0), prm.repair.value_or(50.0));
  for (std::size_t t = 0; t < prm.trucks; ++t) {
    TruckSpec tr;
    tr.id = static_cast<int>(t + 1);
    tr.initial_cost = prm.truck_initial_cost.value_or(280.0);
    tr.capacity_kg = prm.truck_capacity_kg.value_or(1060.0);
    tr.daily_distance_km = prm.truck_daily_distance_km.value_or(200.0);
    tr.daily_time_h = prm.truck_daily_time_h.value_or(8.0);
    tr.dropoff_time_h = prm.dropoff_time_h.value_or(0.25);
    tr.speed_kmh.scalar = prm.truck_speed_kmh.value_or(50.0);
    inst.trucks.push_back(tr);
  }
  for (std::size_t d = 0; d < prm.drones; ++d) {
    DroneSpec dr;
    dr.id = static_cast<int>(d + 1);
    dr.initial_cost = prm.drone_initial_cost.value_or(100.0);
    dr.capacity_kg = prm.drone_capacity_kg.value_or(2.0);
    dr.daily_distance_km = prm.drone_daily_distance_km.value_or(150.0);
    dr.trip_distance_km = prm.drone_trip_distance_km.value_or(15.0);
    dr.speed_kmh = prm.drone_speed_kmh;
    inst.drones.push_back(dr);
  }
  if (prm.map_time_windows) {
    inst.morning_limit_h = prm.morning_limit_h;
    inst.afternoon_limit_h = prm.afternoon_limit_h;
  }
  return inst;
}

}  // namespace gadop
