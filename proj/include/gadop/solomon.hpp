#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gadop/instance.hpp"

namespace gadop {

struct SolomonRow {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
  double demand = 0.0;
  double ready = 0.0;
  double due = 0.0;
  double service = 0.0;
  friend bool operator==(const SolomonRow&, const SolomonRow&) = default;
};

struct SolomonData {
  std::string name;
  int vehicles = 0;
  double capacity = 0.0;
  std::vector<SolomonRow> rows;  // rows[0] is the depot
  friend bool operator==(const SolomonData&, const SolomonData&) = default;
};

// Throws MissingSection when the VEHICLE or CUSTOMER block is absent or
// truncated, ParseError with a 1-based line number for malformed rows.
SolomonData parse_solomon(const std::string& text);
SolomonData read_solomon_file(const std::string& path);

// Standard layout; numbers are written in shortest round-trip form.
std::string serialize_solomon(const SolomonData& data);

// Omitted values take the experiment defaults listed in the README.
struct SolomonParams {
  std::optional<double> drone_initial_cost;      // 100
  std::optional<double> drone_capacity_kg;       // 2
  std::optional<double> drone_daily_distance_km; // 150
  std::optional<double> drone_trip_distance_km;  // 15
  std::optional<double> drone_speed_kmh;         // unset
  std::optional<double> truck_initial_cost;      // 280
  std::optional<double> truck_capacity_kg;       // 1060
  std::optional<double> truck_daily_distance_km; // 200
  std::optional<double> truck_daily_time_h;      // 8
  std::optional<double> truck_speed_kmh;         // 50
  std::optional<double> dropoff_time_h;          // 0.25
  std::optional<double> package_weight_kg;       // 1
  std::optional<double> penalty;                 // 20
  std::optional<double> repair;                  // 50
  std::size_t trucks = 1;
  std::size_t drones = 3;
  double coordinate_scale = 1.0;  // km per Solomon coordinate unit
  // Customers due in the first half of the depot horizon become morning
  // customers, those ready in the second half afternoon customers.
  bool map_time_windows = false;
  double morning_limit_h = 4.0;
  double afternoon_limit_h = 4.0;
};

// `subset` lists Solomon customer numbers in the order they become customer
// positions; empty means every customer. Throws UnknownCustomer.
Instance to_instance(const SolomonData& data, const std::vector<int>& subset, const SolomonParams& params = {});

}  // namespace gadop
