#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gadop/matrix.hpp"

namespace gadop {

// All quantities use km, kg, hours and S$. Location 0 is the depot;
// customer at position k of Instance::customers sits at location k + 1.

enum class WindowClass { None, Morning, Afternoon };

struct Customer {
  int id = 0;  // 1..c', equal to its location index
  double package_weight_kg = 1.0;
  WindowClass window_class = WindowClass::None;
};

// Truck speed is either one scalar or a full per-arc matrix.
struct Speed {
  double scalar = 50.0;
  std::optional<Matrix> per_arc;

  double at(std::size_t from, std::size_t to) const { return per_arc ? (*per_arc)(from, to) : scalar; }
};

struct TruckSpec {
  int id = 0;
  double initial_cost = 280.0;
  double capacity_kg = 1060.0;
  double daily_distance_km = 200.0;
  double daily_time_h = 8.0;
  double dropoff_time_h = 0.25;
  Speed speed_kmh;
};

struct DroneSpec {
  int id = 0;
  double initial_cost = 100.0;
  double capacity_kg = 2.0;
  double daily_distance_km = 150.0;
  double trip_distance_km = 15.0;
  // Only consulted by time-window constraints; no default is assumed.
  std::optional<double> speed_kmh;
};

struct CostModel {
  Matrix truck_arc_cost;                     // per arc (i', j'), any truck
  std::vector<double> drone_roundtrip_cost;  // per location, entry 0 unused
  double penalty = 20.0;
  double repair = 50.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Instance {
  std::string name;
  std::vector<Customer> customers;
  std::vector<TruckSpec> trucks;
  std::vector<DroneSpec> drones;
  Matrix distances_km;  // (c'+1) x (c'+1)
  CostModel costs;
  double morning_limit_h = 0.0;
  double afternoon_limit_h = 0.0;
  // Optional map coordinates (km), one per location; used for rendering.
  std::vector<Point> coordinates;

  std::size_t num_customers() const { return customers.size(); }
  std::size_t num_trucks() const { return trucks.size(); }
  std::size_t num_drones() const { return drones.size(); }

  // Round-trip depot -> customer -> depot distance for customer position c.
  double roundtrip_km(std::size_t c) const { return distances_km(0, c + 1) + distances_km(c + 1, 0); }
  double drone_cost(std::size_t c) const { return costs.drone_roundtrip_cost[c + 1]; }
  bool has_time_windows() const;
};

struct Violation {
  std::string field;
  std::string rule;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate(const Instance& instance);

// Throws InvalidInstance naming the first violation, if any.
void require_valid(const Instance& instance);

inline constexpr double kFuelPriceFactor = 1.05;
inline constexpr double kFuelConsumptionFactor = 0.1;
inline constexpr double kDroneCostPerKm = 0.005;

// Truck arc cost k * 1.05 * 0.1 and drone round-trip cost 0.005 * (k_i0 + k_0i).
CostModel default_cost_model(const Matrix& distances_km, double penalty = 20.0, double repair = 50.0);

// Euclidean distance matrix from coordinates; not rounded.
Matrix euclidean_distances(const std::vector<Point>& points);

}  // namespace gadop
