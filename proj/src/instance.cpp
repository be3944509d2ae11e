#include "gadop/instance.hpp"

#include <cmath>
#include <string>

#include "gadop/errors.hpp"

namespace gadop {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string at(const std::string& base, std::size_t k) { return base + "[" + std::to_string(k) + "]"; }

}  // namespace

bool Instance::has_time_windows() const {
  for (const auto& c : customers) {
    if (c.window_class != WindowClass::None) return true;
  }
  return false;
}

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto flag = [&](std::string field, std::string rule) { out.push_back({std::move(field), std::move(rule)}); };

  const std::size_t n = inst.customers.size();
  const std::size_t locations = n + 1;

  for (std::size_t k = 0; k < n; ++k) {
    const auto& c = inst.customers[k];
    if (c.id != static_cast<int>(k) + 1) flag(at("customers", k) + ".id", "ids must be 1..c' in order");
    if (!std::isfinite(c.package_weight_kg) || c.package_weight_kg < 0.0) {
      flag(at("customers", k) + ".package_weight_kg", "negative weight");
    } else if (c.package_weight_kg == 0.0) {
      flag(at("customers", k) + ".package_weight_kg", "weight must be positive");
    }
  }

  for (std::size_t t = 0; t < inst.trucks.size(); ++t) {
    const auto& tr = inst.trucks[t];
    const auto base = at("trucks", t);
    if (!std::isfinite(tr.initial_cost) || tr.initial_cost < 0.0) flag(base + ".initial_cost", "negative cost");
    if (!positive_finite(tr.capacity_kg)) flag(base + ".capacity_kg", "limit must be finite and > 0");
    if (!positive_finite(tr.daily_distance_km)) flag(base + ".daily_distance_km", "limit must be finite and > 0");
    if (!positive_finite(tr.daily_time_h)) flag(base + ".daily_time_h", "limit must be finite and > 0");
    if (!std::isfinite(tr.dropoff_time_h) || tr.dropoff_time_h < 0.0) {
      flag(base + ".dropoff_time_h", "negative dropoff time");
    }
    if (tr.speed_kmh.per_arc) {
      const auto& m = *tr.speed_kmh.per_arc;
      if (m.rows() != locations || m.cols() != locations) {
        flag(base + ".speed_kmh", "matrix dimensions must be c'+1");
      } else {
        for (std::size_t i = 0; i < locations; ++i)
          for (std::size_t j = 0; j < locations; ++j)
            if (i != j && !positive_finite(m(i, j))) {
              flag(base + ".speed_kmh", "speed must be finite and > 0");
              i = locations;
              break;
            }
      }
    } else if (!positive_finite(tr.speed_kmh.scalar)) {
      flag(base + ".speed_kmh", "speed must be finite and > 0");
    }
  }

  for (std::size_t d = 0; d < inst.drones.size(); ++d) {
    const auto& dr = inst.drones[d];
    const auto base = at("drones", d);
    if (!std::isfinite(dr.initial_cost) || dr.initial_cost < 0.0) flag(base + ".initial_cost", "negative cost");
    if (!positive_finite(dr.capacity_kg)) flag(base + ".capacity_kg", "limit must be finite and > 0");
    if (!positive_finite(dr.daily_distance_km)) flag(base + ".daily_distance_km", "limit must be finite and > 0");
    if (!positive_finite(dr.trip_distance_km)) flag(base + ".trip_distance_km", "limit must be finite and > 0");
    if (dr.trip_distance_km > dr.daily_distance_km) {
      flag(base + ".trip_distance_km", "trip limit exceeds daily limit");
    }
    if (dr.speed_kmh && !positive_finite(*dr.speed_kmh)) flag(base + ".speed_kmh", "speed must be finite and > 0");
    if (!dr.speed_kmh && inst.has_time_windows()) {
      flag(base + ".speed_kmh", "drone speed required when time windows are present");
    }
  }

  const auto& k = inst.distances_km;
  if (k.rows() != locations || k.cols() != locations) {
    flag("distances_km", "matrix dimensions must be c'+1");
  } else {
    bool bad_entry = false;
    for (std::size_t i = 0; i < locations; ++i) {
      if (k(i, i) != 0.0) flag(at("distances_km", i) + "[" + std::to_string(i) + "]", "nonzero diagonal");
      for (std::size_t j = 0; j < locations; ++j) {
        if (!bad_entry && (!std::isfinite(k(i, j)) || k(i, j) < 0.0)) {
          flag(at("distances_km", i) + "[" + std::to_string(j) + "]", "NaN or negative distance");
          bad_entry = true;
        }
      }
    }
  }

  const auto& cm = inst.costs;
  if (!std::isfinite(cm.penalty) || cm.penalty < 0.0) flag("costs.penalty", "negative penalty");
  if (!std::isfinite(cm.repair) || cm.repair < 0.0) flag("costs.repair", "negative repair cost");
  if (cm.truck_arc_cost.rows() != locations || cm.truck_arc_cost.cols() != locations) {
    flag("costs.truck_arc_cost", "matrix dimensions must be c'+1");
  } else {
    for (double v : cm.truck_arc_cost.data()) {
      if (!std::isfinite(v) || v < 0.0) {
        flag("costs.truck_arc_cost", "negative arc cost");
        break;
      }
    }
  }
  if (cm.drone_roundtrip_cost.size() != locations) {
    flag("costs.drone_roundtrip_cost", "length must be c'+1");
  } else {
    for (double v : cm.drone_roundtrip_cost) {
      if (!std::isfinite(v) || v < 0.0) {
        flag("costs.drone_roundtrip_cost", "negative drone cost");
        break;
      }
    }
  }

  if (!std::isfinite(inst.morning_limit_h) || inst.morning_limit_h < 0.0) {
    flag("morning_limit_h", "negative limit");
  }
  if (!std::isfinite(inst.afternoon_limit_h) || inst.afternoon_limit_h < 0.0) {
    flag("afternoon_limit_h", "negative limit");
  }
  if (!inst.coordinates.empty() && inst.coordinates.size() != locations) {
    flag("coordinates", "length must be c'+1");
  }
  return out;
}

void require_valid(const Instance& instance) {
  const auto v = validate(instance);
  if (!v.empty()) throw InvalidInstance(v.front().field + ": " + v.front().rule);
}

CostModel default_cost_model(const Matrix& k, double penalty, double repair) {
  CostModel cm;
  cm.truck_arc_cost = Matrix(k.rows(), k.cols());
  for (std::size_t i = 0; i < k.rows(); ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) cm.truck_arc_cost(i, j) = k(i, j) * kFuelPriceFactor * kFuelConsumptionFactor;
  cm.drone_roundtrip_cost.assign(k.rows(), 0.0);
  for (std::size_t i = 1; i < k.rows(); ++i) cm.drone_roundtrip_cost[i] = kDroneCostPerKm * (k(i, 0) + k(0, i));
  cm.penalty = penalty;
  cm.repair = repair;
  return cm;
}

Matrix euclidean_distances(const std::vector<Point>& pts) {
  Matrix k(pts.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (i != j) k(i, j) = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
  return k;
}

}  // namespace gadop
