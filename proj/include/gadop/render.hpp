#pragma once

#include <string>

#include "gadop/instance.hpp"
#include "gadop/plan.hpp"

namespace gadop {

struct RenderOptions {
  double size_px = 800.0;
  double margin_px = 40.0;
};

// Static SVG 1.1 map: depot, customers, one polyline per used truck tour,
// radial drone trips and a per-trip range circle of radius e/2 around the
// depot. Without coordinates customers are placed on rays at their depot
// distance.
std::string render_svg(const FirstStagePlan& plan, const Instance& instance, const RenderOptions& options = {});

}  // namespace gadop
