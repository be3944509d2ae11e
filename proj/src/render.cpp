#include "gadop/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

namespace gadop {

namespace {

const char* kDroneColors[] = {"#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const FirstStagePlan& plan, const Instance& inst, const RenderOptions& opt) {
  const std::size_t n = inst.num_customers();
  std::vector<Point> pts = inst.coordinates;
  if (pts.size() != n + 1) {
    pts.assign(n + 1, Point{});
    for (std::size_t i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 1));
      const double r = inst.distances_km(0, i + 1);
      pts[i + 1] = {r * std::cos(a), r * std::sin(a)};
    }
  }
  double range = 0.0;
  std::set<double> radii;
  for (const auto& d : inst.drones) {
    radii.insert(d.trip_distance_km / 2.0);
    range = std::max(range, d.trip_distance_km / 2.0);
  }
  const Point depot = pts[0];
  double minx = depot.x - range, maxx = depot.x + range, miny = depot.y - range, maxy = depot.y + range;
  for (const auto& p : pts) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double span = std::max({maxx - minx, maxy - miny, 1e-9});
  const double scale = (opt.size_px - 2.0 * opt.margin_px) / span;
  const auto sx = [&](double x) { return opt.margin_px + (x - minx) * scale; };
  const auto sy = [&](double y) { return opt.size_px - opt.margin_px - (y - miny) * scale; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(opt.size_px) << "\" height=\""
     << fmt(opt.size_px) << "\" viewBox=\"0 0 " << fmt(opt.size_px) << ' ' << fmt(opt.size_px) << "\">\n";
  os << "<title>" << (inst.name.empty() ? "plan" : inst.name) << "</title>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (double r : radii) {
    os << "<circle class=\"range\" data-radius-km=\"" << fmt(r) << "\" cx=\"" << fmt(sx(depot.x)) << "\" cy=\""
       << fmt(sy(depot.y)) << "\" r=\"" << fmt(r * scale) << "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>\n";
  }
  for (std::size_t t = 0; t < inst.num_trucks(); ++t) {
    if (!plan.truck_used[t]) continue;
    const auto tour = plan.truck_tour(t);
    if (tour.empty()) continue;
    os << "<polyline class=\"truck\" data-truck=\"" << inst.trucks[t].id << "\" fill=\"none\" stroke=\"#1b9e77\" "
       << "stroke-width=\"2\" points=\"" << fmt(sx(depot.x)) << ',' << fmt(sy(depot.y));
    for (std::size_t loc : tour) os << ' ' << fmt(sx(pts[loc].x)) << ',' << fmt(sy(pts[loc].y));
    os << ' ' << fmt(sx(depot.x)) << ',' << fmt(sy(depot.y)) << "\"/>\n";
  }
  for (std::size_t d = 0; d < inst.num_drones(); ++d) {
    const char* color = kDroneColors[d % std::size(kDroneColors)];
    for (std::size_t i : plan.drone_sequence(d)) {
      os << "<line class=\"drone\" data-drone=\"" << inst.drones[d].id << "\" x1=\"" << fmt(sx(depot.x)) << "\" y1=\""
         << fmt(sy(depot.y)) << "\" x2=\"" << fmt(sx(pts[i + 1].x)) << "\" y2=\"" << fmt(sy(pts[i + 1].y))
         << "\" stroke=\"" << color << "\" stroke-dasharray=\"3 3\"/>\n";
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    os << "<circle class=\"customer\" cx=\"" << fmt(sx(pts[i + 1].x)) << "\" cy=\"" << fmt(sy(pts[i + 1].y))
       << "\" r=\"5\" fill=\"#333\"/>\n";
    os << "<text x=\"" << fmt(sx(pts[i + 1].x) + 7) << "\" y=\"" << fmt(sy(pts[i + 1].y) - 7)
       << "\" font-size=\"11\">" << i + 1 << "</text>\n";
  }
  os << "<rect class=\"depot\" x=\"" << fmt(sx(depot.x) - 7) << "\" y=\"" << fmt(sy(depot.y) - 7)
     << "\" width=\"14\" height=\"14\" fill=\"#c00\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace gadop
