#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "gadop/errors.hpp"
#include "gadop/generate.hpp"
#include "gadop/io.hpp"
#include "gadop/lshape.hpp"
#include "gadop/milp.hpp"
#include "gadop/render.hpp"
#include "gadop/solomon.hpp"

using namespace gadop;

namespace {

std::string data(const std::string& f) { return std::string(GADOP_DATA_DIR) + "/" + f; }

const char* kSmall =
    "TOY\n\nVEHICLE\nNUMBER     CAPACITY\n  2         200\n\nCUSTOMER\n"
    "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME\n\n"
    "    0      0         0          0          0       1000          0\n"
    "    1      3         4         10          0        400         10\n"
    "    2      6         8         10        600        900         10\n"
    "    3      1         0         10        100        700         10\n";

}  // namespace

TEST(Solomon, ParsesExcerpt) {
  const auto d = read_solomon_file(data("c101_excerpt.txt"));
  EXPECT_EQ(d.name, "C101");
  EXPECT_EQ(d.vehicles, 25);
  EXPECT_EQ(d.capacity, 200.0);
  ASSERT_EQ(d.rows.size(), 21u);
  EXPECT_EQ(d.rows[0], (SolomonRow{0, 40, 50, 0, 0, 1236, 0}));
  EXPECT_EQ(d.rows[1], (SolomonRow{1, 45, 68, 10, 912, 967, 90}));
  EXPECT_EQ(d.rows[20].id, 20);
}

TEST(Solomon, Errors) {
  EXPECT_THROW(parse_solomon("C101\n\nCUSTOMER\nCUST NO.\n 0 1 2 3 4 5 6\n"), MissingSection);
  EXPECT_THROW(parse_solomon("C101\nVEHICLE\nNUMBER CAPACITY\n 2 100\n"), MissingSection);
  std::string bad = kSmall;
  bad.replace(bad.find("    2      6"), 11, "    2      x");
  try {
    parse_solomon(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 12u);
  }
  std::string shortrow = kSmall;
  shortrow += "    4      1         0         10\n";
  try {
    parse_solomon(shortrow);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 14u);
  }
  EXPECT_THROW(read_solomon_file("/nonexistent/file.txt"), Error);
}

TEST(Solomon, RoundTrip) {
  const auto d = parse_solomon(kSmall);
  EXPECT_EQ(parse_solomon(serialize_solomon(d)), d);
  const auto c = read_solomon_file(data("c101_excerpt.txt"));
  EXPECT_EQ(parse_solomon(serialize_solomon(c)), c);
}

TEST(Solomon, ToInstanceDefaults) {
  const auto d = parse_solomon(kSmall);
  const auto inst = to_instance(d, {});
  ASSERT_EQ(inst.num_customers(), 3u);
  EXPECT_DOUBLE_EQ(inst.distances_km(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(inst.distances_km(1, 2), 5.0);
  EXPECT_EQ(inst.costs.penalty, 20.0);
  EXPECT_EQ(inst.costs.repair, 50.0);
  EXPECT_EQ(inst.num_trucks(), 1u);
  EXPECT_EQ(inst.num_drones(), 3u);
  EXPECT_EQ(inst.drones[0].initial_cost, 100.0);
  EXPECT_EQ(inst.drones[0].capacity_kg, 2.0);
  EXPECT_EQ(inst.drones[0].trip_distance_km, 15.0);
  EXPECT_EQ(inst.trucks[0].initial_cost, 280.0);
  EXPECT_EQ(inst.trucks[0].capacity_kg, 1060.0);
  EXPECT_NEAR(inst.costs.truck_arc_cost(0, 1), 5.0 * 0.105, 1e-12);
  EXPECT_NEAR(inst.drone_cost(0), 0.05, 1e-12);
  EXPECT_FALSE(inst.has_time_windows());
  EXPECT_TRUE(validate(inst).empty());
}

TEST(Solomon, ScaleAndWindows) {
  const auto d = parse_solomon(kSmall);
  SolomonParams p;
  p.coordinate_scale = 0.5;
  p.map_time_windows = true;
  p.drone_speed_kmh = 40.0;
  const auto inst = to_instance(d, {3, 1}, p);
  ASSERT_EQ(inst.num_customers(), 2u);
  EXPECT_DOUBLE_EQ(inst.distances_km(0, 2), 2.5);
  EXPECT_DOUBLE_EQ(inst.distances_km(0, 1), 0.5);
  EXPECT_EQ(inst.customers[0].window_class, WindowClass::None);
  EXPECT_EQ(inst.customers[1].window_class, WindowClass::Morning);
  const auto all = to_instance(d, {}, p);
  EXPECT_EQ(all.customers[1].window_class, WindowClass::Afternoon);
  EXPECT_THROW(to_instance(d, {7}), UnknownCustomer);
}

TEST(Solomon, ExcerptSubsetShape) {
  const auto c = read_solomon_file(data("c101_excerpt.txt"));
  std::vector<int> ids;
  for (int k = 1; k <= 20; ++k) ids.push_back(k);
  const auto inst = to_instance(c, ids);
  EXPECT_EQ(inst.distances_km.rows(), 21u);
  EXPECT_EQ(inst.distances_km.cols(), 21u);
  EXPECT_TRUE(validate(inst).empty());
}

TEST(Generator, InstancesValidate) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorOptions g;
    g.customers = 1 + seed % 7;
    g.time_windows = seed % 2 == 0;
    const auto inst = random_instance(seed, g);
    EXPECT_TRUE(validate(inst).empty()) << "seed " << seed;
    const auto sc = random_scenarios(inst, seed, {1 + seed % 3, 1 + seed % 4, 0.3, 0.3});
    EXPECT_TRUE(validate(sc, inst).empty()) << "seed " << seed;
    EXPECT_EQ(random_instance(seed, g).distances_km, inst.distances_km);
  }
}

TEST(Json, InstanceRoundTrip) {
  GeneratorOptions g;
  g.time_windows = true;
  const auto inst = random_instance(5, g);
  const auto back = instance_from_json(instance_to_json(inst));
  EXPECT_EQ(instance_to_json(back).dump(), instance_to_json(inst).dump());
  EXPECT_EQ(instance_hash(back), instance_hash(inst));
  const auto sc = random_scenarios(inst, 5);
  EXPECT_EQ(scenarios_from_json(scenarios_to_json(sc), inst), sc);
  EXPECT_NE(instance_hash(inst, &sc), instance_hash(inst));
}

TEST(Json, MinimalDocumentUsesDefaults) {
  const auto j = Json::parse(R"({"customers":[{"id":1}],"trucks":[{}],"drones":[{}],
                                 "coordinates":[[0,0],[3,4]]})");
  const auto inst = instance_from_json(j);
  EXPECT_DOUBLE_EQ(inst.distances_km(0, 1), 5.0);
  EXPECT_EQ(inst.costs.penalty, 20.0);
  EXPECT_TRUE(validate(inst).empty());
  EXPECT_THROW(instance_from_json(Json::parse(R"({"customers":[{"id":1}],"trucks":[],"drones":[]})")),
               InvalidInstance);
}

TEST(Json, DocumentFile) {
  const auto doc = read_instance_document(data("sample4.json"));
  EXPECT_EQ(doc.instance.num_customers(), 4u);
  ASSERT_TRUE(doc.scenarios.has_value());
  EXPECT_TRUE(validate(*doc.scenarios, doc.instance).empty());
  const auto path = (std::filesystem::temp_directory_path() / "gadop_doc_test.json").string();
  write_instance_document(path, doc.instance, &*doc.scenarios);
  const auto again = read_instance_document(path);
  EXPECT_EQ(again.scenarios, doc.scenarios);
  std::filesystem::remove(path);
  EXPECT_THROW(read_instance_document("/nonexistent.json"), Error);
}

TEST(Json, PlanRoundTrip) {
  GeneratorOptions g;
  g.customers = 5;
  const auto inst = random_instance(3, g);
  const auto r = run_lshape(inst, random_scenarios(inst, 3));
  const auto back = plan_from_json(plan_to_json(r.plan, inst), inst);
  EXPECT_EQ(plan_to_json(back, inst), plan_to_json(r.plan, inst));
  EXPECT_EQ(back.truck_assign, r.plan.truck_assign);
  EXPECT_EQ(back.drone_assign, r.plan.drone_assign);
  EXPECT_EQ(back.truck_arcs, r.plan.truck_arcs);
  EXPECT_NEAR(evaluate_plan(back, inst, random_scenarios(inst, 3)).total, r.cost.total, 1e-9);
  auto j = plan_to_json(r.plan, inst);
  j["drones"][0]["sequence"] = Json::array({99});
  EXPECT_THROW(plan_from_json(j, inst), Error);
}

TEST(Render, TruckPolylineAndRange) {
  const auto inst = fixtures::star({2.0, 3.0, 4.0}, 1, 1);
  auto plan = FirstStagePlan::empty(inst);
  plan.assign_truck_route(0, {0, 1, 2});
  const auto svg = render_svg(plan, inst);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(svg, m, std::regex("class=\"truck\"[^>]*points=\"([^\"]*)\"")));
  std::istringstream pts(m[1].str());
  std::string tok;
  std::size_t count = 0;
  while (pts >> tok) ++count;
  EXPECT_EQ(count, 5u);
  EXPECT_NE(svg.find("data-radius-km=\"7.50\""), std::string::npos);
  EXPECT_EQ(svg.find("class=\"drone\""), std::string::npos);
}

TEST(Render, EmptyPlanHasOnlyNodes) {
  const auto inst = fixtures::star({2.0, 3.0}, 1, 1);
  const auto svg = render_svg(FirstStagePlan::empty(inst), inst);
  EXPECT_EQ(svg.find("polyline"), std::string::npos);
  EXPECT_EQ(svg.find("class=\"drone\""), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(LpFormat, Layout) {
  milp::Problem p;
  const int x = p.add_binary(1.5, "x");
  const int y = p.add_continuous(0.0, 4.0, -2.0, "y");
  p.add_constraint({{x, 1.0}, {y, 1.0}}, milp::Sense::LessEqual, 3.0, "cap");
  std::ostringstream os;
  milp::write_lp(os, p);
  const auto s = os.str();
  EXPECT_NE(s.find("Minimize"), std::string::npos);
  EXPECT_NE(s.find("Subject To"), std::string::npos);
  EXPECT_NE(s.find("cap:"), std::string::npos);
  EXPECT_NE(s.find("General\n x"), std::string::npos);
  EXPECT_NE(s.find("End"), std::string::npos);
}
