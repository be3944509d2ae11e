#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "gadop/instance.hpp"
#include "gadop/lshape.hpp"
#include "gadop/plan.hpp"
#include "gadop/scenario.hpp"
#include "gadop/simulate.hpp"

namespace gadop {

using Json = nlohmann::ordered_json;

// Native instance document; see docs/formats.md.
Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

Json scenarios_to_json(const ScenarioSpace& scenarios);
ScenarioSpace scenarios_from_json(const Json& j, const Instance& instance);

struct InstanceDocument {
  Instance instance;
  std::optional<ScenarioSpace> scenarios;  // from the "scenarios" key
};

// Throws Error when the file cannot be read or is not valid JSON.
InstanceDocument read_instance_document(const std::string& path);
void write_instance_document(const std::string& path, const Instance& instance, const ScenarioSpace* scenarios);

// Vehicle -> ordered customer ids, plus the truck arc list.
Json plan_to_json(const FirstStagePlan& plan, const Instance& instance);
FirstStagePlan plan_from_json(const Json& j, const Instance& instance);

Json cost_to_json(const CostBreakdown& cost);
Json feedback_to_json(const FeedbackParameters& f);
Json trace_to_json(const IterationTrace& t);
Json histogram_to_json(const Histogram& h);

// FNV-1a 64 over the compact dump of instance_to_json (plus scenarios when given).
std::uint64_t instance_hash(const Instance& instance, const ScenarioSpace* scenarios = nullptr);
std::string hex64(std::uint64_t v);

}  // namespace gadop
