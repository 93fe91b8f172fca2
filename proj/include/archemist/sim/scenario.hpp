#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "archemist/sim/device.hpp"

namespace archemist::sim {

/// One scheduled fault: on a device's nth request, or with seeded probability per request.
struct FaultSpec {
  std::string device;
  FaultKind kind = FaultKind::taring_timeout;
  std::optional<std::uint64_t> nth_request;
  double probability = 0.0;
  Tick duration = 0;  // safety_stop only

  friend bool operator==(const FaultSpec&, const FaultSpec&) = default;
};

/// Status change published on a device's status topic at a given tick.
struct StatusEvent {
  std::string device;
  Tick at = 0;
  bool operational = true;
  bool safety_stop = false;
  Tick duration = 0;  // 0: lasts until the next status event for the device

  friend bool operator==(const StatusEvent&, const StatusEvent&) = default;
};

struct Scenario {
  std::uint64_t seed = 1;
  int runs = 1;
  std::string start_location;  // empty: first dock node of the topology
  std::vector<FaultSpec> faults;
  std::vector<StatusEvent> status_events;
  std::map<std::string, std::map<std::string, double>> physics;  // device id -> param overrides
  Tick max_ticks = 10'000'000;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws Error{ScenarioError}.
Scenario parse_scenario(const std::string& text, const std::string& path = "<scenario>");
Scenario load_scenario_file(const std::string& path);

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

}  // namespace archemist::sim
