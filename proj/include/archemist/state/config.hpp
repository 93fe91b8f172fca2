#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "archemist/state/registry.hpp"
#include "archemist/state/workflow_state.hpp"

namespace archemist::state {

struct MaterialConfig {
  std::string name;
  Phase phase = Phase::solid;
  Quantity quantity;
  double density = 0.0;
};

struct DeviceConfig {
  std::string id;
  std::string type;
  std::string location;
  Tick timeout = 0;
  std::map<std::string, double> params;
  // robots only
  bool mobile = false;
  std::vector<JobKind> capabilities;
};

struct AlertRuleConfig {
  std::string id;
  RuleKind kind = RuleKind::material_below;
  std::string material;
  std::optional<Quantity> below;
  int count = 0;
  Severity severity = Severity::notify;
};

/// Lab resources: materials, topology, stations, robots and alert rules.
struct Config {
  std::vector<MaterialConfig> materials;
  Topology topology;
  std::vector<DeviceConfig> stations;
  std::vector<DeviceConfig> robots;
  std::vector<AlertRuleConfig> alerts;
};

struct ConfigDoc {
  std::string text;
  std::string path;
};

/// Throws Error{ConfigError} on schema violations.
Config parse_config(const ConfigDoc& doc);
Config load_config_file(const std::string& path);

nlohmann::json to_json(const Config& config);
Config config_from_json(const nlohmann::json& j);

/// Builds the initial state at revision 1 with no samples.
/// Throws Error{UnknownTypeName} for unregistered station/robot types and Error{ConfigError}.
WorkflowState init_from_config(const Config& config, const PluginRegistry& registry);

}  // namespace archemist::state
