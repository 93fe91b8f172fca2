#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "archemist/common.hpp"
#include "archemist/recipe/recipe.hpp"

namespace archemist::state {

using recipe::Phase;

inline constexpr std::string_view kLimbo = "limbo";

struct Material {
  std::string name;
  Phase phase = Phase::solid;
  Unit unit = Unit::mg;   // mg for solids, mL for liquids
  double density = 0.0;   // g/mL, liquids only
  double initial = 0.0;
  double remaining = 0.0;

  friend bool operator==(const Material&, const Material&) = default;
};

struct TopologyNode {
  std::string id;
  std::string site;   // stations sharing a site are served by the fixed arm working there
  bool dock = false;  // hand-over point for mobile robots

  friend bool operator==(const TopologyNode&, const TopologyNode&) = default;
};

struct TopologyEdge {
  std::string from;
  std::string to;
  Tick cost = 0;
  bool oneway = false;

  friend bool operator==(const TopologyEdge&, const TopologyEdge&) = default;
};

/// Named lab locations with tick-cost edges.
struct Topology {
  std::vector<TopologyNode> nodes;
  std::vector<TopologyEdge> edges;

  const TopologyNode* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  /// Shortest-path tick cost, nullopt when unreachable.
  std::optional<Tick> distance(std::string_view from, std::string_view to) const;
  /// Dock node of a site, or nullopt when the site has none.
  std::optional<std::string> dock_of(std::string_view site) const;

  friend bool operator==(const Topology&, const Topology&) = default;
};

enum class ParamType { solid, liquid, quantity, text };

struct ParamSchema {
  std::string name;
  ParamType type = ParamType::text;
  std::optional<Dimension> dimension;
  bool required = true;

  friend bool operator==(const ParamSchema&, const ParamSchema&) = default;
};

enum class ReadingEffect {
  none,
  consume,       // moves `value` of the material named by `param` from stock into the vial
  evaporate,     // removes `value` grams of liquid from the vial
  set_property,  // stores the reading as a vial property
};

struct ReadingSchema {
  std::string name;
  std::string unit;
  ReadingEffect effect = ReadingEffect::none;
  std::string param;

  friend bool operator==(const ReadingSchema&, const ReadingSchema&) = default;
};

/// Typed description of a device action: its parameters and the readings it reports.
struct OperationDescriptor {
  std::string name;
  std::vector<ParamSchema> params;
  std::vector<ReadingSchema> readings;

  const ReadingSchema* reading(std::string_view name) const;

  friend bool operator==(const OperationDescriptor&, const OperationDescriptor&) = default;
};

struct StationModel {
  std::string id;
  std::string type_name;
  std::string location;
  bool operational = true;
  bool safety_stop = false;
  bool available = true;
  std::vector<OperationDescriptor> supported_ops;
  std::optional<SampleId> assigned_sample;
  std::vector<std::pair<SampleId, std::string>> processed_list;  // (sample, outcome id)
  Tick timeout_ticks = 0;
  std::map<std::string, double> params;

  const OperationDescriptor* op(std::string_view name) const;
  bool healthy() const { return operational && !safety_stop; }

  friend bool operator==(const StationModel&, const StationModel&) = default;
};

enum class JobKind { transport, manipulate };

std::string_view to_string(JobKind k);
std::optional<JobKind> parse_job_kind(std::string_view s);

struct RobotJob {
  JobId id = 0;
  JobKind kind = JobKind::transport;
  SampleId sample = 0;
  std::string from;
  std::string to;
  int attempts = 0;

  JobKind required_capability() const { return kind; }

  friend bool operator==(const RobotJob&, const RobotJob&) = default;
};

struct RobotModel {
  std::string id;
  std::string type_name;
  std::string location;
  bool mobile = false;
  std::set<JobKind> capabilities;
  bool operational = true;
  bool safety_stop = false;
  std::optional<RobotJob> assigned_job;
  std::vector<JobId> processed_list;
  Tick timeout_ticks = 0;
  std::map<std::string, double> params;

  bool healthy() const { return operational && !safety_stop; }

  friend bool operator==(const RobotModel&, const RobotModel&) = default;
};

struct OperationOutcome {
  std::string output_name;
  std::string station_or_robot;
  std::string op_name;
  std::string node;
  bool success = true;
  std::string reason;
  Readings readings;
  Tick timestamp = 0;

  friend bool operator==(const OperationOutcome&, const OperationOutcome&) = default;
};

struct Transfer {
  JobId job = 0;
  std::string robot;
  JobKind kind = JobKind::transport;
  std::string from;
  std::string to;
  bool success = true;
  std::string reason;
  Tick tick = 0;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

enum class AssignmentKind { unassigned, station, robot, complete, failed };

std::string_view to_string(AssignmentKind k);

struct Assignment {
  AssignmentKind kind = AssignmentKind::unassigned;
  std::string target;  // station or robot id

  bool terminal() const { return kind == AssignmentKind::complete || kind == AssignmentKind::failed; }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Sample {
  SampleId id = 0;
  std::size_t recipe_index = 0;
  std::shared_ptr<const recipe::Recipe> recipe;
  std::map<std::string, double> contents;    // material -> quantity in the material's unit
  std::map<std::string, double> evaporated;  // material -> quantity lost from the vial
  std::map<std::string, double> properties;
  std::vector<OperationOutcome> history;     // station operations only, append-only
  std::vector<Transfer> transfers;           // robot moves
  std::string location;
  std::string flow_cursor;
  Assignment assignment;
  std::string terminal_reason;
  Tick submitted_at = 0;
  std::optional<Tick> finished_at;

  /// Node the sample is heading to: the cursor, or the successor of `start`.
  const std::string& effective_node() const;
  std::size_t visits(std::string_view node) const;

  friend bool operator==(const Sample& a, const Sample& b);
};

enum class Severity { notify, halt };

std::string_view to_string(Severity s);

enum class RuleKind { material_below, failed_samples_at_least };

struct AlertRule {
  std::string id;
  RuleKind kind = RuleKind::material_below;
  std::string material;
  double threshold = 0.0;  // in the material's unit, or a sample count
  Severity severity = Severity::notify;

  friend bool operator==(const AlertRule&, const AlertRule&) = default;
};

struct Alert {
  AlertId id = 0;
  std::string rule_id;
  Severity severity = Severity::notify;
  Revision revision_raised = 0;
  std::string message;
  bool acknowledged = false;

  friend bool operator==(const Alert&, const Alert&) = default;
};

struct RecipeEntry {
  std::string text;  // canonical serialization
  std::shared_ptr<const recipe::Recipe> recipe;
};

/// The authoritative aggregate. Mutated only through apply_event.
struct WorkflowState {
  Topology topology;
  std::vector<AlertRule> alert_rules;
  std::map<std::string, Material> materials;
  std::map<std::string, StationModel> stations;
  std::map<std::string, RobotModel> robots;
  std::map<SampleId, Sample> samples;
  std::deque<RobotJob> robot_job_queue;
  std::vector<Alert> alerts;
  std::set<std::string> active_rules;
  std::vector<RecipeEntry> recipes;
  nlohmann::json scenario = nlohmann::json::object();
  bool paused = false;
  bool operator_halt = false;
  Tick clock = 0;
  Revision revision = 0;
  SampleId next_sample_id = 1;
  JobId next_job_id = 1;
  AlertId next_alert_id = 1;

  /// Operator halt or any unacknowledged halt-severity alert.
  bool halted() const;
  bool queued(SampleId sample) const;
  const RobotJob* queued_job(SampleId sample) const;
  std::size_t count(AssignmentKind kind) const;

  friend bool operator==(const WorkflowState& a, const WorkflowState& b);
};

using StatePtr = std::shared_ptr<const WorkflowState>;

}  // namespace archemist::state
