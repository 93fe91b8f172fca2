#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "archemist/state/config.hpp"
#include "archemist/state/registry.hpp"
#include "archemist/state/workflow_state.hpp"

namespace archemist::state {

enum class EventKind { init, submit, assignment, outcome, monitor_event, alert, ack, control };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

/// One state mutation. Every change to WorkflowState is an Event; the journal is the list of them.
struct Event {
  EventKind kind = EventKind::init;
  Tick tick = 0;
  nlohmann::json data = nlohmann::json::object();

  friend bool operator==(const Event&, const Event&) = default;
};

/// An Event stamped with the revision it produced.
struct JournalRecord {
  Revision revision = 0;
  Event event;

  std::string payload() const;
  static JournalRecord from_payload(std::string_view payload);

  friend bool operator==(const JournalRecord&, const JournalRecord&) = default;
};

enum class ControlCommand { pause, resume, halt };

std::string_view to_string(ControlCommand c);
std::optional<ControlCommand> parse_control(std::string_view s);

namespace events {

Event init(const Config& config, const nlohmann::json& scenario);
Event submit(SampleId sample, const std::string& recipe_text, const std::string& location, Tick tick);
Event assign_station(SampleId sample, const std::string& station, const std::string& node, Tick tick);
Event enqueue_job(const RobotJob& job, Tick tick);
Event assign_robot(JobId job, const std::string& robot, Tick tick);
Event mark_complete(SampleId sample, Tick tick);
Event mark_failed(SampleId sample, const std::string& reason, Tick tick);
Event station_outcome(SampleId sample, const OperationOutcome& outcome, bool edge_success);
Event robot_outcome(JobId job, const std::string& robot, bool success, const std::string& reason,
                    const std::string& robot_location, Tick tick);
Event device_status(const std::string& device, bool operational, bool safety_stop, Tick tick);
Event reset_assignment(const std::string& target, Tick tick);
Event raise_alert(const std::string& rule_id, Severity severity, const std::string& message, Tick tick);
Event clear_rule(const std::string& rule_id, Tick tick);
Event ack(AlertId alert, Tick tick);
Event control(ControlCommand command, Tick tick);

}  // namespace events

/// Robot jobs that fail for reasons other than a lost vial are retried this many times.
inline constexpr int kMaxJobAttempts = 3;

/// Applies one event in place: validates it, mutates, bumps revision and clock.
/// Throws archemist::Error when the event does not fit the state; `s` is then unspecified.
void apply_event(WorkflowState& s, const Event& e, const PluginRegistry& registry);

/// Value-returning form; `s` is untouched on error.
WorkflowState applied(const WorkflowState& s, const Event& e, const PluginRegistry& registry);

/// Records a station's outcome for its assigned sample: history, material ledger, flow cursor.
/// `edge_success` selects the flow edge (defaults to the device's success flag).
/// Throws Error{NotAssigned} or Error{SchemaMismatch}.
WorkflowState apply_outcome(const WorkflowState& s, SampleId sample, const OperationOutcome& outcome,
                            std::optional<bool> edge_success = std::nullopt);

/// Checks readings against the operation's outcome schema; throws Error{SchemaMismatch}.
void check_readings(const OperationDescriptor& op, const OperationOutcome& outcome);

/// Parses a recipe and checks it against the configured stations and their operation descriptors.
recipe::ParseResult check_recipe(const WorkflowState& s, const recipe::RecipeDoc& doc);

}  // namespace archemist::state
