#pragma once

#include <json.hpp>

#include "archemist/state/workflow_state.hpp"

namespace archemist::state {

nlohmann::json to_json(const OperationOutcome& o);
OperationOutcome outcome_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RobotJob& j);
RobotJob job_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Readings& r);
Readings readings_from_json(const nlohmann::json& j);

/// Lossless, deterministic serialization (doubles round-trip exactly).
nlohmann::json to_json(const WorkflowState& s);
WorkflowState state_from_json(const nlohmann::json& j);

}  // namespace archemist::state
