#pragma once

#include <json.hpp>

#include "archemist/recipe/diagnostic.hpp"
#include "archemist/state/workflow_state.hpp"

namespace archemist::gateway {

inline constexpr int kSchemaVersion = 1;

/// Operator read model built from exactly one snapshot revision.
nlohmann::json state_view(const state::WorkflowState& s);

/// Per-sample series of one reading across the sample's history, e.g. the balance mass trace.
nlohmann::json reading_traces(const state::WorkflowState& s, const std::string& reading);

nlohmann::json to_json(const recipe::Diagnostic& d);

/// JSON schemas for the request and response bodies.
nlohmann::json schemas();

}  // namespace archemist::gateway
