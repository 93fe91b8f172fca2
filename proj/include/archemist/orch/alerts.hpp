#pragma once

#include <vector>

#include "archemist/state/events.hpp"

namespace archemist::orch {

/// Side-effect free test of one rule against a state.
bool rule_holds(const state::AlertRule& rule, const state::WorkflowState& s);

/// Edge-triggered: raises an alert for each rule that has just become true and re-arms rules
/// that are no longer true. Rules already raised produce nothing.
std::vector<state::Event> evaluate_alerts(const state::WorkflowState& s, Tick tick);

}  // namespace archemist::orch
