#pragma once

#include <vector>

#include "archemist/recipe/recipe.hpp"
#include "archemist/state/workflow_state.hpp"

namespace archemist::orch {

/// Device success ANDed with the recipe's outcome predicate, if any. `prior` is the sample's
/// history before this outcome; the stability test reads earlier values of the same node from it.
/// Throws Error{SchemaMismatch} when a successful outcome lacks the predicate's reading.
bool outcome_to_success(const state::OperationOutcome& outcome, const recipe::OperationSpec& spec,
                        const std::vector<state::OperationOutcome>& prior = {});

}  // namespace archemist::orch
