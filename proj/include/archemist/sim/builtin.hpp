#pragma once

#include "archemist/state/registry.hpp"

namespace archemist::sim {

/// Registers the simulated instruments and robots of the two case-study workflows.
void register_builtin_plugins(state::PluginRegistry& registry);

/// Registry pre-loaded with the built-in plugins.
state::PluginRegistry builtin_registry();

}  // namespace archemist::sim
