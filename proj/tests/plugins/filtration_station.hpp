#pragma once

#include "archemist/state/registry.hpp"

namespace plugins {

/// Vacuum filtration unit: separates the undissolved solid and reports the filtrate volume.
void register_filtration_station(archemist::state::PluginRegistry& registry);

}  // namespace plugins
