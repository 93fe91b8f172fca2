#pragma once

#include <functional>
#include <string>
#include <vector>

#include "archemist/sim/bus.hpp"
#include "archemist/state/events.hpp"

namespace archemist::orch {

using StatusProbe = std::function<sim::DeviceStatus(const std::string& device)>;

/// Alert rule id the monitor uses for a faulted device.
std::string monitor_rule(const std::string& device);

/// Polls every station and robot. Emits a status event for each change, a halt alert when a
/// device with assigned work is unhealthy, and re-arms that alert once the device recovers.
std::vector<state::Event> monitor_tick(const state::WorkflowState& s, const StatusProbe& probe, Tick tick);

}  // namespace archemist::orch
