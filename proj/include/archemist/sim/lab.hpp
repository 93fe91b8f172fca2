#pragma once

#include <map>
#include <optional>
#include <string>

#include "archemist/sim/bus.hpp"
#include "archemist/sim/scenario.hpp"
#include "archemist/state/registry.hpp"

namespace archemist::sim {

/// The simulated laboratory: one bus endpoint per configured device, the scenario's seeded
/// fault schedule and the per-device status topics.
class Lab {
 public:
  /// Throws Error{UnknownTypeName} when a device type has no plugin.
  Lab(const state::WorkflowState& s, const state::PluginRegistry& registry, Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  Bus& bus() { return bus_; }

  /// `ordinal` is the 1-based count of requests the device has received over the whole run;
  /// it is derived from journaled state so that fault schedules survive a restart.
  CorrelationId send(Request request, const state::StatePtr& snapshot, std::uint64_t ordinal, Tick now);
  std::optional<Reply> take(CorrelationId id, Tick now) { return bus_.take(id, now); }
  void cancel(CorrelationId id) { bus_.cancel(id); }

  DeviceStatus status(const std::string& device, Tick now) const;
  /// Earliest tick after `now` at which a reply lands or a status changes.
  std::optional<Tick> next_event(Tick now) const;

  /// Fault chosen for a request, if any.
  std::optional<FaultSpec> fault_for(const Request& request, std::uint64_t ordinal) const;

 private:
  Scenario scenario_;
  Bus bus_;
  std::map<std::string, Tick> stopped_until_;
};

}  // namespace archemist::sim
