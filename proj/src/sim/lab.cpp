#include "archemist/sim/lab.hpp"

#include "archemist/sim/world.hpp"

namespace archemist::sim {

namespace {

DeviceSpec spec_for(const std::string& id, const std::string& type, const std::string& location,
                    std::map<std::string, double> params, const Scenario& scenario) {
  if (auto it = scenario.physics.find(id); it != scenario.physics.end())
    for (const auto& [k, v] : it->second) params[k] = v;
  return DeviceSpec{id, type, location, std::move(params)};
}

}  // namespace

Lab::Lab(const state::WorkflowState& s, const state::PluginRegistry& registry, Scenario scenario)
    : scenario_(std::move(scenario)) {
  for (const auto& [id, st] : s.stations)
    bus_.attach(registry.require(st.type_name).make_device(spec_for(id, st.type_name, st.location, st.params, scenario_)));
  for (const auto& [id, r] : s.robots)
    bus_.attach(registry.require(r.type_name).make_device(spec_for(id, r.type_name, r.location, r.params, scenario_)));
}

std::optional<FaultSpec> Lab::fault_for(const Request& request, std::uint64_t ordinal) const {
  for (const auto& f : scenario_.faults) {
    if (f.device != request.device) continue;
    if (f.nth_request) {
      if (*f.nth_request == ordinal) return f;
    } else if (Rng::derive(scenario_.seed, request.device, request.idempotency_key + "#fault").uniform() <
               f.probability) {
      return f;
    }
  }
  return std::nullopt;
}

CorrelationId Lab::send(Request request, const state::StatePtr& snapshot, std::uint64_t ordinal, Tick now) {
  request.sent_at = now;
  DeviceStatus st = status(request.device, now);
  if (!st.operational || st.safety_stop) {
    Reply r;
    r.success = false;
    r.reason = st.safety_stop ? "safety_stop" : "not_operational";
    return bus_.post(request, r, 1);
  }
  auto fault = fault_for(request, ordinal);
  if (fault && fault->kind == FaultKind::safety_stop) {
    stopped_until_[request.device] = now + (fault->duration > 0 ? fault->duration : 60);
    Reply r;
    r.success = false;
    r.reason = "safety_stop";
    return bus_.post(request, r, 1);
  }
  World world(snapshot);
  Rng rng = Rng::derive(scenario_.seed, request.device, request.idempotency_key);
  ExecContext ctx{world, rng, fault ? std::optional<FaultKind>(fault->kind) : std::nullopt, now};
  return bus_.send(std::move(request), ctx);
}

DeviceStatus Lab::status(const std::string& device, Tick now) const {
  DeviceStatus s;
  Tick best_at = -1;
  for (const auto& e : scenario_.status_events) {
    if (e.device != device || e.at > now || e.at < best_at) continue;
    best_at = e.at;
    if (e.duration > 0 && now >= e.at + e.duration) s = DeviceStatus{};
    else s = DeviceStatus{e.operational, e.safety_stop};
  }
  if (auto it = stopped_until_.find(device); it != stopped_until_.end() && now < it->second) s.safety_stop = true;
  return s;
}

std::optional<Tick> Lab::next_event(Tick now) const {
  std::optional<Tick> best = bus_.next_ready();
  auto consider = [&](Tick t) {
    if (t > now && (!best || t < *best)) best = t;
  };
  for (const auto& e : scenario_.status_events) {
    consider(e.at);
    if (e.duration > 0) consider(e.at + e.duration);
  }
  for (const auto& [_, t] : stopped_until_) consider(t);
  return best;
}

}  // namespace archemist::sim
