#include "archemist/orch/monitor.hpp"

namespace archemist::orch {

std::string monitor_rule(const std::string& device) { return "monitor." + device; }

namespace {

void check(std::vector<state::Event>& out, const state::WorkflowState& s, const std::string& id, bool operational,
           bool safety_stop, bool busy, const StatusProbe& probe, Tick tick) {
  sim::DeviceStatus now = probe(id);
  if (now.operational != operational || now.safety_stop != safety_stop)
    out.push_back(state::events::device_status(id, now.operational, now.safety_stop, tick));
  const bool healthy = now.operational && !now.safety_stop;
  const std::string rule = monitor_rule(id);
  const bool raised = s.active_rules.count(rule) != 0;
  if (!healthy && busy && !raised) {
    std::string why = now.safety_stop ? "safety stop" : "not operational";
    out.push_back(state::events::raise_alert(rule, state::Severity::halt, id + " reports " + why + " while working",
                                             tick));
  } else if (healthy && raised) {
    out.push_back(state::events::clear_rule(rule, tick));
  }
}

}  // namespace

std::vector<state::Event> monitor_tick(const state::WorkflowState& s, const StatusProbe& probe, Tick tick) {
  std::vector<state::Event> out;
  for (const auto& [id, st] : s.stations)
    check(out, s, id, st.operational, st.safety_stop, st.assigned_sample.has_value(), probe, tick);
  for (const auto& [id, r] : s.robots)
    check(out, s, id, r.operational, r.safety_stop, r.assigned_job.has_value(), probe, tick);
  return out;
}

}  // namespace archemist::orch
