#include "archemist/orch/processor.hpp"

#include <set>

namespace archemist::orch {

using state::AssignmentKind;

std::string_view to_string(Decision::Kind k) {
  switch (k) {
    case Decision::Kind::assign_to_station: return "assign_to_station";
    case Decision::Kind::enqueue_robot_job: return "enqueue_robot_job";
    case Decision::Kind::mark_complete: return "mark_complete";
    case Decision::Kind::mark_failed: return "mark_failed";
    case Decision::Kind::no_op: return "no_op";
  }
  return "no_op";
}

std::optional<state::RobotJob> plan_move(const state::Topology& topology, SampleId sample, const std::string& from,
                                         const std::string& to) {
  const auto* a = topology.find(from);
  const auto* b = topology.find(to);
  if (a == nullptr || b == nullptr || from == to) return std::nullopt;
  state::RobotJob job;
  job.sample = sample;
  job.from = from;
  if (a->site == b->site) {
    job.kind = state::JobKind::manipulate;
    job.to = to;
    return job;
  }
  auto dock_here = topology.dock_of(a->site);
  if (dock_here && *dock_here != from) {
    job.kind = state::JobKind::manipulate;
    job.to = *dock_here;
    return job;
  }
  job.kind = state::JobKind::transport;
  job.to = topology.dock_of(b->site).value_or(to);
  return job;
}

std::vector<Decision> processor_tick(const state::WorkflowState& s) {
  std::vector<Decision> out;
  const bool blocked = s.halted() || s.paused;
  std::set<std::string> claimed;
  JobId next_job = s.next_job_id;
  for (const auto& [id, smp] : s.samples) {
    if (smp.assignment.kind != AssignmentKind::unassigned || s.queued(id)) continue;
    Decision d;
    d.sample = id;
    if (blocked || smp.location == state::kLimbo) {
      out.push_back(d);
      continue;
    }
    const std::string& node = smp.effective_node();
    if (node == recipe::kEndNode) {
      d.kind = Decision::Kind::mark_complete;
      out.push_back(d);
      continue;
    }
    if (smp.visits(node) >= static_cast<std::size_t>(smp.recipe->max_iterations)) {
      d.kind = Decision::Kind::mark_failed;
      d.reason = "failed: iteration cap reached at '" + node + "'";
      out.push_back(d);
      continue;
    }
    const auto* fn = smp.recipe->flow.find(node);
    auto st = fn ? s.stations.find(fn->station) : s.stations.end();
    if (st == s.stations.end()) {
      d.kind = Decision::Kind::mark_failed;
      d.reason = "failed: no station for node '" + node + "'";
      out.push_back(d);
      continue;
    }
    const auto& station = st->second;
    if (smp.location == station.location) {
      if (station.available && station.healthy() && !station.assigned_sample && !claimed.count(station.id)) {
        d.kind = Decision::Kind::assign_to_station;
        d.station = station.id;
        d.node = node;
        claimed.insert(station.id);
      }
      out.push_back(d);
      continue;
    }
    auto job = plan_move(s.topology, id, smp.location, station.location);
    if (!job) {
      d.kind = Decision::Kind::mark_failed;
      d.reason = "failed: no route from '" + smp.location + "' to '" + station.location + "'";
    } else {
      job->id = next_job++;
      d.kind = Decision::Kind::enqueue_robot_job;
      d.job = *job;
    }
    out.push_back(d);
  }
  return out;
}

std::optional<state::Event> to_event(const Decision& d, Tick tick) {
  namespace ev = state::events;
  switch (d.kind) {
    case Decision::Kind::assign_to_station: return ev::assign_station(d.sample, d.station, d.node, tick);
    case Decision::Kind::enqueue_robot_job: return ev::enqueue_job(d.job, tick);
    case Decision::Kind::mark_complete: return ev::mark_complete(d.sample, tick);
    case Decision::Kind::mark_failed: return ev::mark_failed(d.sample, d.reason, tick);
    case Decision::Kind::no_op: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace archemist::orch
