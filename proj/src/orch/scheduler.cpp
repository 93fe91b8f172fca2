#include "archemist/orch/scheduler.hpp"

#include <set>

namespace archemist::orch {

bool eligible(const state::RobotModel& robot, const state::RobotJob& job, const state::Topology& topology) {
  if (!robot.healthy() || robot.assigned_job || !robot.capabilities.count(job.kind)) return false;
  if (job.kind == state::JobKind::transport) return robot.mobile;
  const auto* at = topology.find(robot.location);
  const auto* from = topology.find(job.from);
  const auto* to = topology.find(job.to);
  return at && from && to && at->site == from->site && from->site == to->site;
}

std::vector<std::pair<JobId, std::string>> schedule_robot_jobs(const state::WorkflowState& s) {
  std::vector<std::pair<JobId, std::string>> out;
  if (s.halted() || s.paused) return out;
  std::set<std::string> taken;
  for (const auto& job : s.robot_job_queue) {
    const std::string* best = nullptr;
    Tick best_distance = 0;
    for (const auto& [id, robot] : s.robots) {  // id order gives the tie-break
      if (taken.count(id) || !eligible(robot, job, s.topology)) continue;
      auto d = s.topology.distance(robot.location, job.from);
      if (!d) continue;
      if (best == nullptr || *d < best_distance) {
        best = &id;
        best_distance = *d;
      }
    }
    if (best != nullptr) {
      taken.insert(*best);
      out.emplace_back(job.id, *best);
    }
  }
  return out;
}

}  // namespace archemist::orch
