#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "archemist/state/workflow_state.hpp"

namespace archemist::orch {

/// Whether `robot` may take `job` at all: healthy, free, capable, and for manipulation
/// working on the same site as the vial.
bool eligible(const state::RobotModel& robot, const state::RobotJob& job, const state::Topology& topology);

/// FIFO over the job queue; each job goes to the eligible free robot closest to job.from,
/// ties broken by the lexicographically smaller robot id. Pure. Empty while halted or paused.
std::vector<std::pair<JobId, std::string>> schedule_robot_jobs(const state::WorkflowState& s);

}  // namespace archemist::orch
