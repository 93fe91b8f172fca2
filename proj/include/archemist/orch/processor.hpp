#pragma once

#include <optional>
#include <string>
#include <vector>

#include "archemist/state/events.hpp"

namespace archemist::orch {

struct Decision {
  enum class Kind { assign_to_station, enqueue_robot_job, mark_complete, mark_failed, no_op };

  Kind kind = Kind::no_op;
  SampleId sample = 0;
  std::string station;
  std::string node;
  state::RobotJob job;
  std::string reason;

  friend bool operator==(const Decision&, const Decision&) = default;
};

std::string_view to_string(Decision::Kind k);

/// One decision per unassigned, non-terminal sample without a queued job, in sample id order.
/// Pure; returns only no_op decisions while the system is halted or paused.
std::vector<Decision> processor_tick(const state::WorkflowState& s);

/// Next robot job that brings a vial at `from` closer to `to`:
/// same site -> manipulate; off the site's dock -> manipulate to the dock; else transport
/// to the destination site's dock (or the destination itself when that site has no dock).
std::optional<state::RobotJob> plan_move(const state::Topology& topology, SampleId sample, const std::string& from,
                                         const std::string& to);

/// Journal event for a decision; nullopt for no_op.
std::optional<state::Event> to_event(const Decision& d, Tick tick);

}  // namespace archemist::orch
