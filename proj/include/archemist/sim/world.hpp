#pragma once

#include <map>
#include <optional>
#include <string>

#include "archemist/state/workflow_state.hpp"

namespace archemist::sim {

/// Physical view of one vial, rebuilt from the journaled sample record.
struct Vial {
  SampleId sample = 0;
  std::string location;
  std::map<std::string, double> solids_mg;
  std::map<std::string, double> liquids_ml;
  double undissolved_fraction = 1.0;

  double solid_mg() const;
  double liquid_ml() const;
};

/// Read-only physical world seen by device models at one instant. Everything the devices
/// know about vials and stock comes from state, so a restarted process sees the same world.
class World {
 public:
  explicit World(state::StatePtr state) : state_(std::move(state)) {}

  std::optional<Vial> vial(SampleId sample) const;
  std::optional<double> stock(const std::string& material) const;  // in the material's unit
  double density(const std::string& material) const;                // g/mL, 0 for solids
  double liquid_mass_g(const Vial& v) const;
  const state::Topology& topology() const { return state_->topology; }
  const state::WorkflowState& state() const { return *state_; }

 private:
  state::StatePtr state_;
};

}  // namespace archemist::sim
