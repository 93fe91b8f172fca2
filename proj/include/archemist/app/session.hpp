#pragma once

#include <memory>
#include <string>

#include "archemist/orch/engine.hpp"
#include "archemist/persist/journal.hpp"
#include "archemist/sim/lab.hpp"
#include "archemist/sim/scenario.hpp"
#include "archemist/state/authority.hpp"
#include "archemist/state/config.hpp"

namespace archemist::app {

struct SessionOptions {
  state::Config config;
  sim::Scenario scenario;
  std::string recipe_text;   // empty on resume: reuse the journal's last recipe
  int runs = -1;             // -1: scenario.runs
  std::string journal_path;  // empty: in-memory only
  bool resume = false;       // recover from journal_path instead of starting fresh
  bool durable = true;
  orch::EngineOptions engine;
};

/// One booted lab: state authority, journal, simulated devices and the control loop.
/// A fresh session commits the init record; a resumed one replays the journal, keeps the
/// journaled scenario and hands in-flight work back to the processor.
class Session {
 public:
  /// Throws archemist::Error (ConfigError, UnknownTypeName, Locked, Corrupt, ...).
  Session(const state::PluginRegistry& registry, SessionOptions options);
  ~Session();

  state::StateAuthority& authority() { return *authority_; }
  orch::Engine& engine() { return *engine_; }
  sim::Lab& lab() { return *lab_; }
  persist::Journal* journal() { return journal_.get(); }
  const std::string& start_location() const { return location_; }

  orch::RunReport run() { return engine_->run(); }

 private:
  std::unique_ptr<state::StateAuthority> authority_;
  std::unique_ptr<persist::Journal> journal_;
  std::unique_ptr<sim::Lab> lab_;
  std::unique_ptr<orch::Engine> engine_;
  std::string location_;
};

/// Parses a recipe and returns its canonical text; throws Error{SchemaMismatch} listing diagnostics.
std::string canonical_recipe(const std::string& text, const std::string& path);

}  // namespace archemist::app
