#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "archemist/recipe/recipe.hpp"
#include "archemist/sim/builtin.hpp"
#include "archemist/state/config.hpp"
#include "archemist/state/events.hpp"

namespace testlab {

namespace fs = std::filesystem;
using namespace archemist;

inline std::string data_path(const std::string& rel) { return std::string(ARCHEMIST_DATA_DIR) + "/" + rel; }
inline std::string fixture_path(const std::string& rel) { return std::string(ARCHEMIST_FIXTURE_DIR) + "/" + rel; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline state::Config lab_config() { return state::load_config_file(data_path("config/lab.yaml")); }

inline recipe::Recipe load_recipe(const std::string& rel) {
  auto r = recipe::load_recipe_file(data_path(rel));
  if (!r.ok()) throw std::runtime_error("fixture recipe " + rel + " does not parse");
  return *r.recipe;
}

inline std::string canonical(const std::string& rel) { return recipe::serialize(load_recipe(rel)); }

/// Unique scratch directory removed on destruction.
struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("archemist-test-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

/// State at revision 1 built from the shipped lab configuration.
inline state::WorkflowState lab_state(const state::PluginRegistry& registry) {
  state::WorkflowState s;
  state::apply_event(s, state::events::init(lab_config(), nlohmann::json::object()), registry);
  return s;
}

inline void apply(state::WorkflowState& s, const state::Event& e, const state::PluginRegistry& registry) {
  state::apply_event(s, e, registry);
}

}  // namespace testlab
