#include "archemist/app/session.hpp"

#include "archemist/error.hpp"
#include "archemist/persist/recovery.hpp"

namespace archemist::app {

std::string canonical_recipe(const std::string& text, const std::string& path) {
  auto parsed = recipe::parse_recipe(recipe::RecipeDoc{text, path});
  if (!parsed.ok()) {
    std::string msg;
    for (const auto& d : parsed.diagnostics) msg += "\n" + recipe::format(d, path);
    throw Error(ErrorCode::SchemaMismatch, "recipe does not validate:" + msg);
  }
  return recipe::serialize(*parsed.recipe);
}

Session::Session(const state::PluginRegistry& registry, SessionOptions o)
    : authority_(std::make_unique<state::StateAuthority>(registry)) {
  persist::OpenOptions jopts;
  jopts.durable = o.durable;
  sim::Scenario scenario = o.scenario;

  if (o.resume) {
    if (o.journal_path.empty()) throw Error(ErrorCode::IoError, "resume needs a journal path");
    journal_ = persist::Journal::open(o.journal_path, persist::OpenMode::resume, jopts);
    auto rec = persist::recover(journal_->records(), o.journal_path, registry);
    scenario = sim::scenario_from_json(rec.state.scenario);
    if (o.recipe_text.empty() && !rec.state.recipes.empty()) o.recipe_text = rec.state.recipes.back().text;
    authority_->restore(std::move(rec.state));
    persist::attach(*authority_, *journal_);
    for (const auto& e : persist::in_flight_resets(*authority_->snapshot())) authority_->commit(e);
  } else {
    // Fail on unknown types before anything is written.
    state::WorkflowState probe = state::init_from_config(o.config, registry);
    (void)probe;
    if (!o.journal_path.empty()) {
      journal_ = persist::Journal::open(o.journal_path, persist::OpenMode::fresh, jopts);
      persist::attach(*authority_, *journal_);
    }
    authority_->commit(state::events::init(o.config, sim::to_json(scenario)));
  }

  state::StatePtr s = authority_->snapshot();
  location_ = scenario.start_location;
  if (location_.empty()) {
    for (const auto& n : s->topology.nodes)
      if (n.dock) {
        location_ = n.id;
        break;
      }
  }
  lab_ = std::make_unique<sim::Lab>(*s, registry, scenario);
  engine_ = std::make_unique<orch::Engine>(*authority_, *lab_, o.engine);
  int runs = o.runs >= 0 ? o.runs : scenario.runs;
  if (!o.recipe_text.empty() && runs > 0) engine_->set_campaign(o.recipe_text, runs, location_);
}

Session::~Session() = default;

}  // namespace archemist::app
