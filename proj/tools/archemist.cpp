// archemist: run a simulated lab, validate recipes, replay journals.
// Exit codes: 0 ok, 1 validation failure, 2 runtime error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "archemist/app/session.hpp"
#include "archemist/error.hpp"
#include "archemist/gateway/http.hpp"
#include "archemist/gateway/service.hpp"
#include "archemist/gateway/view.hpp"
#include "archemist/persist/recovery.hpp"
#include "archemist/sim/builtin.hpp"
#include "archemist/state/events.hpp"

namespace {

using namespace archemist;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

orch::Engine* g_engine = nullptr;

void on_signal(int) {
  if (g_engine) g_engine->stop();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_speed(const std::string& s) {
  if (s == "max") return 0.0;
  try {
    double v = std::stod(s);
    if (v > 0) return v;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError("--speed", "expected a positive number or 'max'");
}

struct RunArgs {
  std::string config, recipe, scenario, journal, serve, speed = "max";
  bool resume = false;
  int runs = -1;
};

int cmd_run(const RunArgs& a) {
  auto registry = sim::builtin_registry();
  app::SessionOptions o;
  if (!a.resume) {
    if (a.config.empty() || a.recipe.empty()) {
      std::cerr << "run: --config and --recipe are required unless --resume is given\n";
      return kInvalid;
    }
    o.config = state::load_config_file(a.config);
    if (!a.scenario.empty()) o.scenario = sim::load_scenario_file(a.scenario);
  }
  if (!a.recipe.empty()) {
    auto parsed = recipe::load_recipe_file(a.recipe);
    if (!parsed.ok()) {
      for (const auto& d : parsed.diagnostics) std::cerr << recipe::format(d, a.recipe) << "\n";
      return kInvalid;
    }
    o.recipe_text = recipe::serialize(*parsed.recipe);
  }
  o.runs = a.runs;
  o.journal_path = a.journal;
  o.resume = a.resume;
  o.engine.speed = parse_speed(a.speed);
  o.engine.stop_when_idle = a.serve.empty();

  app::Session session(registry, o);
  if (!o.recipe_text.empty()) {
    auto checked = state::check_recipe(*session.authority().snapshot(), recipe::RecipeDoc{o.recipe_text, a.recipe});
    if (!checked.ok()) {
      for (const auto& d : checked.diagnostics) std::cerr << recipe::format(d, a.recipe) << "\n";
      return kInvalid;
    }
  }

  std::unique_ptr<gateway::GatewayService> service;
  std::unique_ptr<gateway::HttpServer> http;
  if (!a.serve.empty()) {
    auto [host, port] = gateway::parse_address(a.serve);
    service = std::make_unique<gateway::GatewayService>(session.authority(), session.engine(), session.start_location());
    http = std::make_unique<gateway::HttpServer>(*service);
    int bound = http->start(host, port);
    if (bound < 0) {
      std::cerr << "run: cannot listen on " << a.serve << "\n";
      return kRuntime;
    }
    std::cerr << "serving on http://" << host << ":" << bound << "\n";
  }

  g_engine = &session.engine();
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  auto report = session.run();
  g_engine = nullptr;
  if (http) http->stop();

  auto s = session.authority().snapshot();
  for (const auto& [id, smp] : s->samples) {
    std::cout << "sample " << id << ": " << state::to_string(smp.assignment.kind);
    if (smp.finished_at) std::cout << " after " << (*smp.finished_at - smp.submitted_at) << " ticks";
    if (!smp.terminal_reason.empty()) std::cout << " (" << smp.terminal_reason << ")";
    std::cout << "\n";
  }
  std::cout << "stop: " << orch::to_string(report.stop) << ", ticks: " << report.ticks
            << ", completed: " << report.completed << ", failed: " << report.failed
            << ", revision: " << s->revision << "\n";
  if (report.stop == orch::RunReport::Stop::stalled || report.stop == orch::RunReport::Stop::tick_limit)
    return kRuntime;
  return kOk;
}

int cmd_validate(const std::string& path, const std::string& config) {
  auto parsed = recipe::load_recipe_file(path);
  recipe::DiagnosticList diags = parsed.diagnostics;
  if (parsed.ok() && !config.empty()) {
    auto registry = sim::builtin_registry();
    auto s = state::init_from_config(state::load_config_file(config), registry);
    diags = state::check_recipe(s, recipe::RecipeDoc{slurp(path), path}).diagnostics;
  }
  for (const auto& d : diags) std::cerr << recipe::format(d, path) << "\n";
  if (!diags.empty()) return kInvalid;
  std::cout << path << ": ok\n";
  return kOk;
}

int cmd_replay(const std::string& path, const std::string& reading) {
  auto registry = sim::builtin_registry();
  auto rec = persist::recover_file(path, registry);
  nlohmann::json out = gateway::state_view(rec.state);
  if (!reading.empty()) out["traces"] = {{reading, gateway::reading_traces(rec.state, reading)}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"ARChemist workflow engine with a simulated laboratory"};
  cli.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = cli.add_subcommand("run", "Boot the lab and run a recipe campaign");
  run_cmd->add_option("--config", run.config, "Lab configuration (YAML)");
  run_cmd->add_option("--recipe", run.recipe, "Recipe file (YAML)");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file: seed, runs, faults, physics");
  run_cmd->add_option("--speed", run.speed, "Simulated ticks per second, or 'max'");
  run_cmd->add_option("--serve", run.serve, "Serve the operator API on host:port and keep running");
  run_cmd->add_option("--journal", run.journal, "Journal file");
  run_cmd->add_flag("--resume", run.resume, "Recover from --journal and continue");
  run_cmd->add_option("--runs", run.runs, "Number of samples (overrides the scenario)");

  std::string validate_path, validate_config;
  auto* validate_cmd = cli.add_subcommand("validate", "Parse and flow-check a recipe");
  validate_cmd->add_option("recipe", validate_path, "Recipe file")->required();
  validate_cmd->add_option("--config", validate_config, "Also check stations and operations against a lab");

  std::string replay_path, replay_reading = "mass";
  auto* replay_cmd = cli.add_subcommand("replay", "Recover a journal and print the final state");
  replay_cmd->add_option("journal", replay_path, "Journal file")->required();
  replay_cmd->add_option("--trace", replay_reading, "Reading to trace per sample (default: mass)");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*validate_cmd) return cmd_validate(validate_path, validate_config);
    if (*replay_cmd) return cmd_replay(replay_path, replay_reading);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ScenarioError ||
                   e.code() == ErrorCode::SchemaMismatch
               ? kInvalid
               : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
