#include "archemist/orch/engine.hpp"

#include <chrono>

#include "archemist/orch/alerts.hpp"
#include "archemist/orch/monitor.hpp"
#include "archemist/orch/processor.hpp"
#include "archemist/orch/scheduler.hpp"

namespace archemist::orch {

std::string_view to_string(RunReport::Stop s) {
  switch (s) {
    case RunReport::Stop::finished: return "finished";
    case RunReport::Stop::stalled: return "stalled";
    case RunReport::Stop::tick_limit: return "tick_limit";
    case RunReport::Stop::stopped: return "stopped";
  }
  return "finished";
}

Engine::Engine(state::StateAuthority& authority, sim::Lab& lab, EngineOptions options)
    : authority_(authority), lab_(lab), options_(options) {
  state::StatePtr s = authority_.snapshot();
  for (const auto& [id, _] : s->stations) handlers_.push_back(std::make_unique<StationHandler>(id));
  for (const auto& [id, _] : s->robots) handlers_.push_back(std::make_unique<RobotHandler>(id));
  now_ = s->clock;
}

void Engine::set_campaign(std::string recipe_text, int runs, std::string location) {
  campaign_recipe_ = std::move(recipe_text);
  campaign_runs_ = runs;
  campaign_location_ = std::move(location);
}

bool Engine::commit_all(const std::vector<state::Event>& events) {
  for (const auto& e : events) authority_.commit(e);
  return !events.empty();
}

bool Engine::campaign_pass() {
  if (campaign_runs_ <= 0) return false;
  state::StatePtr s = authority_.snapshot();
  if (s->samples.size() >= static_cast<std::size_t>(campaign_runs_) || s->halted() || s->paused) return false;
  for (const auto& [_, smp] : s->samples)
    if (!smp.assignment.terminal()) return false;
  authority_.commit(state::events::submit(s->next_sample_id, campaign_recipe_, campaign_location_, now_));
  return true;
}

bool Engine::settle() {
  const Tick now = now_;
  auto probe = [&](const std::string& id) { return lab_.status(id, now); };
  bool any = false;
  for (int pass = 0; pass < 10000; ++pass) {
    bool progress = commit_all(monitor_tick(*authority_.snapshot(), probe, now));
    for (auto& h : handlers_) progress |= h->collect(authority_, lab_, now);
    progress |= commit_all(evaluate_alerts(*authority_.snapshot(), now));
    progress |= campaign_pass();
    std::vector<state::Event> decided;
    for (const auto& d : processor_tick(*authority_.snapshot()))
      if (auto e = to_event(d, now)) decided.push_back(std::move(*e));
    progress |= commit_all(decided);
    std::vector<state::Event> scheduled;
    for (const auto& [job, robot] : schedule_robot_jobs(*authority_.snapshot()))
      scheduled.push_back(state::events::assign_robot(job, robot, now));
    progress |= commit_all(scheduled);
    for (auto& h : handlers_) progress |= h->dispatch(authority_, lab_, now);
    any |= progress;
    if (!progress) break;
  }
  return any;
}

std::optional<Tick> Engine::next_activity() const {
  const Tick now = now_;
  std::optional<Tick> best = lab_.next_event(now);
  for (const auto& h : handlers_)
    if (auto d = h->deadline(); d && (!best || *d < *best)) best = d;
  if (best && *best <= now) best = now + 1;
  return best;
}

bool Engine::work_left(const state::WorkflowState& s) const {
  for (const auto& [_, smp] : s.samples)
    if (!smp.assignment.terminal()) return true;
  if (campaign_runs_ > 0 && s.samples.size() < static_cast<std::size_t>(campaign_runs_)) return true;
  for (const auto& h : handlers_)
    if (h->status() == HandlerStatus::executing) return true;
  return false;
}

bool Engine::drain_commands() {
  std::deque<std::function<void(Tick)>> todo;
  {
    std::lock_guard lock(cmd_mu_);
    todo.swap(commands_);
  }
  for (auto& c : todo) c(now_);
  return !todo.empty();
}

void Engine::stop() {
  stop_ = true;
  cmd_cv_.notify_all();
}

RunReport Engine::run() {
  using clock = std::chrono::steady_clock;
  running_ = true;
  RunReport report;
  const Tick limit = lab_.scenario().max_ticks;
  const Tick started = now_;
  while (true) {
    if (stop_) {
      report.stop = RunReport::Stop::stopped;
      break;
    }
    {
      std::lock_guard lock(step_mu_);
      drain_commands();
      settle();
    }
    state::StatePtr s = authority_.snapshot();
    bool busy = work_left(*s);
    if (!busy && options_.stop_when_idle) {
      report.stop = RunReport::Stop::finished;
      break;
    }
    if (now_ >= limit) {
      report.stop = RunReport::Stop::tick_limit;
      break;
    }
    auto next = next_activity();
    if (!next) {
      if (options_.stop_when_idle) {
        report.stop = RunReport::Stop::stalled;
        break;
      }
      std::unique_lock lock(cmd_mu_);
      cmd_cv_.wait_for(lock, std::chrono::milliseconds(50), [&] { return !commands_.empty() || stop_; });
      continue;
    }
    if (options_.speed <= 0.0) {
      now_ = *next;
      continue;
    }
    auto wall_start = clock::now();
    auto span = std::chrono::duration<double>((*next - now_) / options_.speed);
    bool interrupted = false;
    {
      std::unique_lock lock(cmd_mu_);
      interrupted = cmd_cv_.wait_until(lock, wall_start + std::chrono::duration_cast<clock::duration>(span),
                                       [&] { return !commands_.empty() || stop_.load(); });
    }
    if (interrupted) {
      double elapsed = std::chrono::duration<double>(clock::now() - wall_start).count();
      now_ = std::min(*next, now_ + static_cast<Tick>(elapsed * options_.speed));
    } else {
      now_ = *next;
    }
  }
  running_ = false;
  drain_commands();
  state::StatePtr s = authority_.snapshot();
  report.ticks = s->clock - started;
  report.completed = s->count(state::AssignmentKind::complete);
  report.failed = s->count(state::AssignmentKind::failed);
  return report;
}

}  // namespace archemist::orch
