#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "archemist/orch/handler.hpp"
#include "archemist/sim/lab.hpp"
#include "archemist/state/authority.hpp"

namespace archemist::orch {

struct EngineOptions {
  double speed = 0.0;         // simulated ticks per wall second; 0 runs as fast as possible
  bool stop_when_idle = true;  // false keeps the loop alive for gateway commands
};

struct RunReport {
  enum class Stop { finished, stalled, tick_limit, stopped };
  Stop stop = Stop::finished;
  Tick ticks = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
};

std::string_view to_string(RunReport::Stop s);

/// The control loop. Each tick runs monitor, handler collection, alert evaluation, campaign
/// submission, processor, scheduler and handler dispatch until nothing changes, then jumps to
/// the next tick at which a reply lands, a deadline expires or a device status changes.
class Engine {
 public:
  Engine(state::StateAuthority& authority, sim::Lab& lab, EngineOptions options = {});

  /// Submits `runs` samples of `recipe_text` one after another, each once the previous one
  /// has terminated. Samples already in state count towards `runs` (resumed campaigns).
  void set_campaign(std::string recipe_text, int runs, std::string location);

  Tick now() const { return now_.load(); }
  const std::vector<std::unique_ptr<Handler>>& handlers() const { return handlers_; }

  /// One control-loop pass to fixpoint at the current tick. Returns true if anything was committed.
  bool settle();
  /// Next tick with pending activity, if any.
  std::optional<Tick> next_activity() const;

  RunReport run();
  void stop();

  /// Runs `fn` on the control loop (inline when the loop is not running) and returns its result.
  template <class F>
  auto call(F fn) -> std::invoke_result_t<F, Tick> {
    using R = std::invoke_result_t<F, Tick>;
    if (!running_.load()) {
      std::lock_guard lock(step_mu_);
      return fn(now_.load());
    }
    auto task = std::make_shared<std::packaged_task<R(Tick)>>(std::move(fn));
    auto fut = task->get_future();
    {
      std::lock_guard lock(cmd_mu_);
      commands_.push_back([task](Tick t) { (*task)(t); });
    }
    cmd_cv_.notify_all();
    while (fut.wait_for(std::chrono::milliseconds(20)) != std::future_status::ready) {
      if (!running_.load()) {
        std::lock_guard lock(step_mu_);
        drain_commands();
      }
    }
    return fut.get();
  }

 private:
  bool drain_commands();
  bool commit_all(const std::vector<state::Event>& events);
  bool campaign_pass();
  bool work_left(const state::WorkflowState& s) const;

  state::StateAuthority& authority_;
  sim::Lab& lab_;
  EngineOptions options_;
  std::vector<std::unique_ptr<Handler>> handlers_;
  std::atomic<Tick> now_{0};
  std::atomic<bool> running_{false};
  std::atomic<bool> stop_{false};
  std::mutex step_mu_;
  std::mutex cmd_mu_;
  std::condition_variable cmd_cv_;
  std::deque<std::function<void(Tick)>> commands_;

  std::string campaign_recipe_;
  int campaign_runs_ = 0;
  std::string campaign_location_;
};

}  // namespace archemist::orch
