#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <mutex>
#include <optional>

#include "archemist/state/events.hpp"

namespace archemist::state {

/// Single writer of WorkflowState. Readers take immutable snapshots; writers commit events,
/// optionally guarded by the revision they based their decision on.
class StateAuthority {
 public:
  /// Called with each record before it becomes visible; throwing aborts the commit.
  using Sink = std::function<void(const JournalRecord&)>;
  using Observer = std::function<void(const StatePtr&, const JournalRecord&)>;

  explicit StateAuthority(const PluginRegistry& registry);

  void set_sink(Sink sink);
  int subscribe(Observer observer);
  void unsubscribe(int handle);

  StatePtr snapshot() const;
  Revision revision() const;
  const PluginRegistry& registry() const { return registry_; }

  /// Throws Error{StaleRevision} when `expected` no longer matches, or whatever apply_event throws.
  JournalRecord commit(const Event& e, std::optional<Revision> expected = std::nullopt);

  /// Replaces the state wholesale (recovery); does not go through the sink.
  void restore(WorkflowState s);

  /// Blocks until the revision exceeds `after` or the timeout passes. Returns the current revision.
  Revision wait_for(Revision after, std::chrono::milliseconds timeout) const;

 private:
  const PluginRegistry& registry_;
  mutable std::mutex mu_;
  mutable std::condition_variable changed_;
  StatePtr state_;
  Sink sink_;
  std::map<int, Observer> observers_;
  int next_handle_ = 1;
};

}  // namespace archemist::state
