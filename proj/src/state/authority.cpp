#include "archemist/state/authority.hpp"

#include "archemist/error.hpp"

namespace archemist::state {

StateAuthority::StateAuthority(const PluginRegistry& registry)
    : registry_(registry), state_(std::make_shared<const WorkflowState>()) {}

void StateAuthority::set_sink(Sink sink) {
  std::lock_guard lock(mu_);
  sink_ = std::move(sink);
}

int StateAuthority::subscribe(Observer observer) {
  std::lock_guard lock(mu_);
  observers_.emplace(next_handle_, std::move(observer));
  return next_handle_++;
}

void StateAuthority::unsubscribe(int handle) {
  std::lock_guard lock(mu_);
  observers_.erase(handle);
}

StatePtr StateAuthority::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

Revision StateAuthority::revision() const {
  std::lock_guard lock(mu_);
  return state_->revision;
}

JournalRecord StateAuthority::commit(const Event& e, std::optional<Revision> expected) {
  std::lock_guard lock(mu_);
  if (expected && *expected != state_->revision)
    throw Error(ErrorCode::StaleRevision, "expected revision " + std::to_string(*expected) + ", state is at " +
                                              std::to_string(state_->revision));
  auto next = std::make_shared<WorkflowState>(applied(*state_, e, registry_));
  JournalRecord record{next->revision, e};
  if (sink_) sink_(record);
  state_ = next;
  for (const auto& [_, observer] : observers_) observer(state_, record);
  changed_.notify_all();
  return record;
}

void StateAuthority::restore(WorkflowState s) {
  std::lock_guard lock(mu_);
  state_ = std::make_shared<const WorkflowState>(std::move(s));
  changed_.notify_all();
}

Revision StateAuthority::wait_for(Revision after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  changed_.wait_for(lock, timeout, [&] { return state_->revision > after; });
  return state_->revision;
}

}  // namespace archemist::state
