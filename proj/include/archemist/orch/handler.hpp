#pragma once

#include <optional>
#include <string>

#include "archemist/sim/lab.hpp"
#include "archemist/state/authority.hpp"

namespace archemist::orch {

enum class HandlerStatus { idle, executing, done, faulted };

std::string_view to_string(HandlerStatus s);

/// Per-device task. The control loop steps every handler once per pass: `collect` turns a
/// ready reply (or an expired deadline) into a journaled outcome, `dispatch` sends the
/// operation for newly assigned work. A handler only ever touches its own target.
class Handler {
 public:
  explicit Handler(std::string target) : target_(std::move(target)) {}
  virtual ~Handler() = default;

  const std::string& target() const { return target_; }
  HandlerStatus status() const { return status_; }
  std::optional<Tick> deadline() const;

  virtual bool collect(state::StateAuthority& authority, sim::Lab& lab, Tick now) = 0;
  virtual bool dispatch(state::StateAuthority& authority, sim::Lab& lab, Tick now) = 0;

 protected:
  struct InFlight {
    sim::CorrelationId correlation = 0;
    std::optional<Tick> deadline;
    SampleId sample = 0;
    std::string node;
    JobId job = 0;
  };

  /// Ready reply, a synthetic timeout, or nothing yet.
  std::optional<sim::Reply> await(sim::Lab& lab, Tick now);

  std::string target_;
  HandlerStatus status_ = HandlerStatus::idle;
  std::optional<InFlight> inflight_;
};

class StationHandler : public Handler {
 public:
  using Handler::Handler;
  bool collect(state::StateAuthority& authority, sim::Lab& lab, Tick now) override;
  bool dispatch(state::StateAuthority& authority, sim::Lab& lab, Tick now) override;
};

class RobotHandler : public Handler {
 public:
  using Handler::Handler;
  bool collect(state::StateAuthority& authority, sim::Lab& lab, Tick now) override;
  bool dispatch(state::StateAuthority& authority, sim::Lab& lab, Tick now) override;
};

/// Request parameters for an operation spec: materials and text by name, quantities as {value, unit}.
nlohmann::json request_params(const recipe::OperationSpec& spec);

}  // namespace archemist::orch
