#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "archemist/orch/engine.hpp"
#include "archemist/state/authority.hpp"

namespace archemist::gateway {

struct Response {
  int status = 200;
  nlohmann::json body;
};

/// Transport-independent implementation of the operator API. Reads come from snapshots;
/// mutations run on the engine's control loop.
class GatewayService {
 public:
  GatewayService(state::StateAuthority& authority, orch::Engine& engine, std::string default_location);
  ~GatewayService();
  GatewayService(const GatewayService&) = delete;
  GatewayService& operator=(const GatewayService&) = delete;

  Response get_state() const;
  /// {recipe, count?, location?} -> 201 {sample_ids}; 422 diagnostics; 409 while halted.
  Response submit(const nlohmann::json& body);
  /// {command: pause|resume|halt}; repeating a command changes nothing.
  Response control(const nlohmann::json& body);
  Response ack(const std::string& alert_id);
  Response schema() const;

  /// Stream events with revision > `after`, waiting up to `timeout` for the first one.
  std::vector<nlohmann::json> events_after(Revision after, std::chrono::milliseconds timeout) const;

 private:
  state::StateAuthority& authority_;
  orch::Engine& engine_;
  std::string default_location_;
  int subscription_ = 0;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<nlohmann::json> log_;  // every committed record since the service started
  Revision first_logged_ = 0;
};

}  // namespace archemist::gateway
