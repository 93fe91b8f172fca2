#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "archemist/sim/device.hpp"

namespace archemist::sim {

struct DeviceStatus {
  bool operational = true;
  bool safety_stop = false;

  friend bool operator==(const DeviceStatus&, const DeviceStatus&) = default;
};

/// In-process request/reply bus with one endpoint per device. A device computes its reply
/// when the request arrives; the reply becomes visible once simulated time reaches ready_at.
/// Requests are deduplicated on (device, idempotency key).
class Bus {
 public:
  /// Throws Error{ConfigError} for a second device with the same id.
  void attach(std::unique_ptr<Device> device);
  bool has(std::string_view device) const;
  Device& device(std::string_view id);

  /// Runs the device unless the key was already seen, in which case the recorded reply is reused.
  CorrelationId send(Request request, ExecContext& ctx);
  /// Publishes a reply produced outside the device model (bus-level fault or status refusal).
  CorrelationId post(const Request& request, Reply reply, Tick service_ticks);
  /// Delivers a ready reply exactly once.
  std::optional<Reply> take(CorrelationId id, Tick now);
  void cancel(CorrelationId id);
  bool pending(CorrelationId id) const { return inflight_.count(id) != 0; }
  std::optional<Tick> next_ready() const;

  /// How many times the device model actually executed (duplicates excluded).
  std::size_t executions(std::string_view device) const;

 private:
  std::map<std::string, std::unique_ptr<Device>, std::less<>> devices_;
  std::map<CorrelationId, Reply> inflight_;
  std::map<std::pair<std::string, std::string>, Reply> seen_;
  std::map<std::string, std::size_t, std::less<>> executions_;
  CorrelationId next_id_ = 1;
};

}  // namespace archemist::sim
