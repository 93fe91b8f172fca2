#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "archemist/common.hpp"
#include "archemist/sim/rng.hpp"

namespace archemist::sim {

class World;

enum class FaultKind { taring_timeout, misplace_vial, safety_stop };

std::string_view to_string(FaultKind k);
std::optional<FaultKind> parse_fault_kind(std::string_view s);

using CorrelationId = std::uint64_t;

/// Construction parameters handed to a plugin's device factory.
struct DeviceSpec {
  std::string id;
  std::string type_name;
  std::string location;
  std::map<std::string, double> params;

  double param(const std::string& name, double fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  }
};

struct Request {
  CorrelationId id = 0;
  std::string device;
  std::string op;
  std::string idempotency_key;
  SampleId sample = 0;
  nlohmann::json params;
  Tick sent_at = 0;
};

struct Reply {
  CorrelationId id = 0;
  bool success = true;
  std::string reason;
  Readings readings;
  nlohmann::json extra = nlohmann::json::object();
  Tick ready_at = 0;
};

struct ExecContext {
  World& world;
  Rng& rng;
  std::optional<FaultKind> fault;
  Tick now = 0;
};

struct Execution {
  Reply reply;
  Tick service_ticks = 0;
};

/// Simulated instrument or robot behind a bus endpoint.
class Device {
 public:
  explicit Device(DeviceSpec spec) : spec_(std::move(spec)) {}
  virtual ~Device() = default;

  const DeviceSpec& spec() const { return spec_; }

  virtual Execution execute(const Request& request, ExecContext& ctx) = 0;

 private:
  DeviceSpec spec_;
};

}  // namespace archemist::sim
