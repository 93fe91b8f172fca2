#include "archemist/sim/bus.hpp"

#include "archemist/error.hpp"

namespace archemist::sim {

void Bus::attach(std::unique_ptr<Device> device) {
  std::string id = device->spec().id;
  if (!devices_.emplace(id, std::move(device)).second)
    throw Error(ErrorCode::ConfigError, "bus already has an endpoint for '" + id + "'");
}

bool Bus::has(std::string_view device) const { return devices_.find(device) != devices_.end(); }

Device& Bus::device(std::string_view id) {
  auto it = devices_.find(id);
  if (it == devices_.end()) throw Error(ErrorCode::ConfigError, "no bus endpoint for '" + std::string(id) + "'");
  return *it->second;
}

CorrelationId Bus::send(Request request, ExecContext& ctx) {
  CorrelationId id = next_id_++;
  auto key = std::make_pair(request.device, request.idempotency_key);
  Reply reply;
  if (auto it = seen_.find(key); !request.idempotency_key.empty() && it != seen_.end()) {
    reply = it->second;
    reply.ready_at = std::max(reply.ready_at, request.sent_at);
  } else {
    Execution ex = device(request.device).execute(request, ctx);
    ++executions_[request.device];
    reply = std::move(ex.reply);
    reply.ready_at = request.sent_at + ex.service_ticks;
    if (!request.idempotency_key.empty()) seen_[key] = reply;
  }
  reply.id = id;
  inflight_[id] = std::move(reply);
  return id;
}

CorrelationId Bus::post(const Request& request, Reply reply, Tick service_ticks) {
  CorrelationId id = next_id_++;
  reply.id = id;
  reply.ready_at = request.sent_at + std::max<Tick>(service_ticks, 1);
  inflight_[id] = std::move(reply);
  return id;
}

std::optional<Reply> Bus::take(CorrelationId id, Tick now) {
  auto it = inflight_.find(id);
  if (it == inflight_.end() || it->second.ready_at > now) return std::nullopt;
  Reply r = std::move(it->second);
  inflight_.erase(it);
  return r;
}

void Bus::cancel(CorrelationId id) { inflight_.erase(id); }

std::optional<Tick> Bus::next_ready() const {
  std::optional<Tick> best;
  for (const auto& [_, r] : inflight_)
    if (!best || r.ready_at < *best) best = r.ready_at;
  return best;
}

std::size_t Bus::executions(std::string_view device) const {
  auto it = executions_.find(device);
  return it == executions_.end() ? 0 : it->second;
}

}  // namespace archemist::sim
