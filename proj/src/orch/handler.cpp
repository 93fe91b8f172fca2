#include "archemist/orch/handler.hpp"

#include "archemist/error.hpp"
#include "archemist/orch/outcome.hpp"

namespace archemist::orch {

std::string_view to_string(HandlerStatus s) {
  switch (s) {
    case HandlerStatus::idle: return "idle";
    case HandlerStatus::executing: return "executing";
    case HandlerStatus::done: return "done";
    case HandlerStatus::faulted: return "faulted";
  }
  return "idle";
}

nlohmann::json request_params(const recipe::OperationSpec& spec) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& p : spec.properties) {
    if (p.kind == recipe::ParamKind::quantity)
      j[p.name] = {{"value", p.quantity.value}, {"unit", std::string(symbol(p.quantity.unit))}};
    else
      j[p.name] = p.text;
  }
  return j;
}

std::optional<Tick> Handler::deadline() const {
  if (!inflight_) return std::nullopt;
  return inflight_->deadline;
}

std::optional<sim::Reply> Handler::await(sim::Lab& lab, Tick now) {
  if (auto r = lab.take(inflight_->correlation, now)) return r;
  if (inflight_->deadline && now >= *inflight_->deadline) {
    lab.cancel(inflight_->correlation);
    sim::Reply r;
    r.id = inflight_->correlation;
    r.success = false;
    r.reason = "timeout";
    r.ready_at = now;
    return r;
  }
  return std::nullopt;
}

bool StationHandler::dispatch(state::StateAuthority& authority, sim::Lab& lab, Tick now) {
  if (inflight_) return false;
  state::StatePtr s = authority.snapshot();
  const auto& st = s->stations.at(target_);
  if (!st.assigned_sample) {
    status_ = HandlerStatus::idle;
    return false;
  }
  const auto& smp = s->samples.at(*st.assigned_sample);
  const auto* node = smp.recipe->flow.find(smp.flow_cursor);
  sim::Request req;
  req.device = target_;
  req.op = node->task->op_name;
  req.sample = smp.id;
  req.params = request_params(*node->task);
  req.idempotency_key = std::to_string(smp.id) + ":" + smp.flow_cursor + ":" + std::to_string(smp.history.size());
  InFlight f;
  f.sample = smp.id;
  f.node = smp.flow_cursor;
  f.correlation = lab.send(req, s, st.processed_list.size() + 1, now);
  if (st.timeout_ticks > 0) f.deadline = now + st.timeout_ticks;
  inflight_ = f;
  status_ = HandlerStatus::executing;
  return true;
}

bool StationHandler::collect(state::StateAuthority& authority, sim::Lab& lab, Tick now) {
  if (!inflight_) return false;
  auto reply = await(lab, now);
  if (!reply) return false;
  InFlight f = *inflight_;
  inflight_.reset();
  state::StatePtr s = authority.snapshot();
  const auto& st = s->stations.at(target_);
  if (st.assigned_sample != f.sample) {  // work was taken back (recovery reset)
    status_ = HandlerStatus::idle;
    return false;
  }
  const auto& smp = s->samples.at(f.sample);
  const auto& spec = *smp.recipe->flow.find(f.node)->task;
  state::OperationOutcome o;
  o.output_name = spec.output.name;
  o.station_or_robot = target_;
  o.op_name = spec.op_name;
  o.node = f.node;
  o.success = reply->success;
  o.reason = reply->reason;
  o.readings = reply->readings;
  o.timestamp = now;
  try {
    bool edge = outcome_to_success(o, spec, smp.history);
    authority.commit(state::events::station_outcome(f.sample, o, edge));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SchemaMismatch) throw;
    o.success = false;
    o.reason = std::string("schema_mismatch: ") + e.what();
    o.readings.clear();
    authority.commit(state::events::station_outcome(f.sample, o, false));
  }
  status_ = reply->success ? HandlerStatus::done : HandlerStatus::faulted;
  return true;
}

bool RobotHandler::dispatch(state::StateAuthority& authority, sim::Lab& lab, Tick now) {
  if (inflight_) return false;
  state::StatePtr s = authority.snapshot();
  const auto& r = s->robots.at(target_);
  if (!r.assigned_job) {
    status_ = HandlerStatus::idle;
    return false;
  }
  const auto& job = *r.assigned_job;
  sim::Request req;
  req.device = target_;
  req.op = std::string(state::to_string(job.kind));
  req.sample = job.sample;
  req.params = {{"from", job.from}, {"to", job.to}};
  req.idempotency_key =
      std::to_string(job.sample) + ":job" + std::to_string(job.id) + ":a" + std::to_string(job.attempts);
  InFlight f;
  f.sample = job.sample;
  f.job = job.id;
  f.correlation = lab.send(req, s, r.processed_list.size() + 1, now);
  if (r.timeout_ticks > 0) f.deadline = now + r.timeout_ticks;
  inflight_ = f;
  status_ = HandlerStatus::executing;
  return true;
}

bool RobotHandler::collect(state::StateAuthority& authority, sim::Lab& lab, Tick now) {
  if (!inflight_) return false;
  auto reply = await(lab, now);
  if (!reply) return false;
  InFlight f = *inflight_;
  inflight_.reset();
  state::StatePtr s = authority.snapshot();
  const auto& r = s->robots.at(target_);
  if (!r.assigned_job || r.assigned_job->id != f.job) {
    status_ = HandlerStatus::idle;
    return false;
  }
  std::string where = reply->extra.value("robot_location", r.location);
  authority.commit(state::events::robot_outcome(f.job, target_, reply->success, reply->reason, where, now));
  status_ = reply->success ? HandlerStatus::done : HandlerStatus::faulted;
  return true;
}

}  // namespace archemist::orch
