#include "archemist/gateway/service.hpp"

#include <charconv>

#include "archemist/error.hpp"
#include "archemist/gateway/view.hpp"

namespace archemist::gateway {

using nlohmann::json;

namespace {

Response error(int status, const std::string& message) { return {status, {{"error", message}}}; }

}  // namespace

GatewayService::GatewayService(state::StateAuthority& authority, orch::Engine& engine, std::string default_location)
    : authority_(authority), engine_(engine), default_location_(std::move(default_location)) {
  first_logged_ = authority_.revision() + 1;
  subscription_ = authority_.subscribe([this](const state::StatePtr&, const state::JournalRecord& rec) {
    std::lock_guard lock(mu_);
    log_.push_back(json::parse(rec.payload()));
    cv_.notify_all();
  });
}

GatewayService::~GatewayService() { authority_.unsubscribe(subscription_); }

Response GatewayService::get_state() const { return {200, state_view(*authority_.snapshot())}; }

Response GatewayService::schema() const { return {200, schemas()}; }

Response GatewayService::submit(const json& body) {
  if (!body.is_object() || !body.contains("recipe") || !body.at("recipe").is_string())
    return error(400, "body must be an object with a 'recipe' string");
  int count = 1;
  if (body.contains("count")) {
    if (!body.at("count").is_number_integer() || body.at("count").get<int>() < 1)
      return error(400, "'count' must be an integer >= 1");
    count = body.at("count").get<int>();
  }
  std::string location = body.value("location", default_location_);
  const std::string text = body.at("recipe").get<std::string>();

  return engine_.call([&](Tick now) -> Response {
    state::StatePtr s = authority_.snapshot();
    if (s->halted()) return error(409, "system is halted; acknowledge halt alerts or resume first");
    if (!s->topology.contains(location)) return error(400, "unknown location '" + location + "'");
    auto parsed = state::check_recipe(*s, recipe::RecipeDoc{text, "<request>"});
    if (!parsed.ok()) {
      json diags = json::array();
      for (const auto& d : parsed.diagnostics) diags.push_back(to_json(d));
      return {422, {{"diagnostics", diags}}};
    }
    std::string canonical = recipe::serialize(*parsed.recipe);
    json ids = json::array();
    for (int i = 0; i < count; ++i) {
      SampleId id = authority_.snapshot()->next_sample_id;
      authority_.commit(state::events::submit(id, canonical, location, now));
      ids.push_back(id);
    }
    return {201, {{"sample_ids", ids}}};
  });
}

Response GatewayService::control(const json& body) {
  if (!body.is_object() || !body.contains("command") || !body.at("command").is_string())
    return error(400, "body must be an object with a 'command' string");
  auto cmd = state::parse_control(body.at("command").get<std::string>());
  if (!cmd) return error(400, "command must be pause, resume or halt");
  return engine_.call([&](Tick now) -> Response {
    state::StatePtr s = authority_.snapshot();
    bool changes = (*cmd == state::ControlCommand::pause && !s->paused) ||
                   (*cmd == state::ControlCommand::halt && !s->operator_halt) ||
                   (*cmd == state::ControlCommand::resume && (s->paused || s->operator_halt));
    if (changes) authority_.commit(state::events::control(*cmd, now));
    s = authority_.snapshot();
    return {200, {{"paused", s->paused}, {"halted", s->halted()}, {"revision", s->revision}}};
  });
}

Response GatewayService::ack(const std::string& alert_id) {
  AlertId id = 0;
  auto r = std::from_chars(alert_id.data(), alert_id.data() + alert_id.size(), id);
  if (r.ec != std::errc() || r.ptr != alert_id.data() + alert_id.size()) return error(404, "unknown alert");
  return engine_.call([&](Tick now) -> Response {
    state::StatePtr s = authority_.snapshot();
    auto it = std::find_if(s->alerts.begin(), s->alerts.end(), [&](const state::Alert& a) { return a.id == id; });
    if (it == s->alerts.end()) return error(404, "unknown alert " + alert_id);
    if (!it->acknowledged) authority_.commit(state::events::ack(id, now));
    s = authority_.snapshot();
    return {200, {{"alert", id}, {"acknowledged", true}, {"halted", s->halted()}}};
  });
}

std::vector<json> GatewayService::events_after(Revision after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  auto available = [&] { return !log_.empty() && log_.back().at("rev").get<Revision>() > after; };
  cv_.wait_for(lock, timeout, available);
  std::vector<json> out;
  std::size_t start = after + 1 > first_logged_ ? after + 1 - first_logged_ : 0;
  for (std::size_t i = start; i < log_.size(); ++i) out.push_back(log_[i]);
  return out;
}

}  // namespace archemist::gateway
