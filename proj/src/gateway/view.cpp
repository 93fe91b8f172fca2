#include "archemist/gateway/view.hpp"

namespace archemist::gateway {

using nlohmann::json;

namespace {

json opt(const std::optional<Tick>& t) { return t ? json(*t) : json(nullptr); }

}  // namespace

json state_view(const state::WorkflowState& s) {
  json v;
  v["schema_version"] = kSchemaVersion;
  v["revision"] = s.revision;
  v["clock"] = s.clock;
  v["paused"] = s.paused;
  v["halted"] = s.halted();

  v["samples"] = json::array();
  std::size_t active = 0;
  for (const auto& [id, smp] : s.samples) {
    if (!smp.assignment.terminal()) ++active;
    json last = nullptr;
    if (!smp.history.empty()) {
      const auto& o = smp.history.back();
      last = {{"op", o.op_name}, {"by", o.station_or_robot}, {"success", o.success}, {"t", o.timestamp}};
    }
    json contents = json::object();
    for (const auto& [m, q] : smp.contents) {
      auto it = s.materials.find(m);
      contents[m] = {{"quantity", q}, {"unit", it == s.materials.end() ? "" : std::string(symbol(it->second.unit))}};
    }
    v["samples"].push_back({{"id", id},
                            {"recipe", smp.recipe ? smp.recipe->name : ""},
                            {"cursor", smp.flow_cursor},
                            {"location", smp.location},
                            {"assignment", std::string(to_string(smp.assignment.kind))},
                            {"assigned_to", smp.assignment.target},
                            {"history_length", smp.history.size()},
                            {"transfers", smp.transfers.size()},
                            {"contents", contents},
                            {"last_outcome", last},
                            {"terminal_reason", smp.terminal_reason},
                            {"submitted_at", smp.submitted_at},
                            {"finished_at", opt(smp.finished_at)}});
  }

  v["stations"] = json::array();
  for (const auto& [id, st] : s.stations)
    v["stations"].push_back({{"id", id},
                             {"type", st.type_name},
                             {"location", st.location},
                             {"operational", st.operational},
                             {"safety_stop", st.safety_stop},
                             {"available", st.available},
                             {"assigned_sample", st.assigned_sample ? json(*st.assigned_sample) : json(nullptr)},
                             {"processed", st.processed_list.size()}});
  v["robots"] = json::array();
  for (const auto& [id, r] : s.robots)
    v["robots"].push_back({{"id", id},
                           {"type", r.type_name},
                           {"location", r.location},
                           {"mobile", r.mobile},
                           {"operational", r.operational},
                           {"safety_stop", r.safety_stop},
                           {"assigned_job", r.assigned_job ? json(r.assigned_job->id) : json(nullptr)},
                           {"processed", r.processed_list.size()}});
  v["robot_job_queue"] = s.robot_job_queue.size();

  v["materials"] = json::array();
  for (const auto& [name, m] : s.materials)
    v["materials"].push_back({{"name", name},
                              {"phase", m.phase == state::Phase::solid ? "solid" : "liquid"},
                              {"unit", std::string(symbol(m.unit))},
                              {"initial", m.initial},
                              {"remaining", m.remaining}});

  v["alerts"] = json::array();
  for (const auto& a : s.alerts)
    v["alerts"].push_back({{"id", a.id},
                           {"rule", a.rule_id},
                           {"severity", std::string(to_string(a.severity))},
                           {"message", a.message},
                           {"revision", a.revision_raised},
                           {"acknowledged", a.acknowledged}});

  v["metrics"] = {{"elapsed_ticks", s.clock},
                  {"completed", s.count(state::AssignmentKind::complete)},
                  {"failed", s.count(state::AssignmentKind::failed)},
                  {"active", active}};
  return v;
}

json reading_traces(const state::WorkflowState& s, const std::string& reading) {
  json out = json::object();
  for (const auto& [id, smp] : s.samples) {
    json series = json::array();
    for (const auto& o : smp.history)
      if (auto it = o.readings.find(reading); it != o.readings.end())
        series.push_back({{"t", o.timestamp}, {"value", it->second.value}, {"unit", it->second.unit}});
    if (!series.empty()) out[std::to_string(id)] = series;
  }
  return out;
}

json to_json(const recipe::Diagnostic& d) {
  json j = {{"code", std::string(recipe::code_id(d.code))},
            {"name", std::string(recipe::code_name(d.code))},
            {"category", std::string(recipe::to_string(recipe::category(d.code)))},
            {"line", d.pos.line},
            {"column", d.pos.column},
            {"message", d.message}};
  j["suggestion"] = d.suggestion ? json(*d.suggestion) : json(nullptr);
  return j;
}

json schemas() {
  json str = {{"type", "string"}}, integer = {{"type", "integer"}}, boolean = {{"type", "boolean"}};
  json categories = json::array();
  for (auto c : {recipe::DiagCategory::syntax, recipe::DiagCategory::schema, recipe::DiagCategory::semantic,
                 recipe::DiagCategory::flow})
    categories.push_back(std::string(recipe::to_string(c)));
  json diagnostic = {{"type", "object"},
                     {"required", {"code", "category", "line", "column", "message"}},
                     {"properties",
                      {{"code", str},
                       {"name", str},
                       {"category", {{"enum", categories}}},
                       {"line", integer},
                       {"column", integer},
                       {"message", str},
                       {"suggestion", {{"type", {"string", "null"}}}}}}};
  json submit = {{"type", "object"},
                 {"required", {"recipe"}},
                 {"properties",
                  {{"recipe", str}, {"count", {{"type", "integer"}, {"minimum", 1}}}, {"location", str}}}};
  json control = {{"type", "object"},
                  {"required", {"command"}},
                  {"properties", {{"command", {{"enum", {"pause", "resume", "halt"}}}}}}};
  json view = {{"type", "object"},
               {"required", {"revision", "clock", "samples", "stations", "robots", "materials", "alerts", "metrics"}},
               {"properties",
                {{"schema_version", integer},
                 {"revision", integer},
                 {"clock", integer},
                 {"paused", boolean},
                 {"halted", boolean},
                 {"samples", {{"type", "array"}}},
                 {"stations", {{"type", "array"}}},
                 {"robots", {{"type", "array"}}},
                 {"materials", {{"type", "array"}}},
                 {"alerts", {{"type", "array"}}},
                 {"metrics", {{"type", "object"}}}}}};
  json event = {{"type", "object"},
                {"required", {"rev", "kind", "tick", "data"}},
                {"properties", {{"rev", integer}, {"kind", str}, {"tick", integer}, {"data", {{"type", "object"}}}}}};
  return {{"version", kSchemaVersion},
          {"schemas",
           {{"SubmitRequest", submit},
            {"SubmitResponse",
             {{"type", "object"}, {"properties", {{"sample_ids", {{"type", "array"}, {"items", integer}}}}}}},
            {"Diagnostic", diagnostic},
            {"ControlRequest", control},
            {"StateView", view},
            {"StreamEvent", event}}}};
}

}  // namespace archemist::gateway
