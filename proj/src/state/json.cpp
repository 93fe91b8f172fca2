#include "archemist/state/json.hpp"

#include "archemist/error.hpp"

namespace archemist::state {

using nlohmann::json;

namespace {

std::string phase_name(Phase p) { return p == Phase::solid ? "solid" : "liquid"; }
Phase phase_from(const json& j) { return j.get<std::string>() == "solid" ? Phase::solid : Phase::liquid; }

Unit unit_from(const json& j) {
  auto u = parse_unit(j.get<std::string>());
  if (!u) throw Error(ErrorCode::InvalidEvent, "bad unit '" + j.get<std::string>() + "'");
  return *u;
}

const char* param_type_name(ParamType t) {
  switch (t) {
    case ParamType::solid: return "solid";
    case ParamType::liquid: return "liquid";
    case ParamType::quantity: return "quantity";
    case ParamType::text: return "text";
  }
  return "text";
}

ParamType param_type_from(const std::string& s) {
  if (s == "solid") return ParamType::solid;
  if (s == "liquid") return ParamType::liquid;
  if (s == "quantity") return ParamType::quantity;
  return ParamType::text;
}

const char* dimension_name(Dimension d) {
  switch (d) {
    case Dimension::mass: return "mass";
    case Dimension::volume: return "volume";
    case Dimension::temperature: return "temperature";
    case Dimension::time: return "time";
    case Dimension::rate: return "rate";
  }
  return "mass";
}

Dimension dimension_from(const std::string& s) {
  if (s == "volume") return Dimension::volume;
  if (s == "temperature") return Dimension::temperature;
  if (s == "time") return Dimension::time;
  if (s == "rate") return Dimension::rate;
  return Dimension::mass;
}

const char* effect_name(ReadingEffect e) {
  switch (e) {
    case ReadingEffect::none: return "none";
    case ReadingEffect::consume: return "consume";
    case ReadingEffect::evaporate: return "evaporate";
    case ReadingEffect::set_property: return "set_property";
  }
  return "none";
}

ReadingEffect effect_from(const std::string& s) {
  if (s == "consume") return ReadingEffect::consume;
  if (s == "evaporate") return ReadingEffect::evaporate;
  if (s == "set_property") return ReadingEffect::set_property;
  return ReadingEffect::none;
}

json to_json(const OperationDescriptor& op) {
  json params = json::array(), readings = json::array();
  for (const auto& p : op.params) {
    json o = {{"name", p.name}, {"type", param_type_name(p.type)}, {"required", p.required}};
    if (p.dimension) o["dimension"] = dimension_name(*p.dimension);
    params.push_back(o);
  }
  for (const auto& r : op.readings)
    readings.push_back({{"name", r.name}, {"unit", r.unit}, {"effect", effect_name(r.effect)}, {"param", r.param}});
  return {{"name", op.name}, {"params", params}, {"readings", readings}};
}

OperationDescriptor op_from_json(const json& j) {
  OperationDescriptor op;
  op.name = j.at("name");
  for (const auto& p : j.at("params")) {
    ParamSchema ps;
    ps.name = p.at("name");
    ps.type = param_type_from(p.at("type"));
    ps.required = p.at("required");
    if (p.contains("dimension")) ps.dimension = dimension_from(p.at("dimension"));
    op.params.push_back(ps);
  }
  for (const auto& r : j.at("readings"))
    op.readings.push_back({r.at("name"), r.at("unit"), effect_from(r.at("effect")), r.at("param")});
  return op;
}

AssignmentKind assignment_from(const std::string& s) {
  for (auto k : {AssignmentKind::unassigned, AssignmentKind::station, AssignmentKind::robot, AssignmentKind::complete,
                 AssignmentKind::failed})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::InvalidEvent, "bad assignment kind '" + s + "'");
}

json to_json(const Transfer& t) {
  return {{"job", t.job},   {"robot", t.robot},     {"kind", std::string(to_string(t.kind))},
          {"from", t.from}, {"to", t.to},           {"success", t.success},
          {"reason", t.reason}, {"tick", t.tick}};
}

Transfer transfer_from_json(const json& j) {
  return {j.at("job"), j.at("robot"), *parse_job_kind(j.at("kind").get<std::string>()), j.at("from"), j.at("to"),
          j.at("success"), j.at("reason"), j.at("tick")};
}

}  // namespace

json to_json(const Readings& r) {
  json j = json::object();
  for (const auto& [name, reading] : r) j[name] = {{"value", reading.value}, {"unit", reading.unit}};
  return j;
}

Readings readings_from_json(const json& j) {
  Readings r;
  for (const auto& [name, v] : j.items()) r[name] = Reading{v.at("value").get<double>(), v.at("unit")};
  return r;
}

json to_json(const OperationOutcome& o) {
  return {{"output", o.output_name},   {"by", o.station_or_robot}, {"op", o.op_name},
          {"node", o.node},            {"success", o.success},     {"reason", o.reason},
          {"readings", to_json(o.readings)}, {"t", o.timestamp}};
}

OperationOutcome outcome_from_json(const json& j) {
  OperationOutcome o;
  o.output_name = j.at("output");
  o.station_or_robot = j.at("by");
  o.op_name = j.at("op");
  o.node = j.value("node", "");
  o.success = j.at("success");
  o.reason = j.value("reason", "");
  o.readings = readings_from_json(j.at("readings"));
  o.timestamp = j.at("t");
  return o;
}

json to_json(const RobotJob& job) {
  return {{"id", job.id},     {"kind", std::string(to_string(job.kind))}, {"sample", job.sample},
          {"from", job.from}, {"to", job.to},                             {"attempts", job.attempts}};
}

RobotJob job_from_json(const json& j) {
  auto kind = parse_job_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::InvalidEvent, "bad job kind");
  return {j.at("id"), *kind, j.at("sample"), j.at("from"), j.at("to"), j.value("attempts", 0)};
}

json to_json(const WorkflowState& s) {
  json j;
  json nodes = json::array(), edges = json::array();
  for (const auto& n : s.topology.nodes) nodes.push_back({{"id", n.id}, {"site", n.site}, {"dock", n.dock}});
  for (const auto& e : s.topology.edges)
    edges.push_back({{"from", e.from}, {"to", e.to}, {"cost", e.cost}, {"oneway", e.oneway}});
  j["topology"] = {{"nodes", nodes}, {"edges", edges}};

  j["alert_rules"] = json::array();
  for (const auto& r : s.alert_rules)
    j["alert_rules"].push_back({{"id", r.id},
                                {"kind", r.kind == RuleKind::material_below ? "material_below" : "failed_samples"},
                                {"material", r.material},
                                {"threshold", r.threshold},
                                {"severity", std::string(to_string(r.severity))}});

  j["materials"] = json::object();
  for (const auto& [name, m] : s.materials)
    j["materials"][name] = {{"phase", phase_name(m.phase)}, {"unit", std::string(symbol(m.unit))},
                            {"density", m.density},         {"initial", m.initial},
                            {"remaining", m.remaining}};

  j["stations"] = json::object();
  for (const auto& [id, st] : s.stations) {
    json ops = json::array(), processed = json::array();
    for (const auto& op : st.supported_ops) ops.push_back(to_json(op));
    for (const auto& [sample, outcome] : st.processed_list) processed.push_back({sample, outcome});
    j["stations"][id] = {{"type", st.type_name},
                         {"location", st.location},
                         {"operational", st.operational},
                         {"safety_stop", st.safety_stop},
                         {"available", st.available},
                         {"supported_ops", ops},
                         {"assigned_sample", st.assigned_sample ? json(*st.assigned_sample) : json(nullptr)},
                         {"processed", processed},
                         {"timeout", st.timeout_ticks},
                         {"params", st.params}};
  }

  j["robots"] = json::object();
  for (const auto& [id, r] : s.robots) {
    json caps = json::array();
    for (auto k : r.capabilities) caps.push_back(std::string(to_string(k)));
    j["robots"][id] = {{"type", r.type_name},
                       {"location", r.location},
                       {"mobile", r.mobile},
                       {"capabilities", caps},
                       {"operational", r.operational},
                       {"safety_stop", r.safety_stop},
                       {"assigned_job", r.assigned_job ? to_json(*r.assigned_job) : json(nullptr)},
                       {"processed", r.processed_list},
                       {"timeout", r.timeout_ticks},
                       {"params", r.params}};
  }

  j["samples"] = json::array();
  for (const auto& [id, smp] : s.samples) {
    json history = json::array(), transfers = json::array();
    for (const auto& o : smp.history) history.push_back(to_json(o));
    for (const auto& t : smp.transfers) transfers.push_back(to_json(t));
    j["samples"].push_back({{"id", id},
                            {"recipe_index", smp.recipe_index},
                            {"recipe", smp.recipe ? smp.recipe->name : ""},
                            {"contents", smp.contents},
                            {"evaporated", smp.evaporated},
                            {"properties", smp.properties},
                            {"history", history},
                            {"transfers", transfers},
                            {"location", smp.location},
                            {"flow_cursor", smp.flow_cursor},
                            {"assignment", std::string(to_string(smp.assignment.kind))},
                            {"assigned_to", smp.assignment.target},
                            {"terminal_reason", smp.terminal_reason},
                            {"submitted_at", smp.submitted_at},
                            {"finished_at", smp.finished_at ? json(*smp.finished_at) : json(nullptr)}});
  }

  j["robot_job_queue"] = json::array();
  for (const auto& job : s.robot_job_queue) j["robot_job_queue"].push_back(to_json(job));

  j["alerts"] = json::array();
  for (const auto& a : s.alerts)
    j["alerts"].push_back({{"id", a.id},
                           {"rule", a.rule_id},
                           {"severity", std::string(to_string(a.severity))},
                           {"revision", a.revision_raised},
                           {"message", a.message},
                           {"acknowledged", a.acknowledged}});
  j["active_rules"] = s.active_rules;

  j["recipes"] = json::array();
  for (const auto& r : s.recipes) j["recipes"].push_back(r.text);
  j["scenario"] = s.scenario;
  j["paused"] = s.paused;
  j["operator_halt"] = s.operator_halt;
  j["halted"] = s.halted();
  j["clock"] = s.clock;
  j["revision"] = s.revision;
  j["next_sample_id"] = s.next_sample_id;
  j["next_job_id"] = s.next_job_id;
  j["next_alert_id"] = s.next_alert_id;
  return j;
}

WorkflowState state_from_json(const json& j) {
  WorkflowState s;
  for (const auto& n : j.at("topology").at("nodes")) s.topology.nodes.push_back({n.at("id"), n.at("site"), n.at("dock")});
  for (const auto& e : j.at("topology").at("edges"))
    s.topology.edges.push_back({e.at("from"), e.at("to"), e.at("cost").get<Tick>(), e.at("oneway")});

  for (const auto& r : j.at("alert_rules")) {
    AlertRule rule;
    rule.id = r.at("id");
    rule.kind = r.at("kind") == "material_below" ? RuleKind::material_below : RuleKind::failed_samples_at_least;
    rule.material = r.at("material");
    rule.threshold = r.at("threshold");
    rule.severity = r.at("severity") == "halt" ? Severity::halt : Severity::notify;
    s.alert_rules.push_back(rule);
  }

  for (const auto& [name, m] : j.at("materials").items()) {
    Material mat;
    mat.name = name;
    mat.phase = phase_from(m.at("phase"));
    mat.unit = unit_from(m.at("unit"));
    mat.density = m.at("density");
    mat.initial = m.at("initial");
    mat.remaining = m.at("remaining");
    s.materials.emplace(name, mat);
  }

  for (const auto& [id, o] : j.at("stations").items()) {
    StationModel st;
    st.id = id;
    st.type_name = o.at("type");
    st.location = o.at("location");
    st.operational = o.at("operational");
    st.safety_stop = o.at("safety_stop");
    st.available = o.at("available");
    for (const auto& op : o.at("supported_ops")) st.supported_ops.push_back(op_from_json(op));
    if (!o.at("assigned_sample").is_null()) st.assigned_sample = o.at("assigned_sample").get<SampleId>();
    for (const auto& p : o.at("processed")) st.processed_list.emplace_back(p.at(0).get<SampleId>(), p.at(1));
    st.timeout_ticks = o.at("timeout");
    st.params = o.at("params").get<std::map<std::string, double>>();
    s.stations.emplace(id, std::move(st));
  }

  for (const auto& [id, o] : j.at("robots").items()) {
    RobotModel r;
    r.id = id;
    r.type_name = o.at("type");
    r.location = o.at("location");
    r.mobile = o.at("mobile");
    for (const auto& c : o.at("capabilities")) r.capabilities.insert(*parse_job_kind(c.get<std::string>()));
    r.operational = o.at("operational");
    r.safety_stop = o.at("safety_stop");
    if (!o.at("assigned_job").is_null()) r.assigned_job = job_from_json(o.at("assigned_job"));
    r.processed_list = o.at("processed").get<std::vector<JobId>>();
    r.timeout_ticks = o.at("timeout");
    r.params = o.at("params").get<std::map<std::string, double>>();
    s.robots.emplace(id, std::move(r));
  }

  for (const auto& text : j.at("recipes")) {
    std::string t = text;
    auto parsed = recipe::parse_recipe(recipe::RecipeDoc{t, "<snapshot>"});
    if (!parsed.ok()) throw Error(ErrorCode::InvalidEvent, "snapshot holds an invalid recipe");
    s.recipes.push_back(RecipeEntry{t, std::make_shared<const recipe::Recipe>(std::move(*parsed.recipe))});
  }

  for (const auto& o : j.at("samples")) {
    Sample smp;
    smp.id = o.at("id");
    smp.recipe_index = o.at("recipe_index");
    if (smp.recipe_index >= s.recipes.size()) throw Error(ErrorCode::InvalidEvent, "sample names an unknown recipe");
    smp.recipe = s.recipes[smp.recipe_index].recipe;
    smp.contents = o.at("contents").get<std::map<std::string, double>>();
    smp.evaporated = o.at("evaporated").get<std::map<std::string, double>>();
    smp.properties = o.at("properties").get<std::map<std::string, double>>();
    for (const auto& h : o.at("history")) smp.history.push_back(outcome_from_json(h));
    for (const auto& t : o.at("transfers")) smp.transfers.push_back(transfer_from_json(t));
    smp.location = o.at("location");
    smp.flow_cursor = o.at("flow_cursor");
    smp.assignment = Assignment{assignment_from(o.at("assignment")), o.at("assigned_to")};
    smp.terminal_reason = o.at("terminal_reason");
    smp.submitted_at = o.at("submitted_at");
    if (!o.at("finished_at").is_null()) smp.finished_at = o.at("finished_at").get<Tick>();
    s.samples.emplace(smp.id, std::move(smp));
  }

  for (const auto& job : j.at("robot_job_queue")) s.robot_job_queue.push_back(job_from_json(job));
  for (const auto& a : j.at("alerts")) {
    Alert alert;
    alert.id = a.at("id");
    alert.rule_id = a.at("rule");
    alert.severity = a.at("severity") == "halt" ? Severity::halt : Severity::notify;
    alert.revision_raised = a.at("revision");
    alert.message = a.at("message");
    alert.acknowledged = a.at("acknowledged");
    s.alerts.push_back(alert);
  }
  s.active_rules = j.at("active_rules").get<std::set<std::string>>();
  s.scenario = j.at("scenario");
  s.paused = j.at("paused");
  s.operator_halt = j.at("operator_halt");
  s.clock = j.at("clock");
  s.revision = j.at("revision");
  s.next_sample_id = j.at("next_sample_id");
  s.next_job_id = j.at("next_job_id");
  s.next_alert_id = j.at("next_alert_id");
  return s;
}

}  // namespace archemist::state
