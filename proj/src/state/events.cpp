#include "archemist/state/events.hpp"

#include <algorithm>
#include <cmath>

#include "archemist/error.hpp"
#include "archemist/state/json.hpp"

namespace archemist::state {

using nlohmann::json;

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::init: return "init";
    case EventKind::submit: return "submit";
    case EventKind::assignment: return "assignment";
    case EventKind::outcome: return "outcome";
    case EventKind::monitor_event: return "monitor_event";
    case EventKind::alert: return "alert";
    case EventKind::ack: return "ack";
    case EventKind::control: return "control";
  }
  return "init";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::init, EventKind::submit, EventKind::assignment, EventKind::outcome,
                 EventKind::monitor_event, EventKind::alert, EventKind::ack, EventKind::control})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string_view to_string(ControlCommand c) {
  switch (c) {
    case ControlCommand::pause: return "pause";
    case ControlCommand::resume: return "resume";
    case ControlCommand::halt: return "halt";
  }
  return "pause";
}

std::optional<ControlCommand> parse_control(std::string_view s) {
  if (s == "pause") return ControlCommand::pause;
  if (s == "resume") return ControlCommand::resume;
  if (s == "halt") return ControlCommand::halt;
  return std::nullopt;
}

std::string JournalRecord::payload() const {
  json j = {{"rev", revision}, {"kind", std::string(to_string(event.kind))}, {"tick", event.tick}, {"data", event.data}};
  return j.dump();
}

JournalRecord JournalRecord::from_payload(std::string_view payload) {
  json j = json::parse(payload);
  auto kind = parse_event_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::InvalidEvent, "unknown record kind");
  return JournalRecord{j.at("rev").get<Revision>(), Event{*kind, j.at("tick").get<Tick>(), j.at("data")}};
}

namespace events {

Event init(const Config& config, const json& scenario) {
  return {EventKind::init, 0, {{"config", to_json(config)}, {"scenario", scenario}}};
}
Event submit(SampleId sample, const std::string& recipe_text, const std::string& location, Tick tick) {
  return {EventKind::submit, tick, {{"sample", sample}, {"recipe", recipe_text}, {"location", location}}};
}
Event assign_station(SampleId sample, const std::string& station, const std::string& node, Tick tick) {
  return {EventKind::assignment, tick, {{"op", "station"}, {"sample", sample}, {"station", station}, {"node", node}}};
}
Event enqueue_job(const RobotJob& job, Tick tick) {
  return {EventKind::assignment, tick, {{"op", "enqueue"}, {"job", to_json(job)}}};
}
Event assign_robot(JobId job, const std::string& robot, Tick tick) {
  return {EventKind::assignment, tick, {{"op", "robot"}, {"job", job}, {"robot", robot}}};
}
Event mark_complete(SampleId sample, Tick tick) {
  return {EventKind::assignment, tick, {{"op", "complete"}, {"sample", sample}}};
}
Event mark_failed(SampleId sample, const std::string& reason, Tick tick) {
  return {EventKind::assignment, tick, {{"op", "fail"}, {"sample", sample}, {"reason", reason}}};
}
Event station_outcome(SampleId sample, const OperationOutcome& outcome, bool edge_success) {
  return {EventKind::outcome, outcome.timestamp,
          {{"op", "station"}, {"sample", sample}, {"outcome", to_json(outcome)}, {"edge", edge_success}}};
}
Event robot_outcome(JobId job, const std::string& robot, bool success, const std::string& reason,
                    const std::string& robot_location, Tick tick) {
  return {EventKind::outcome, tick,
          {{"op", "robot"},
           {"job", job},
           {"robot", robot},
           {"success", success},
           {"reason", reason},
           {"robot_location", robot_location}}};
}
Event device_status(const std::string& device, bool operational, bool safety_stop, Tick tick) {
  return {EventKind::monitor_event, tick,
          {{"op", "status"}, {"device", device}, {"operational", operational}, {"safety_stop", safety_stop}}};
}
Event reset_assignment(const std::string& target, Tick tick) {
  return {EventKind::monitor_event, tick,
          {{"op", "reset"}, {"target", target}, {"note", "in-flight assignment reset after recovery"}}};
}
Event raise_alert(const std::string& rule_id, Severity severity, const std::string& message, Tick tick) {
  return {EventKind::alert, tick,
          {{"op", "raise"}, {"rule", rule_id}, {"severity", std::string(to_string(severity))}, {"message", message}}};
}
Event clear_rule(const std::string& rule_id, Tick tick) {
  return {EventKind::alert, tick, {{"op", "clear"}, {"rule", rule_id}}};
}
Event ack(AlertId alert, Tick tick) { return {EventKind::ack, tick, {{"alert", alert}}}; }
Event control(ControlCommand command, Tick tick) {
  return {EventKind::control, tick, {{"command", std::string(to_string(command))}}};
}

}  // namespace events

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidEvent, what); }

Sample& sample_of(WorkflowState& s, SampleId id) {
  auto it = s.samples.find(id);
  if (it == s.samples.end()) invalid("unknown sample " + std::to_string(id));
  return it->second;
}

StationModel& station_of(WorkflowState& s, const std::string& id) {
  auto it = s.stations.find(id);
  if (it == s.stations.end()) invalid("unknown station '" + id + "'");
  return it->second;
}

RobotModel& robot_of(WorkflowState& s, const std::string& id) {
  auto it = s.robots.find(id);
  if (it == s.robots.end()) invalid("unknown robot '" + id + "'");
  return it->second;
}

void finish(Sample& smp, AssignmentKind kind, std::string reason, Tick tick) {
  smp.assignment = Assignment{kind, {}};
  smp.terminal_reason = std::move(reason);
  smp.finished_at = tick;
}

void drop_queued(WorkflowState& s, SampleId id) {
  auto& q = s.robot_job_queue;
  q.erase(std::remove_if(q.begin(), q.end(), [&](const RobotJob& j) { return j.sample == id; }), q.end());
}

void apply_station_outcome(WorkflowState& s, SampleId id, const OperationOutcome& outcome,
                           std::optional<bool> edge_success) {
  auto sit = s.samples.find(id);
  if (sit == s.samples.end()) throw Error(ErrorCode::NotAssigned, "unknown sample " + std::to_string(id));
  Sample& smp = sit->second;
  if (smp.assignment.kind != AssignmentKind::station || smp.assignment.target != outcome.station_or_robot)
    throw Error(ErrorCode::NotAssigned,
                "sample " + std::to_string(id) + " is not assigned to '" + outcome.station_or_robot + "'");
  StationModel& st = station_of(s, outcome.station_or_robot);
  const OperationDescriptor* op = st.op(outcome.op_name);
  if (op == nullptr)
    throw Error(ErrorCode::SchemaMismatch, "station '" + st.id + "' has no operation '" + outcome.op_name + "'");
  const recipe::FlowNode* node = smp.recipe->flow.find(smp.flow_cursor);
  if (node == nullptr || !node->task || node->task->op_name != outcome.op_name)
    throw Error(ErrorCode::SchemaMismatch, "outcome '" + outcome.op_name + "' does not match flow node '" +
                                               smp.flow_cursor + "'");
  check_readings(*op, outcome);

  for (const auto& [name, reading] : outcome.readings) {
    const ReadingSchema* rs = op->reading(name);
    switch (rs->effect) {
      case ReadingEffect::none: break;
      case ReadingEffect::consume: {
        const recipe::ParamValue* pv = node->task->find(rs->param);
        if (pv == nullptr) throw Error(ErrorCode::SchemaMismatch, "operation lacks material parameter '" + rs->param + "'");
        auto mit = s.materials.find(pv->text);
        if (mit == s.materials.end()) throw Error(ErrorCode::SchemaMismatch, "unknown material '" + pv->text + "'");
        Material& m = mit->second;
        auto unit = parse_unit(reading.unit);
        double amount = convert(Quantity{reading.value, *unit}, m.unit).value;
        if (!(amount >= 0.0) || amount > m.remaining)
          throw Error(ErrorCode::SchemaMismatch, "reading '" + name + "' is outside the available stock of " + m.name);
        m.remaining -= amount;
        smp.contents[m.name] += amount;
        break;
      }
      case ReadingEffect::evaporate: {
        double grams = convert(Quantity{reading.value, *parse_unit(reading.unit)}, Unit::g).value;
        double total = 0.0;
        for (const auto& [mat, qty] : smp.contents) {
          const Material& m = s.materials.at(mat);
          if (m.phase == Phase::liquid) total += qty * m.density;
        }
        if (grams < 0.0 || grams > total + 1e-12)
          throw Error(ErrorCode::SchemaMismatch, "evaporated mass exceeds the liquid in the vial");
        if (total <= 0.0) break;
        for (auto& [mat, qty] : smp.contents) {
          const Material& m = s.materials.at(mat);
          if (m.phase != Phase::liquid || qty <= 0.0) continue;
          double share = grams * (qty * m.density) / total / m.density;
          share = std::min(share, qty);
          qty -= share;
          smp.evaporated[mat] += share;
        }
        break;
      }
      case ReadingEffect::set_property: smp.properties[name] = reading.value; break;
    }
  }

  OperationOutcome recorded = outcome;
  recorded.node = smp.flow_cursor;
  smp.history.push_back(recorded);
  st.processed_list.emplace_back(id, std::to_string(id) + ":" + std::to_string(smp.history.size() - 1));
  st.assigned_sample.reset();
  st.available = true;

  bool edge = edge_success.value_or(outcome.success);
  const std::string& next = recipe::advance_flow(smp.recipe->flow, smp.flow_cursor, edge);
  smp.flow_cursor = next;
  if (next == recipe::kEndNode) {
    std::string reason = edge ? "completed" : "failed: " + (outcome.reason.empty() ? std::string("onFail edge") : outcome.reason);
    finish(smp, edge ? AssignmentKind::complete : AssignmentKind::failed, reason, outcome.timestamp);
  } else {
    smp.assignment = Assignment{};
  }
}

void apply_assignment(WorkflowState& s, const Event& e) {
  const json& d = e.data;
  const std::string op = d.at("op");
  if (op == "station") {
    Sample& smp = sample_of(s, d.at("sample").get<SampleId>());
    StationModel& st = station_of(s, d.at("station"));
    const std::string node = d.at("node");
    if (smp.assignment.kind != AssignmentKind::unassigned || s.queued(smp.id))
      invalid("sample " + std::to_string(smp.id) + " is not free");
    if (!st.available || st.assigned_sample) invalid("station '" + st.id + "' is busy");
    if (node != smp.effective_node()) invalid("node '" + node + "' is not the sample's next node");
    const auto* fn = smp.recipe->flow.find(node);
    if (fn == nullptr || fn->station != st.id) invalid("node '" + node + "' does not run on '" + st.id + "'");
    if (smp.location != st.location) invalid("sample is not at '" + st.location + "'");
    smp.flow_cursor = node;
    smp.assignment = Assignment{AssignmentKind::station, st.id};
    st.available = false;
    st.assigned_sample = smp.id;
  } else if (op == "enqueue") {
    RobotJob job = job_from_json(d.at("job"));
    if (job.id != s.next_job_id) invalid("job id out of sequence");
    Sample& smp = sample_of(s, job.sample);
    if (smp.assignment.kind != AssignmentKind::unassigned || s.queued(smp.id))
      invalid("sample " + std::to_string(smp.id) + " is not free");
    if (job.from != smp.location) invalid("job does not start at the sample's location");
    if (!s.topology.contains(job.to)) invalid("job destination '" + job.to + "' is not in the topology");
    if (job.kind == JobKind::transport && job.from == job.to) invalid("transport job with from == to");
    s.robot_job_queue.push_back(job);
    ++s.next_job_id;
  } else if (op == "robot") {
    JobId id = d.at("job");
    RobotModel& r = robot_of(s, d.at("robot"));
    auto it = std::find_if(s.robot_job_queue.begin(), s.robot_job_queue.end(),
                           [&](const RobotJob& j) { return j.id == id; });
    if (it == s.robot_job_queue.end()) invalid("job " + std::to_string(id) + " is not queued");
    if (r.assigned_job) invalid("robot '" + r.id + "' is busy");
    if (!r.capabilities.count(it->kind)) invalid("robot '" + r.id + "' lacks the capability");
    Sample& smp = sample_of(s, it->sample);
    smp.assignment = Assignment{AssignmentKind::robot, r.id};
    r.assigned_job = *it;
    s.robot_job_queue.erase(it);
  } else if (op == "complete") {
    Sample& smp = sample_of(s, d.at("sample").get<SampleId>());
    if (smp.assignment.terminal()) invalid("sample already terminal");
    if (smp.effective_node() != recipe::kEndNode) invalid("sample has not reached 'end'");
    smp.flow_cursor = std::string(recipe::kEndNode);
    finish(smp, AssignmentKind::complete, "completed", e.tick);
  } else if (op == "fail") {
    Sample& smp = sample_of(s, d.at("sample").get<SampleId>());
    if (smp.assignment.kind != AssignmentKind::unassigned) invalid("only unassigned samples can be failed");
    drop_queued(s, smp.id);
    finish(smp, AssignmentKind::failed, d.at("reason"), e.tick);
  } else {
    invalid("unknown assignment op '" + op + "'");
  }
}

void apply_robot_outcome(WorkflowState& s, const Event& e) {
  const json& d = e.data;
  JobId id = d.at("job");
  auto rit = s.robots.find(d.at("robot").get<std::string>());
  if (rit == s.robots.end() || !rit->second.assigned_job || rit->second.assigned_job->id != id)
    throw Error(ErrorCode::NotAssigned, "job " + std::to_string(id) + " is not assigned to that robot");
  RobotModel& r = rit->second;
  RobotJob job = *r.assigned_job;
  Sample& smp = sample_of(s, job.sample);
  const bool success = d.at("success");
  const std::string reason = d.at("reason");
  const std::string where = d.at("robot_location");
  if (!s.topology.contains(where)) invalid("robot location '" + where + "' is not in the topology");

  smp.transfers.push_back(Transfer{job.id, r.id, job.kind, job.from, job.to, success, reason, e.tick});
  r.location = where;
  r.processed_list.push_back(job.id);
  r.assigned_job.reset();

  if (success) {
    smp.location = job.to;
    smp.assignment = Assignment{};
  } else if (reason == "misplace_vial") {
    smp.location = std::string(kLimbo);
    finish(smp, AssignmentKind::failed, "failed: misplace_vial", e.tick);
  } else if (job.attempts + 1 >= kMaxJobAttempts) {
    finish(smp, AssignmentKind::failed, "failed: " + reason, e.tick);
  } else {
    ++job.attempts;
    smp.assignment = Assignment{};
    s.robot_job_queue.push_front(job);
  }
}

void apply_monitor(WorkflowState& s, const Event& e) {
  const json& d = e.data;
  const std::string op = d.at("op");
  if (op == "status") {
    const std::string dev = d.at("device");
    bool operational = d.at("operational");
    bool stop = d.at("safety_stop");
    if (auto it = s.stations.find(dev); it != s.stations.end()) {
      it->second.operational = operational;
      it->second.safety_stop = stop;
    } else if (auto rt = s.robots.find(dev); rt != s.robots.end()) {
      rt->second.operational = operational;
      rt->second.safety_stop = stop;
    } else {
      invalid("unknown device '" + dev + "'");
    }
  } else if (op == "reset") {
    const std::string target = d.at("target");
    if (auto it = s.stations.find(target); it != s.stations.end()) {
      StationModel& st = it->second;
      if (!st.assigned_sample) invalid("station '" + target + "' has nothing in flight");
      Sample& smp = sample_of(s, *st.assigned_sample);
      smp.assignment = Assignment{};
      st.assigned_sample.reset();
      st.available = true;
    } else if (auto rt = s.robots.find(target); rt != s.robots.end()) {
      RobotModel& r = rt->second;
      if (!r.assigned_job) invalid("robot '" + target + "' has nothing in flight");
      Sample& smp = sample_of(s, r.assigned_job->sample);
      smp.assignment = Assignment{};
      s.robot_job_queue.push_front(*r.assigned_job);
      r.assigned_job.reset();
    } else {
      invalid("unknown device '" + target + "'");
    }
  } else {
    invalid("unknown monitor op '" + op + "'");
  }
}

void apply_alert(WorkflowState& s, const Event& e) {
  const json& d = e.data;
  const std::string op = d.at("op");
  const std::string rule = d.at("rule");
  if (op == "raise") {
    if (s.active_rules.count(rule)) invalid("rule '" + rule + "' is already raised");
    Alert a;
    a.id = s.next_alert_id++;
    a.rule_id = rule;
    a.severity = d.at("severity") == "halt" ? Severity::halt : Severity::notify;
    a.revision_raised = s.revision + 1;
    a.message = d.at("message");
    s.alerts.push_back(std::move(a));
    s.active_rules.insert(rule);
  } else if (op == "clear") {
    if (!s.active_rules.erase(rule)) invalid("rule '" + rule + "' is not raised");
  } else {
    invalid("unknown alert op '" + op + "'");
  }
}

}  // namespace

void check_readings(const OperationDescriptor& op, const OperationOutcome& outcome) {
  for (const auto& [name, reading] : outcome.readings) {
    const ReadingSchema* rs = op.reading(name);
    if (rs == nullptr) throw Error(ErrorCode::SchemaMismatch, "operation '" + op.name + "' has no reading '" + name + "'");
    if (rs->unit != reading.unit)
      throw Error(ErrorCode::SchemaMismatch, "reading '" + name + "' must be in " + rs->unit + ", got " + reading.unit);
    if (!std::isfinite(reading.value)) throw Error(ErrorCode::SchemaMismatch, "reading '" + name + "' is not finite");
  }
  if (outcome.success) {
    for (const auto& rs : op.readings)
      if (!outcome.readings.count(rs.name))
        throw Error(ErrorCode::SchemaMismatch, "successful '" + op.name + "' must report '" + rs.name + "'");
  }
}

void apply_event(WorkflowState& s, const Event& e, const PluginRegistry& registry) {
  if (e.kind == EventKind::init) {
    if (s.revision != 0) invalid("init must be the first record");
    s = init_from_config(config_from_json(e.data.at("config")), registry);
    s.scenario = e.data.value("scenario", json::object());
    s.clock = e.tick;
    return;
  }
  if (s.revision == 0) invalid("state is not initialised");
  if (e.tick < s.clock) invalid("event tick goes backwards");
  try {
    switch (e.kind) {
      case EventKind::init: break;
      case EventKind::submit: {
        SampleId id = e.data.at("sample");
        if (id != s.next_sample_id) invalid("sample id out of sequence");
        const std::string text = e.data.at("recipe");
        const std::string location = e.data.at("location");
        if (!s.topology.contains(location)) invalid("unknown start location '" + location + "'");
        std::size_t index = s.recipes.size();
        for (std::size_t i = 0; i < s.recipes.size(); ++i)
          if (s.recipes[i].text == text) index = i;
        if (index == s.recipes.size()) {
          auto parsed = check_recipe(s, recipe::RecipeDoc{text, "<journal>"});
          if (!parsed.ok()) invalid("submitted recipe is invalid: " + recipe::format(parsed.diagnostics.front()));
          s.recipes.push_back(RecipeEntry{text, std::make_shared<const recipe::Recipe>(std::move(*parsed.recipe))});
        }
        Sample smp;
        smp.id = id;
        smp.recipe_index = index;
        smp.recipe = s.recipes[index].recipe;
        smp.location = location;
        smp.flow_cursor = std::string(recipe::kStartNode);
        smp.submitted_at = e.tick;
        s.samples.emplace(id, std::move(smp));
        ++s.next_sample_id;
        break;
      }
      case EventKind::assignment: apply_assignment(s, e); break;
      case EventKind::outcome:
        if (e.data.at("op") == "station") {
          apply_station_outcome(s, e.data.at("sample").get<SampleId>(), outcome_from_json(e.data.at("outcome")),
                                e.data.at("edge").get<bool>());
        } else {
          apply_robot_outcome(s, e);
        }
        break;
      case EventKind::monitor_event: apply_monitor(s, e); break;
      case EventKind::alert: apply_alert(s, e); break;
      case EventKind::ack: {
        AlertId id = e.data.at("alert");
        auto it = std::find_if(s.alerts.begin(), s.alerts.end(), [&](const Alert& a) { return a.id == id; });
        if (it == s.alerts.end()) invalid("unknown alert " + std::to_string(id));
        it->acknowledged = true;
        break;
      }
      case EventKind::control: {
        auto cmd = parse_control(e.data.at("command").get<std::string>());
        if (!cmd) invalid("unknown control command");
        if (*cmd == ControlCommand::pause) s.paused = true;
        if (*cmd == ControlCommand::halt) s.operator_halt = true;
        if (*cmd == ControlCommand::resume) {
          s.paused = false;
          s.operator_halt = false;
        }
        break;
      }
    }
  } catch (const json::exception& ex) {
    invalid(std::string("malformed event: ") + ex.what());
  }
  ++s.revision;
  s.clock = std::max(s.clock, e.tick);
}

WorkflowState applied(const WorkflowState& s, const Event& e, const PluginRegistry& registry) {
  WorkflowState next = s;
  apply_event(next, e, registry);
  return next;
}

WorkflowState apply_outcome(const WorkflowState& s, SampleId sample, const OperationOutcome& outcome,
                            std::optional<bool> edge_success) {
  WorkflowState next = s;
  apply_station_outcome(next, sample, outcome, edge_success);
  ++next.revision;
  next.clock = std::max(next.clock, outcome.timestamp);
  return next;
}

recipe::ParseResult check_recipe(const WorkflowState& s, const recipe::RecipeDoc& doc) {
  using recipe::DiagCode;
  auto result = recipe::parse_recipe(doc);
  if (!result.ok()) return result;
  const recipe::Recipe& r = *result.recipe;
  recipe::DiagnosticList diags;

  std::vector<std::string> material_names;
  for (const auto& [name, _] : s.materials) material_names.push_back(name);
  auto check_material = [&](const std::string& name, Phase phase, recipe::SourcePos pos) {
    auto it = s.materials.find(name);
    if (it == s.materials.end()) {
      diags.push_back({DiagCode::UndeclaredMaterial, pos, "material '" + name + "' is not stocked in this lab",
                       recipe::nearest(name, material_names)});
    } else if (it->second.phase != phase) {
      diags.push_back({DiagCode::MaterialPhase, pos, "material '" + name + "' is stocked with a different phase",
                       std::nullopt});
    }
  };
  for (const auto& m : r.solids) check_material(m, Phase::solid, {});
  for (const auto& m : r.liquids) check_material(m, Phase::liquid, {});

  std::vector<std::string> station_names;
  for (const auto& [id, _] : s.stations) station_names.push_back(id);
  for (const auto& st : r.stations) {
    auto sit = s.stations.find(st.station);
    if (sit == s.stations.end()) {
      diags.push_back({DiagCode::UnknownStation, st.pos, "station '" + st.station + "' is not configured",
                       recipe::nearest(st.station, station_names)});
      continue;
    }
    for (const auto& op : st.ops) {
      const OperationDescriptor* desc = sit->second.op(op.op_name);
      if (desc == nullptr) {
        std::vector<std::string> names;
        for (const auto& o : sit->second.supported_ops) names.push_back(o.name);
        diags.push_back({DiagCode::UnknownOperation, op.pos,
                         "station '" + st.station + "' does not support '" + op.op_name + "'",
                         recipe::nearest(op.op_name, names)});
        continue;
      }
      for (const auto& ps : desc->params) {
        const recipe::ParamValue* pv = op.find(ps.name);
        if (pv == nullptr) {
          if (ps.required)
            diags.push_back({DiagCode::MissingKey, op.pos, "operation '" + op.op_name + "' needs parameter '" + ps.name + "'",
                             std::nullopt});
          continue;
        }
        bool ok = true;
        switch (ps.type) {
          case ParamType::solid: ok = pv->kind == recipe::ParamKind::solid; break;
          case ParamType::liquid: ok = pv->kind == recipe::ParamKind::liquid; break;
          case ParamType::quantity:
            ok = pv->kind == recipe::ParamKind::quantity &&
                 (!ps.dimension || dimension_of(pv->quantity.unit) == *ps.dimension);
            break;
          case ParamType::text: ok = pv->kind == recipe::ParamKind::text; break;
        }
        if (!ok)
          diags.push_back({DiagCode::BadUnit, op.pos, "parameter '" + ps.name + "' of '" + op.op_name + "' has the wrong type",
                           std::nullopt});
      }
      for (const auto& pv : op.properties) {
        bool known = std::any_of(desc->params.begin(), desc->params.end(),
                                 [&](const ParamSchema& ps) { return ps.name == pv.name; });
        if (!known)
          diags.push_back({DiagCode::UnknownKey, op.pos,
                           "operation '" + op.op_name + "' does not take parameter '" + pv.name + "'", std::nullopt});
      }
      if (op.output.predicate && desc->reading(op.output.predicate->reading) == nullptr)
        diags.push_back({DiagCode::BadPredicate, op.pos,
                         "'" + op.op_name + "' reports no reading '" + op.output.predicate->reading + "'", std::nullopt});
    }
  }
  if (!diags.empty()) {
    result.recipe.reset();
    result.diagnostics = std::move(diags);
  }
  return result;
}

}  // namespace archemist::state
