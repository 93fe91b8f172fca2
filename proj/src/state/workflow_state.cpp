#include <algorithm>
#include <queue>

#include "archemist/state/workflow_state.hpp"

namespace archemist::state {

const TopologyNode* Topology::find(std::string_view id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::optional<Tick> Topology::distance(std::string_view from, std::string_view to) const {
  if (from == to) return contains(from) ? std::optional<Tick>(0) : std::nullopt;
  std::map<std::string, Tick, std::less<>> best;
  using Item = std::pair<Tick, std::string>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> todo;
  best[std::string(from)] = 0;
  todo.emplace(0, std::string(from));
  while (!todo.empty()) {
    auto [d, v] = todo.top();
    todo.pop();
    if (v == to) return d;
    if (d > best[v]) continue;
    for (const auto& e : edges) {
      const std::string* next = nullptr;
      if (e.from == v) next = &e.to;
      else if (!e.oneway && e.to == v) next = &e.from;
      if (next == nullptr) continue;
      Tick nd = d + e.cost;
      auto it = best.find(*next);
      if (it == best.end() || nd < it->second) {
        best[*next] = nd;
        todo.emplace(nd, *next);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> Topology::dock_of(std::string_view site) const {
  for (const auto& n : nodes)
    if (n.site == site && n.dock) return n.id;
  return std::nullopt;
}

const ReadingSchema* OperationDescriptor::reading(std::string_view n) const {
  for (const auto& r : readings)
    if (r.name == n) return &r;
  return nullptr;
}

const OperationDescriptor* StationModel::op(std::string_view name) const {
  for (const auto& o : supported_ops)
    if (o.name == name) return &o;
  return nullptr;
}

std::string_view to_string(JobKind k) { return k == JobKind::transport ? "transport" : "manipulate"; }

std::optional<JobKind> parse_job_kind(std::string_view s) {
  if (s == "transport") return JobKind::transport;
  if (s == "manipulate") return JobKind::manipulate;
  return std::nullopt;
}

std::string_view to_string(AssignmentKind k) {
  switch (k) {
    case AssignmentKind::unassigned: return "unassigned";
    case AssignmentKind::station: return "station";
    case AssignmentKind::robot: return "robot";
    case AssignmentKind::complete: return "complete";
    case AssignmentKind::failed: return "failed";
  }
  return "unassigned";
}

std::string_view to_string(Severity s) { return s == Severity::halt ? "halt" : "notify"; }

const std::string& Sample::effective_node() const {
  if (flow_cursor == recipe::kStartNode && recipe) {
    if (const auto* start = recipe->flow.find(recipe::kStartNode)) return start->on_success;
  }
  return flow_cursor;
}

std::size_t Sample::visits(std::string_view node) const {
  return static_cast<std::size_t>(
      std::count_if(history.begin(), history.end(), [&](const OperationOutcome& o) { return o.node == node; }));
}

bool operator==(const Sample& a, const Sample& b) {
  bool same_recipe = a.recipe == b.recipe || (a.recipe && b.recipe && *a.recipe == *b.recipe);
  return a.id == b.id && a.recipe_index == b.recipe_index && same_recipe && a.contents == b.contents &&
         a.evaporated == b.evaporated && a.properties == b.properties && a.history == b.history &&
         a.transfers == b.transfers && a.location == b.location && a.flow_cursor == b.flow_cursor &&
         a.assignment == b.assignment && a.terminal_reason == b.terminal_reason &&
         a.submitted_at == b.submitted_at && a.finished_at == b.finished_at;
}

bool WorkflowState::halted() const {
  if (operator_halt) return true;
  return std::any_of(alerts.begin(), alerts.end(),
                     [](const Alert& a) { return a.severity == Severity::halt && !a.acknowledged; });
}

const RobotJob* WorkflowState::queued_job(SampleId sample) const {
  for (const auto& j : robot_job_queue)
    if (j.sample == sample) return &j;
  return nullptr;
}

bool WorkflowState::queued(SampleId sample) const { return queued_job(sample) != nullptr; }

std::size_t WorkflowState::count(AssignmentKind kind) const {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(),
                                                [&](const auto& kv) { return kv.second.assignment.kind == kind; }));
}

bool operator==(const WorkflowState& a, const WorkflowState& b) {
  if (a.recipes.size() != b.recipes.size()) return false;
  for (std::size_t i = 0; i < a.recipes.size(); ++i)
    if (a.recipes[i].text != b.recipes[i].text) return false;
  return a.topology == b.topology && a.alert_rules == b.alert_rules && a.materials == b.materials &&
         a.stations == b.stations && a.robots == b.robots && a.samples == b.samples &&
         a.robot_job_queue == b.robot_job_queue && a.alerts == b.alerts && a.active_rules == b.active_rules &&
         a.scenario == b.scenario && a.paused == b.paused && a.operator_halt == b.operator_halt &&
         a.clock == b.clock && a.revision == b.revision && a.next_sample_id == b.next_sample_id &&
         a.next_job_id == b.next_job_id && a.next_alert_id == b.next_alert_id;
}

}  // namespace archemist::state
