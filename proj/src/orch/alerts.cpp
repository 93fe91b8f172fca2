#include "archemist/orch/alerts.hpp"

namespace archemist::orch {

bool rule_holds(const state::AlertRule& rule, const state::WorkflowState& s) {
  switch (rule.kind) {
    case state::RuleKind::material_below: {
      auto it = s.materials.find(rule.material);
      return it != s.materials.end() && it->second.remaining < rule.threshold;
    }
    case state::RuleKind::failed_samples_at_least:
      return static_cast<double>(s.count(state::AssignmentKind::failed)) >= rule.threshold;
  }
  return false;
}

std::vector<state::Event> evaluate_alerts(const state::WorkflowState& s, Tick tick) {
  std::vector<state::Event> out;
  for (const auto& rule : s.alert_rules) {
    const bool holds = rule_holds(rule, s);
    const bool raised = s.active_rules.count(rule.id) != 0;
    if (holds && !raised) {
      std::string msg;
      if (rule.kind == state::RuleKind::material_below) {
        const auto& m = s.materials.at(rule.material);
        msg = rule.material + " below threshold (" + to_string(Quantity{m.remaining, m.unit}) + " < " +
              to_string(Quantity{rule.threshold, m.unit}) + ")";
      } else {
        msg = std::to_string(s.count(state::AssignmentKind::failed)) + " failed samples";
      }
      out.push_back(state::events::raise_alert(rule.id, rule.severity, msg, tick));
    } else if (!holds && raised) {
      out.push_back(state::events::clear_rule(rule.id, tick));
    }
  }
  return out;
}

}  // namespace archemist::orch
