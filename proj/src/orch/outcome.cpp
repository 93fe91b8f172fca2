#include "archemist/orch/outcome.hpp"

#include <cmath>

#include "archemist/error.hpp"

namespace archemist::orch {

bool outcome_to_success(const state::OperationOutcome& outcome, const recipe::OperationSpec& spec,
                        const std::vector<state::OperationOutcome>& prior) {
  if (!outcome.success) return false;
  if (!spec.output.predicate) return true;
  const auto& p = *spec.output.predicate;
  auto it = outcome.readings.find(p.reading);
  if (it == outcome.readings.end())
    throw Error(ErrorCode::SchemaMismatch, "outcome of '" + spec.op_name + "' lacks reading '" + p.reading + "'");
  const double value = it->second.value;
  switch (p.kind) {
    case recipe::PredicateKind::below: return value < p.limit;
    case recipe::PredicateKind::above: return value > p.limit;
    case recipe::PredicateKind::stable: {
      std::vector<double> series;
      for (const auto& o : prior) {
        if (o.node != outcome.node || !o.success) continue;
        if (auto r = o.readings.find(p.reading); r != o.readings.end()) series.push_back(r->second.value);
      }
      series.push_back(value);
      if (series.size() < static_cast<std::size_t>(p.window) + 1) return false;
      for (std::size_t i = series.size() - p.window; i < series.size(); ++i)
        if (!(std::fabs(series[i] - series[i - 1]) < p.limit)) return false;
      return true;
    }
  }
  return true;
}

}  // namespace archemist::orch
