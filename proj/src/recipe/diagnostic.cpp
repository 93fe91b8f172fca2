#include "archemist/recipe/diagnostic.hpp"

#include <algorithm>

namespace archemist::recipe {

std::string_view code_id(DiagCode code) {
  switch (code) {
    case DiagCode::Syntax: return "R001";
    case DiagCode::MissingKey: return "R101";
    case DiagCode::UnknownKey: return "R102";
    case DiagCode::DuplicateKey: return "R103";
    case DiagCode::WrongType: return "R104";
    case DiagCode::UndeclaredMaterial: return "R201";
    case DiagCode::MaterialPhase: return "R202";
    case DiagCode::UnknownStation: return "R203";
    case DiagCode::UnknownOperation: return "R204";
    case DiagCode::DanglingTarget: return "R205";
    case DiagCode::BadUnit: return "R206";
    case DiagCode::NonPositiveQuantity: return "R207";
    case DiagCode::TaskMismatch: return "R208";
    case DiagCode::BadPredicate: return "R209";
    case DiagCode::MissingStart: return "R301";
    case DiagCode::MissingEnd: return "R302";
    case DiagCode::UnreachableEnd: return "R303";
    case DiagCode::DeadEnd: return "R304";
    case DiagCode::FailCycle: return "R305";
    case DiagCode::UnguardedCycle: return "R306";
  }
  return "R000";
}

std::string_view code_name(DiagCode code) {
  switch (code) {
    case DiagCode::Syntax: return "SyntaxError";
    case DiagCode::MissingKey: return "MissingKey";
    case DiagCode::UnknownKey: return "UnknownKey";
    case DiagCode::DuplicateKey: return "DuplicateKey";
    case DiagCode::WrongType: return "WrongType";
    case DiagCode::UndeclaredMaterial: return "UndeclaredMaterial";
    case DiagCode::MaterialPhase: return "MaterialPhase";
    case DiagCode::UnknownStation: return "UnknownStation";
    case DiagCode::UnknownOperation: return "UnknownOperation";
    case DiagCode::DanglingTarget: return "DanglingTarget";
    case DiagCode::BadUnit: return "BadUnit";
    case DiagCode::NonPositiveQuantity: return "NonPositiveQuantity";
    case DiagCode::TaskMismatch: return "TaskMismatch";
    case DiagCode::BadPredicate: return "BadPredicate";
    case DiagCode::MissingStart: return "MissingStart";
    case DiagCode::MissingEnd: return "MissingEnd";
    case DiagCode::UnreachableEnd: return "UnreachableEnd";
    case DiagCode::DeadEnd: return "DeadEnd";
    case DiagCode::FailCycle: return "FailCycle";
    case DiagCode::UnguardedCycle: return "UnguardedCycle";
  }
  return "Unknown";
}

DiagCategory category(DiagCode code) {
  switch (code) {
    case DiagCode::Syntax: return DiagCategory::syntax;
    case DiagCode::MissingKey:
    case DiagCode::UnknownKey:
    case DiagCode::DuplicateKey:
    case DiagCode::WrongType: return DiagCategory::schema;
    case DiagCode::MissingStart:
    case DiagCode::MissingEnd:
    case DiagCode::UnreachableEnd:
    case DiagCode::DeadEnd:
    case DiagCode::FailCycle:
    case DiagCode::UnguardedCycle: return DiagCategory::flow;
    default: return DiagCategory::semantic;
  }
}

std::string_view to_string(DiagCategory c) {
  switch (c) {
    case DiagCategory::syntax: return "SyntaxError";
    case DiagCategory::schema: return "SchemaError";
    case DiagCategory::semantic: return "SemanticError";
    case DiagCategory::flow: return "FlowError";
  }
  return "Error";
}

std::string format(const Diagnostic& d, std::string_view path) {
  std::string out;
  if (!path.empty()) {
    out += path;
    out += ':';
  }
  out += std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) + ": ";
  out += "error[" + std::string(code_id(d.code)) + "] " + std::string(to_string(category(d.code))) + ": ";
  out += d.message;
  if (d.suggestion) out += " (did you mean '" + *d.suggestion + "'?)";
  return out;
}

namespace {
std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}
}  // namespace

std::optional<std::string> nearest(std::string_view word, const std::vector<std::string>& candidates) {
  std::optional<std::string> best;
  std::size_t best_d = 0;
  for (const auto& c : candidates) {
    std::size_t d = edit_distance(word, c);
    if (!best || d < best_d || (d == best_d && c < *best)) {
      best = c;
      best_d = d;
    }
  }
  if (!best) return std::nullopt;
  std::size_t limit = std::max<std::size_t>(2, word.size() / 3);
  if (best_d == 0 || best_d > limit) return std::nullopt;
  return best;
}

}  // namespace archemist::recipe
