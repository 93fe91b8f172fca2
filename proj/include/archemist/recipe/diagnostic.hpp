#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace archemist::recipe {

struct SourcePos {
  int line = 0;    // 1-based, 0 when unknown
  int column = 0;  // 1-based, 0 when unknown
};

enum class DiagCategory { syntax, schema, semantic, flow };

enum class DiagCode {
  Syntax,
  MissingKey,
  UnknownKey,
  DuplicateKey,
  WrongType,
  UndeclaredMaterial,
  MaterialPhase,
  UnknownStation,
  UnknownOperation,
  DanglingTarget,
  BadUnit,
  NonPositiveQuantity,
  TaskMismatch,
  BadPredicate,
  MissingStart,
  MissingEnd,
  UnreachableEnd,
  DeadEnd,
  FailCycle,
  UnguardedCycle,
};

struct Diagnostic {
  DiagCode code = DiagCode::Syntax;
  SourcePos pos;
  std::string message;
  std::optional<std::string> suggestion;

  friend bool operator==(const Diagnostic& a, const Diagnostic& b) {
    return a.code == b.code && a.pos.line == b.pos.line && a.pos.column == b.pos.column &&
           a.message == b.message && a.suggestion == b.suggestion;
  }
};

using DiagnosticList = std::vector<Diagnostic>;

/// Stable identifier such as "R301"; never renumber an existing code.
std::string_view code_id(DiagCode code);
std::string_view code_name(DiagCode code);
DiagCategory category(DiagCode code);
std::string_view to_string(DiagCategory c);

/// `path:line:col: error[R301] message (did you mean 'x'?)`
std::string format(const Diagnostic& d, std::string_view path = {});

/// Closest candidate by edit distance, if it is plausibly a typo.
std::optional<std::string> nearest(std::string_view word, const std::vector<std::string>& candidates);

}  // namespace archemist::recipe
