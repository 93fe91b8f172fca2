#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "archemist/recipe/diagnostic.hpp"
#include "archemist/units.hpp"

namespace archemist::recipe {

inline constexpr std::string_view kStartNode = "start";
inline constexpr std::string_view kEndNode = "end";
inline constexpr int kDefaultMaxIterations = 1000;

enum class Phase { solid, liquid };

enum class ParamKind { solid, liquid, quantity, text };

struct ParamValue {
  std::string name;
  ParamKind kind = ParamKind::text;
  std::string text;   // material name for solid/liquid, raw value for text
  Quantity quantity;  // only for ParamKind::quantity

  friend bool operator==(const ParamValue&, const ParamValue&) = default;
};

enum class PredicateKind { below, above, stable };

/// Maps a measurement reading onto the success edge of the flow.
/// `stable`: the last `window` consecutive deltas of `reading` are all below `limit`.
struct OutcomePredicate {
  PredicateKind kind = PredicateKind::below;
  std::string reading;
  double limit = 0.0;
  int window = 2;

  friend bool operator==(const OutcomePredicate&, const OutcomePredicate&) = default;
};

struct OutputSpec {
  std::string name;
  std::optional<OutcomePredicate> predicate;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct OperationSpec {
  std::string op_name;
  std::vector<ParamValue> properties;  // declaration order
  OutputSpec output;
  SourcePos pos;

  const ParamValue* find(std::string_view name) const;
  /// Positional form used by flow `task` literals: material names, then number/unit pairs.
  std::vector<std::string> task_tokens() const;

  friend bool operator==(const OperationSpec& a, const OperationSpec& b) {
    return a.op_name == b.op_name && a.properties == b.properties && a.output == b.output;
  }
};

struct StationOps {
  std::string station;
  std::vector<OperationSpec> ops;
  SourcePos pos;

  const OperationSpec* find(std::string_view op) const;

  friend bool operator==(const StationOps& a, const StationOps& b) {
    return a.station == b.station && a.ops == b.ops;
  }
};

struct FlowNode {
  std::string id;
  std::string station;                // empty for start/end
  std::optional<OperationSpec> task;  // resolved against the station's ops
  std::string on_success;             // empty for end
  std::string on_fail;
  SourcePos pos;
  SourcePos on_success_pos;
  SourcePos on_fail_pos;

  bool is_start() const { return id == kStartNode; }
  bool is_end() const { return id == kEndNode; }
  /// A node whose outcome is a threshold/stability test may sit on a success cycle.
  bool guarded() const { return task && task->output.predicate.has_value(); }

  friend bool operator==(const FlowNode& a, const FlowNode& b) {
    return a.id == b.id && a.station == b.station && a.task == b.task &&
           a.on_success == b.on_success && a.on_fail == b.on_fail;
  }
};

struct FlowGraph {
  std::vector<FlowNode> nodes;  // declaration order

  const FlowNode* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  std::vector<std::string> ids() const;

  friend bool operator==(const FlowGraph&, const FlowGraph&) = default;
};

struct Recipe {
  std::string name;
  std::set<std::string> liquids;
  std::set<std::string> solids;
  std::vector<StationOps> stations;  // declaration order
  FlowGraph flow;
  int max_iterations = kDefaultMaxIterations;

  const StationOps* station(std::string_view id) const;
  const OperationSpec* op(std::string_view station, std::string_view op) const;
  std::optional<Phase> phase_of(std::string_view material) const;

  friend bool operator==(const Recipe&, const Recipe&) = default;
};

struct RecipeDoc {
  std::string text;
  std::string path;
};

struct ParseResult {
  std::optional<Recipe> recipe;
  DiagnosticList diagnostics;

  bool ok() const { return recipe.has_value(); }
};

/// Deterministic: the same text always yields the same recipe or the same ordered diagnostics.
ParseResult parse_recipe(const RecipeDoc& doc);

/// Static analysis of a structurally parsed flow; empty iff every flow invariant holds.
DiagnosticList validate_flow(const FlowGraph& flow);

/// Pure successor function. Throws Error{InvalidCursor} for unknown nodes and for `end`.
const std::string& advance_flow(const FlowGraph& flow, std::string_view cursor, bool outcome_success);

/// Canonical YAML text; reparses to an equal Recipe.
std::string serialize(const Recipe& recipe);

ParseResult load_recipe_file(const std::string& path);

}  // namespace archemist::recipe
