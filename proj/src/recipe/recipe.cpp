#include <fstream>
#include <sstream>

#include "archemist/error.hpp"
#include "archemist/recipe/recipe.hpp"

namespace archemist::recipe {

const ParamValue* OperationSpec::find(std::string_view name) const {
  for (const auto& p : properties)
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<std::string> OperationSpec::task_tokens() const {
  std::vector<std::string> out;
  for (const auto& p : properties) {
    if (p.kind == ParamKind::quantity) {
      out.push_back(format_number(p.quantity.value));
      out.emplace_back(symbol(p.quantity.unit));
    } else {
      out.push_back(p.text);
    }
  }
  return out;
}

const OperationSpec* StationOps::find(std::string_view op) const {
  for (const auto& o : ops)
    if (o.op_name == op) return &o;
  return nullptr;
}

const FlowNode* FlowGraph::find(std::string_view id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::vector<std::string> FlowGraph::ids() const {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.id);
  return out;
}

const StationOps* Recipe::station(std::string_view id) const {
  for (const auto& s : stations)
    if (s.station == id) return &s;
  return nullptr;
}

const OperationSpec* Recipe::op(std::string_view station_id, std::string_view op_name) const {
  const auto* s = station(station_id);
  return s ? s->find(op_name) : nullptr;
}

std::optional<Phase> Recipe::phase_of(std::string_view material) const {
  std::string m(material);
  if (solids.count(m)) return Phase::solid;
  if (liquids.count(m)) return Phase::liquid;
  return std::nullopt;
}

const std::string& advance_flow(const FlowGraph& flow, std::string_view cursor, bool outcome_success) {
  const FlowNode* node = flow.find(cursor);
  if (node == nullptr) throw Error(ErrorCode::InvalidCursor, "no flow node '" + std::string(cursor) + "'");
  if (node->is_end()) throw Error(ErrorCode::InvalidCursor, "'end' has no successor");
  return outcome_success ? node->on_success : node->on_fail;
}

ParseResult load_recipe_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({DiagCode::Syntax, {}, "cannot read recipe file '" + path + "'", std::nullopt});
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_recipe(RecipeDoc{ss.str(), path});
}

}  // namespace archemist::recipe
