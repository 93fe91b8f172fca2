#include <sstream>

#include "archemist/recipe/recipe.hpp"

namespace archemist::recipe {
namespace {

bool plain_safe(std::string_view s) {
  if (s.empty()) return false;
  static constexpr std::string_view reserved[] = {"true", "false", "null", "yes", "no", "on", "off", "~"};
  for (auto r : reserved)
    if (s == r) return false;
  for (unsigned char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
              c == '.' || c == '(' || c == ')' || c >= 0x80;
    if (!ok) return false;
  }
  return !(s.front() == '-' || s.front() == '.');
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

// Identifiers that would read back as numbers must be quoted too.
std::string ident(std::string_view s) {
  if (!plain_safe(s)) return quoted(s);
  bool numeric = !s.empty() && s.find_first_not_of("0123456789.eE+-") == std::string_view::npos;
  return numeric ? quoted(s) : std::string(s);
}

std::string material_set(const std::set<std::string>& items) {
  if (items.empty()) return "{}";
  std::string out = "{ ";
  bool first = true;
  for (const auto& m : items) {
    if (!first) out += ", ";
    out += ident(m);
    first = false;
  }
  return out + " }";
}

void emit_properties(std::ostringstream& os, const OperationSpec& op) {
  if (op.properties.empty()) return;
  std::size_t quantities = 0;
  for (const auto& p : op.properties)
    if (p.kind == ParamKind::quantity) ++quantities;
  os << "          properties:\n";
  for (const auto& p : op.properties) {
    os << "            " << ident(p.name) << ": ";
    switch (p.kind) {
      case ParamKind::solid:
      case ParamKind::liquid: os << ident(p.text) << "\n"; break;
      case ParamKind::text: os << quoted(p.text) << "\n"; break;
      case ParamKind::quantity:
        if (quantities == 1) {
          os << format_number(p.quantity.value) << "\n";
          os << "            unit: " << symbol(p.quantity.unit) << "\n";
        } else {
          os << to_string(p.quantity) << "\n";
        }
        break;
    }
  }
}

void emit_predicate(std::ostringstream& os, const OutcomePredicate& p) {
  os << "            predicate: {kind: ";
  switch (p.kind) {
    case PredicateKind::below: os << "below, reading: " << ident(p.reading) << ", threshold: "; break;
    case PredicateKind::above: os << "above, reading: " << ident(p.reading) << ", threshold: "; break;
    case PredicateKind::stable: os << "stable, reading: " << ident(p.reading) << ", epsilon: "; break;
  }
  os << format_number(p.limit);
  if (p.kind == PredicateKind::stable) os << ", window: " << p.window;
  os << "}\n";
}

std::string task_literal(const OperationSpec& op) {
  std::string out = "{" + quoted(op.op_name);
  for (const auto& p : op.properties) {
    out += ", ";
    if (p.kind == ParamKind::quantity) {
      out += format_number(p.quantity.value) + ", " + quoted(symbol(p.quantity.unit));
    } else if (p.kind == ParamKind::text) {
      out += quoted(p.text);
    } else {
      out += ident(p.text);
    }
  }
  return out + "}";
}

}  // namespace

std::string serialize(const Recipe& recipe) {
  std::ostringstream os;
  os << "chemical_recipe:\n";
  os << "  name: " << ident(recipe.name) << "\n";
  if (recipe.max_iterations != kDefaultMaxIterations) os << "  maxIterations: " << recipe.max_iterations << "\n";
  os << "  materials:\n";
  os << "    liquids: " << material_set(recipe.liquids) << "\n";
  os << "    solids: " << material_set(recipe.solids) << "\n";
  if (recipe.stations.empty()) {
    os << "  stations: {}\n";
  } else {
    os << "  stations:\n";
    for (const auto& st : recipe.stations) {
      os << "    " << ident(st.station) << ":\n";
      os << "      stationOp:\n";
      for (const auto& op : st.ops) {
        os << "        " << ident(op.op_name) << ":\n";
        emit_properties(os, op);
        os << "          output:\n";
        os << "            name: " << quoted(op.output.name) << "\n";
        if (op.output.predicate) emit_predicate(os, *op.output.predicate);
      }
    }
  }
  os << "  stationFlow:\n";
  for (const auto& node : recipe.flow.nodes) {
    os << "    " << ident(node.id) << ":\n";
    if (node.is_end()) continue;
    if (!node.is_start()) {
      os << "      station: " << quoted(node.station) << "\n";
      if (node.task) os << "      task: " << task_literal(*node.task) << "\n";
    }
    os << "      onSuccess: " << ident(node.on_success) << "\n";
    os << "      onFail: " << ident(node.on_fail) << "\n";
  }
  return os.str();
}

}  // namespace archemist::recipe
