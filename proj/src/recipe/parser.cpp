#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include "archemist/recipe/recipe.hpp"

namespace archemist::recipe {
namespace {

SourcePos pos_of(const YAML::Node& n) {
  const auto m = n.Mark();
  if (m.is_null()) return {};
  return {m.line + 1, m.column + 1};
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Expected dimension for well-known parameter names.
std::optional<Dimension> expected_dimension(std::string_view name) {
  if (name == "mass") return Dimension::mass;
  if (name == "volume") return Dimension::volume;
  if (name == "temperature") return Dimension::temperature;
  if (name == "duration") return Dimension::time;
  if (name == "stir_rate" || name == "rate" || name == "speed") return Dimension::rate;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(const RecipeDoc& doc) : doc_(doc) {}

  ParseResult run() {
    ParseResult result;
    YAML::Node root;
    try {
      root = YAML::Load(doc_.text);
    } catch (const YAML::ParserException& e) {
      add(DiagCode::Syntax, {e.mark.line + 1, e.mark.column + 1}, e.msg);
      result.diagnostics = std::move(diags_);
      return result;
    }
    if (!root.IsMap()) {
      add(DiagCode::WrongType, pos_of(root), "recipe document must be a mapping with a 'chemical_recipe' key");
      result.diagnostics = std::move(diags_);
      return result;
    }

    auto top = keyed(root, {"chemical_recipe"}, "document");
    auto body = top.find("chemical_recipe");
    if (body == top.end()) {
      add(DiagCode::MissingKey, pos_of(root), "missing key 'chemical_recipe'");
      result.diagnostics = std::move(diags_);
      return result;
    }

    Recipe recipe;
    bool flow_parsed = parse_body(body->second.value, recipe);
    if (flow_parsed) {
      auto flow_diags = validate_flow(recipe.flow);
      diags_.insert(diags_.end(), flow_diags.begin(), flow_diags.end());
    }
    if (diags_.empty()) result.recipe = std::move(recipe);
    result.diagnostics = std::move(diags_);
    return result;
  }

 private:
  struct Entry {
    YAML::Node key;
    YAML::Node value;
  };
  using Keyed = std::map<std::string, Entry>;

  void add(DiagCode code, SourcePos pos, std::string message, std::optional<std::string> suggestion = {}) {
    diags_.push_back(Diagnostic{code, pos, std::move(message), std::move(suggestion)});
  }

  // Schema keywords are matched case-insensitively and canonicalized; anything else is reported.
  Keyed keyed(const YAML::Node& map, std::initializer_list<std::string_view> allowed, std::string_view where) {
    Keyed out;
    std::vector<std::string> allowed_list(allowed.begin(), allowed.end());
    for (auto it = map.begin(); it != map.end(); ++it) {
      YAML::Node key = it->first;
      std::string raw = key.IsScalar() ? key.Scalar() : std::string();
      std::string canon;
      for (auto a : allowed)
        if (lower(a) == lower(raw)) canon = std::string(a);
      if (canon.empty()) {
        add(DiagCode::UnknownKey, pos_of(key), "unknown key '" + raw + "' in " + std::string(where),
            nearest(raw, allowed_list));
        continue;
      }
      if (out.count(canon)) {
        add(DiagCode::DuplicateKey, pos_of(key), "duplicate key '" + canon + "' in " + std::string(where));
        continue;
      }
      out.emplace(canon, Entry{key, it->second});
    }
    return out;
  }

  // Ordered entries of an identifier-keyed map (case-sensitive), rejecting duplicates.
  std::vector<Entry> entries(const YAML::Node& map, std::string_view where) {
    std::vector<Entry> out;
    for (auto it = map.begin(); it != map.end(); ++it) {
      YAML::Node key = it->first;
      if (!key.IsScalar()) {
        add(DiagCode::WrongType, pos_of(key), "expected a scalar key in " + std::string(where));
        continue;
      }
      bool dup = std::any_of(out.begin(), out.end(), [&](const Entry& e) { return e.key.Scalar() == key.Scalar(); });
      if (dup) {
        add(DiagCode::DuplicateKey, pos_of(key), "duplicate key '" + key.Scalar() + "' in " + std::string(where));
        continue;
      }
      out.push_back(Entry{key, it->second});
    }
    return out;
  }

  bool require_map(const YAML::Node& n, const YAML::Node& key, std::string_view what) {
    if (n.IsMap()) return true;
    add(DiagCode::WrongType, n.IsNull() ? pos_of(key) : pos_of(n), std::string(what) + " must be a mapping");
    return false;
  }

  std::optional<std::string> scalar(const Keyed& k, const std::string& name, const YAML::Node& owner, bool required) {
    auto it = k.find(name);
    if (it == k.end()) {
      if (required) add(DiagCode::MissingKey, pos_of(owner), "missing key '" + name + "'");
      return std::nullopt;
    }
    if (!it->second.value.IsScalar()) {
      add(DiagCode::WrongType, pos_of(it->second.key), "'" + name + "' must be a scalar");
      return std::nullopt;
    }
    return it->second.value.Scalar();
  }

  bool parse_body(const YAML::Node& body, Recipe& recipe) {
    if (!body.IsMap()) {
      add(DiagCode::WrongType, pos_of(body), "'chemical_recipe' must be a mapping");
      return false;
    }
    auto k = keyed(body, {"name", "materials", "stations", "stationFlow", "maxIterations"}, "chemical_recipe");
    if (auto name = scalar(k, "name", body, true)) recipe.name = *name;

    if (auto it = k.find("materials"); it != k.end()) {
      parse_materials(it->second, recipe);
    } else {
      add(DiagCode::MissingKey, pos_of(body), "missing key 'materials'");
    }

    if (auto it = k.find("maxIterations"); it != k.end()) {
      auto v = it->second.value.IsScalar() ? parse_number(it->second.value.Scalar()) : std::nullopt;
      if (!v || *v < 1 || *v != static_cast<int>(*v)) {
        add(DiagCode::WrongType, pos_of(it->second.value), "'maxIterations' must be a positive integer");
      } else {
        recipe.max_iterations = static_cast<int>(*v);
      }
    }

    if (auto it = k.find("stations"); it != k.end()) parse_stations(it->second, recipe);

    auto fit = k.find("stationFlow");
    if (fit == k.end()) {
      add(DiagCode::MissingKey, pos_of(body), "missing key 'stationFlow'");
      return false;
    }
    return parse_flow(fit->second, recipe);
  }

  void material_set(const Entry& e, std::set<std::string>& out) {
    const YAML::Node& v = e.value;
    auto insert = [&](const YAML::Node& n) {
      if (!n.IsScalar() || n.Scalar().empty()) {
        add(DiagCode::WrongType, pos_of(n), "material names must be scalars");
        return;
      }
      if (!out.insert(n.Scalar()).second)
        add(DiagCode::DuplicateKey, pos_of(n), "material '" + n.Scalar() + "' listed twice");
    };
    if (v.IsNull()) return;
    if (v.IsMap()) {
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!it->second.IsNull()) add(DiagCode::WrongType, pos_of(it->second), "material set entries take no value");
        insert(it->first);
      }
    } else if (v.IsSequence()) {
      for (const auto& n : v) insert(n);
    } else {
      insert(v);
    }
  }

  void parse_materials(const Entry& e, Recipe& recipe) {
    if (e.value.IsNull()) return;
    if (!require_map(e.value, e.key, "'materials'")) return;
    auto k = keyed(e.value, {"liquids", "solids"}, "materials");
    if (auto it = k.find("liquids"); it != k.end()) material_set(it->second, recipe.liquids);
    if (auto it = k.find("solids"); it != k.end()) material_set(it->second, recipe.solids);
    for (const auto& m : recipe.liquids) {
      if (recipe.solids.count(m))
        add(DiagCode::MaterialPhase, pos_of(e.key), "material '" + m + "' declared both liquid and solid");
    }
  }

  std::vector<std::string> material_names(const Recipe& r) const {
    std::vector<std::string> all(r.liquids.begin(), r.liquids.end());
    all.insert(all.end(), r.solids.begin(), r.solids.end());
    return all;
  }

  void parse_stations(const Entry& e, Recipe& recipe) {
    if (e.value.IsNull()) return;
    if (!require_map(e.value, e.key, "'stations'")) return;
    for (const auto& st : entries(e.value, "stations")) {
      StationOps ops;
      ops.station = st.key.Scalar();
      ops.pos = pos_of(st.key);
      if (!require_map(st.value, st.key, "station '" + ops.station + "'")) continue;
      auto k = keyed(st.value, {"stationOp"}, "station '" + ops.station + "'");
      auto it = k.find("stationOp");
      if (it == k.end()) {
        add(DiagCode::MissingKey, ops.pos, "station '" + ops.station + "' has no 'stationOp'");
        continue;
      }
      if (!require_map(it->second.value, it->second.key, "'stationOp'")) continue;
      for (const auto& op : entries(it->second.value, "stationOp")) {
        if (auto spec = parse_op(op, recipe)) ops.ops.push_back(std::move(*spec));
      }
      if (ops.ops.empty()) add(DiagCode::MissingKey, ops.pos, "station '" + ops.station + "' declares no operations");
      recipe.stations.push_back(std::move(ops));
    }
  }

  std::optional<OperationSpec> parse_op(const Entry& e, const Recipe& recipe) {
    OperationSpec spec;
    spec.op_name = e.key.Scalar();
    spec.pos = pos_of(e.key);
    if (!require_map(e.value, e.key, "operation '" + spec.op_name + "'")) return std::nullopt;
    auto k = keyed(e.value, {"properties", "output"}, "operation '" + spec.op_name + "'");
    if (auto it = k.find("properties"); it != k.end()) parse_properties(it->second, spec, recipe);
    auto out = k.find("output");
    if (out == k.end()) {
      add(DiagCode::MissingKey, spec.pos, "operation '" + spec.op_name + "' has no 'output'");
    } else {
      parse_output(out->second, spec);
    }
    return spec;
  }

  void parse_properties(const Entry& e, OperationSpec& spec, const Recipe& recipe) {
    if (e.value.IsNull()) return;
    if (!require_map(e.value, e.key, "'properties'")) return;
    std::optional<Entry> unit_entry;
    std::vector<std::pair<std::size_t, YAML::Node>> bare;  // index into properties, value node
    for (const auto& p : entries(e.value, "properties")) {
      const std::string& name = p.key.Scalar();
      if (!p.value.IsScalar()) {
        add(DiagCode::WrongType, pos_of(p.key), "property '" + name + "' must be a scalar");
        continue;
      }
      const std::string& raw = p.value.Scalar();
      if (name == "unit") {
        unit_entry = p;
        continue;
      }
      ParamValue pv;
      pv.name = name;
      if (name == "solid" || name == "liquid") {
        pv.kind = name == "solid" ? ParamKind::solid : ParamKind::liquid;
        pv.text = raw;
        auto phase = recipe.phase_of(raw);
        if (!phase) {
          add(DiagCode::UndeclaredMaterial, pos_of(p.value), "material '" + raw + "' is not declared under materials",
              nearest(raw, material_names(recipe)));
        } else if ((*phase == Phase::solid) != (pv.kind == ParamKind::solid)) {
          add(DiagCode::MaterialPhase, pos_of(p.value),
              "material '" + raw + "' is declared as " + (*phase == Phase::solid ? "a solid" : "a liquid"));
        }
        spec.properties.push_back(std::move(pv));
        continue;
      }
      bool quoted = p.value.Tag() == "!";
      if (auto num = quoted ? std::nullopt : parse_number(raw)) {
        pv.kind = ParamKind::quantity;
        pv.quantity.value = *num;
        bare.emplace_back(spec.properties.size(), p.value);
        spec.properties.push_back(std::move(pv));
        continue;
      }
      // "<number> <unit>" inline quantity
      auto space = raw.find(' ');
      if (!quoted && space != std::string::npos) {
        auto num = parse_number(std::string_view(raw).substr(0, space));
        auto unit_text = std::string_view(raw).substr(raw.find_first_not_of(' ', space));
        if (num) {
          auto unit = parse_unit(unit_text);
          if (!unit) {
            add(DiagCode::BadUnit, pos_of(p.value), "unsupported unit '" + std::string(unit_text) + "'");
            continue;
          }
          pv.kind = ParamKind::quantity;
          pv.quantity = Quantity{*num, *unit};
          check_quantity(pv, pos_of(p.value));
          spec.properties.push_back(std::move(pv));
          continue;
        }
      }
      pv.kind = ParamKind::text;
      pv.text = raw;
      spec.properties.push_back(std::move(pv));
    }

    if (unit_entry) {
      auto unit = parse_unit(unit_entry->value.Scalar());
      if (!unit) {
        add(DiagCode::BadUnit, pos_of(unit_entry->value), "unsupported unit '" + unit_entry->value.Scalar() + "'");
        bare.clear();
      } else if (bare.size() != 1) {
        add(DiagCode::BadUnit, pos_of(unit_entry->key),
            "'unit' must accompany exactly one bare quantity, found " + std::to_string(bare.size()));
        bare.clear();
      } else {
        auto& pv = spec.properties[bare.front().first];
        pv.quantity.unit = *unit;
        check_quantity(pv, pos_of(bare.front().second));
        bare.clear();
      }
    }
    for (const auto& [idx, node] : bare) {
      add(DiagCode::BadUnit, pos_of(node), "quantity '" + spec.properties[idx].name + "' has no unit");
    }
  }

  void check_quantity(const ParamValue& pv, SourcePos pos) {
    if (auto dim = expected_dimension(pv.name); dim && *dim != dimension_of(pv.quantity.unit)) {
      add(DiagCode::BadUnit, pos,
          "unit '" + std::string(symbol(pv.quantity.unit)) + "' does not fit parameter '" + pv.name + "'");
    }
    if (!(pv.quantity.value > 0.0)) {
      add(DiagCode::NonPositiveQuantity, pos, "quantity '" + pv.name + "' must be strictly positive");
    }
  }

  void parse_output(const Entry& e, OperationSpec& spec) {
    if (!require_map(e.value, e.key, "'output'")) return;
    auto k = keyed(e.value, {"name", "predicate"}, "output");
    if (auto name = scalar(k, "name", e.key, true)) spec.output.name = *name;
    auto it = k.find("predicate");
    if (it == k.end()) return;
    const Entry& p = it->second;
    if (!require_map(p.value, p.key, "'predicate'")) return;
    auto pk = keyed(p.value, {"kind", "reading", "threshold", "epsilon", "window"}, "predicate");
    OutcomePredicate pred;
    auto kind = scalar(pk, "kind", p.key, true);
    auto reading = scalar(pk, "reading", p.key, true);
    if (!kind || !reading) return;
    pred.reading = *reading;
    auto number_of = [&](const char* key) -> std::optional<double> {
      auto s = scalar(pk, key, p.key, true);
      if (!s) return std::nullopt;
      auto v = parse_number(*s);
      if (!v) add(DiagCode::BadPredicate, pos_of(pk.at(key).value), std::string("'") + key + "' must be a number");
      return v;
    };
    std::string kl = lower(*kind);
    if (kl == "below" || kl == "above") {
      pred.kind = kl == "below" ? PredicateKind::below : PredicateKind::above;
      auto t = number_of("threshold");
      if (!t) return;
      pred.limit = *t;
      pred.window = 0;
    } else if (kl == "stable") {
      pred.kind = PredicateKind::stable;
      auto eps = number_of("epsilon");
      if (!eps) return;
      if (!(*eps > 0.0)) {
        add(DiagCode::BadPredicate, pos_of(pk.at("epsilon").value), "'epsilon' must be positive");
        return;
      }
      pred.limit = *eps;
      pred.window = 2;
      if (pk.count("window")) {
        auto w = number_of("window");
        if (!w) return;
        if (*w < 1 || *w != static_cast<int>(*w)) {
          add(DiagCode::BadPredicate, pos_of(pk.at("window").value), "'window' must be a positive integer");
          return;
        }
        pred.window = static_cast<int>(*w);
      }
    } else {
      add(DiagCode::BadPredicate, pos_of(pk.at("kind").value), "unknown predicate kind '" + *kind + "'",
          nearest(kl, {"below", "above", "stable"}));
      return;
    }
    spec.output.predicate = pred;
  }

  std::vector<std::string> station_names(const Recipe& r) const {
    std::vector<std::string> out;
    for (const auto& s : r.stations) out.push_back(s.station);
    return out;
  }

  std::optional<std::vector<YAML::Node>> task_items(const YAML::Node& t) {
    std::vector<YAML::Node> items;
    if (t.IsMap()) {
      for (auto it = t.begin(); it != t.end(); ++it) {
        if (!it->second.IsNull()) {
          add(DiagCode::WrongType, pos_of(it->second), "task literal entries take no value");
          return std::nullopt;
        }
        items.push_back(it->first);
      }
    } else if (t.IsSequence()) {
      for (const auto& n : t) items.push_back(n);
    } else if (t.IsScalar()) {
      items.push_back(t);
    }
    for (const auto& n : items) {
      if (!n.IsScalar()) {
        add(DiagCode::WrongType, pos_of(n), "task literal entries must be scalars");
        return std::nullopt;
      }
    }
    if (items.empty()) {
      add(DiagCode::WrongType, pos_of(t), "task literal must name an operation");
      return std::nullopt;
    }
    return items;
  }

  static bool token_matches(const std::string& expected, const std::string& got) {
    if (expected == got) return true;
    auto a = parse_number(expected);
    auto b = parse_number(got);
    if (a && b) return *a == *b;
    auto ua = parse_unit(expected);
    auto ub = parse_unit(got);
    return ua && ub && *ua == *ub;
  }

  bool parse_flow(const Entry& e, Recipe& recipe) {
    if (!require_map(e.value, e.key, "'stationFlow'")) return false;
    for (const auto& ne : entries(e.value, "stationFlow")) {
      FlowNode node;
      node.id = ne.key.Scalar();
      node.pos = pos_of(ne.key);
      if (node.is_end()) {
        if (!ne.value.IsNull() && !(ne.value.IsMap() && ne.value.size() == 0))
          add(DiagCode::WrongType, pos_of(ne.key), "'end' takes no fields");
        recipe.flow.nodes.push_back(std::move(node));
        continue;
      }
      if (!require_map(ne.value, ne.key, "flow node '" + node.id + "'")) {
        recipe.flow.nodes.push_back(std::move(node));
        continue;
      }
      Keyed k = node.is_start() ? keyed(ne.value, {"onSuccess", "onFail"}, "flow node 'start'")
                                : keyed(ne.value, {"station", "task", "onSuccess", "onFail"},
                                        "flow node '" + node.id + "'");
      if (auto s = scalar(k, "onSuccess", ne.key, true)) {
        node.on_success = *s;
        node.on_success_pos = pos_of(k.at("onSuccess").value);
      }
      if (auto s = scalar(k, "onFail", ne.key, true)) {
        node.on_fail = *s;
        node.on_fail_pos = pos_of(k.at("onFail").value);
      }
      if (!node.is_start()) resolve_task(k, ne, node, recipe);
      recipe.flow.nodes.push_back(std::move(node));
    }
    return true;
  }

  void resolve_task(const Keyed& k, const Entry& ne, FlowNode& node, const Recipe& recipe) {
    auto station = scalar(k, "station", ne.key, true);
    if (!station) return;
    node.station = *station;
    const StationOps* ops = recipe.station(node.station);
    if (ops == nullptr) {
      add(DiagCode::UnknownStation, pos_of(k.at("station").value),
          "flow node '" + node.id + "' references undeclared station '" + node.station + "'",
          nearest(node.station, station_names(recipe)));
    }
    auto tit = k.find("task");
    if (tit == k.end()) {
      add(DiagCode::MissingKey, node.pos, "flow node '" + node.id + "' has no 'task'");
      return;
    }
    auto items = task_items(tit->second.value);
    if (!items || ops == nullptr) return;
    const std::string op_name = items->front().Scalar();
    const OperationSpec* spec = ops->find(op_name);
    if (spec == nullptr) {
      std::vector<std::string> names;
      for (const auto& o : ops->ops) names.push_back(o.op_name);
      add(DiagCode::UnknownOperation, pos_of(items->front()),
          "station '" + node.station + "' has no operation '" + op_name + "'", nearest(op_name, names));
      return;
    }
    if (items->size() > 1) {
      auto expected = spec->task_tokens();
      std::size_t given = items->size() - 1;
      if (given != expected.size()) {
        add(DiagCode::TaskMismatch, pos_of(tit->second.value),
            "task for '" + node.id + "' lists " + std::to_string(given) + " values but operation '" + op_name +
                "' declares " + std::to_string(expected.size()));
      } else {
        for (std::size_t i = 0; i < given; ++i) {
          const auto& item = (*items)[i + 1];
          if (!token_matches(expected[i], item.Scalar())) {
            add(DiagCode::TaskMismatch, pos_of(item),
                "task value '" + item.Scalar() + "' disagrees with declared '" + expected[i] + "'");
          }
        }
      }
    }
    node.task = *spec;
  }

  const RecipeDoc& doc_;
  DiagnosticList diags_;
};

}  // namespace

ParseResult parse_recipe(const RecipeDoc& doc) { return Parser(doc).run(); }

}  // namespace archemist::recipe
