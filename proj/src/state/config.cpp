#include "archemist/state/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "archemist/error.hpp"

namespace archemist::state {
namespace {

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  std::string where;
  if (n.IsDefined() && !n.Mark().is_null())
    where = " (line " + std::to_string(n.Mark().line + 1) + ", column " + std::to_string(n.Mark().column + 1) + ")";
  throw Error(ErrorCode::ConfigError, what + where);
}

std::string str(const YAML::Node& parent, const char* key, const std::string& ctx) {
  YAML::Node n = parent[key];
  if (!n || !n.IsScalar() || n.Scalar().empty()) fail(parent, ctx + ": missing '" + key + "'");
  return n.Scalar();
}

double number(const YAML::Node& n, const std::string& ctx) {
  if (!n.IsScalar()) fail(n, ctx + ": expected a number");
  const std::string& s = n.Scalar();
  double v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) fail(n, ctx + ": '" + s + "' is not a number");
  return v;
}

// "5000 mg" or {value: 5000, unit: mg}
Quantity quantity(const YAML::Node& n, const std::string& ctx) {
  double value = 0;
  std::string unit_text;
  if (n.IsMap()) {
    value = number(n["value"], ctx);
    unit_text = str(n, "unit", ctx);
  } else if (n.IsScalar()) {
    const std::string& s = n.Scalar();
    auto space = s.find(' ');
    if (space == std::string::npos) fail(n, ctx + ": quantity '" + s + "' needs a unit");
    YAML::Node num(s.substr(0, space));
    value = number(num, ctx);
    unit_text = s.substr(s.find_first_not_of(' ', space));
  } else {
    fail(n, ctx + ": expected a quantity");
  }
  auto unit = parse_unit(unit_text);
  if (!unit) fail(n, ctx + ": unsupported unit '" + unit_text + "'");
  return Quantity{value, *unit};
}

std::map<std::string, double> params_of(const YAML::Node& n, const std::string& ctx) {
  std::map<std::string, double> out;
  if (!n) return out;
  if (!n.IsMap()) fail(n, ctx + ": 'params' must be a mapping");
  for (auto it = n.begin(); it != n.end(); ++it) out[it->first.Scalar()] = number(it->second, ctx);
  return out;
}

DeviceConfig device(const YAML::Node& n, bool robot) {
  const char* what = robot ? "robot" : "station";
  if (!n.IsMap()) fail(n, std::string(what) + " entries must be mappings");
  DeviceConfig d;
  d.id = str(n, "id", what);
  std::string ctx = std::string(what) + " '" + d.id + "'";
  d.type = str(n, "type", ctx);
  d.location = str(n, "location", ctx);
  if (n["timeout"]) d.timeout = static_cast<Tick>(number(n["timeout"], ctx));
  d.params = params_of(n["params"], ctx);
  if (robot) {
    d.mobile = n["mobile"] && n["mobile"].as<bool>();
    YAML::Node caps = n["capabilities"];
    if (!caps || !caps.IsSequence() || caps.size() == 0) fail(n, ctx + ": needs a capabilities list");
    for (const auto& c : caps) {
      auto k = parse_job_kind(c.Scalar());
      if (!k) fail(c, ctx + ": unknown capability '" + c.Scalar() + "'");
      d.capabilities.push_back(*k);
    }
  }
  return d;
}

}  // namespace

Config parse_config(const ConfigDoc& doc) {
  YAML::Node root;
  try {
    root = YAML::Load(doc.text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::ConfigError, doc.path + ":" + std::to_string(e.mark.line + 1) + ":" +
                                            std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw Error(ErrorCode::ConfigError, "configuration must be a mapping");
  Config c;
  try {
    for (const auto& m : root["materials"]) {
      MaterialConfig mc;
      mc.name = str(m, "name", "material");
      std::string ctx = "material '" + mc.name + "'";
      std::string phase = str(m, "phase", ctx);
      if (phase == "solid") mc.phase = Phase::solid;
      else if (phase == "liquid") mc.phase = Phase::liquid;
      else fail(m["phase"], ctx + ": phase must be solid or liquid");
      mc.quantity = quantity(m["quantity"], ctx);
      if (m["density"]) mc.density = number(m["density"], ctx);
      c.materials.push_back(std::move(mc));
    }
    if (YAML::Node topo = root["topology"]) {
      for (const auto& n : topo["nodes"]) {
        TopologyNode node;
        node.id = str(n, "id", "topology node");
        node.site = n["site"] ? n["site"].Scalar() : node.id;
        node.dock = n["dock"] && n["dock"].as<bool>();
        c.topology.nodes.push_back(std::move(node));
      }
      for (const auto& e : topo["edges"]) {
        TopologyEdge edge;
        edge.from = str(e, "from", "topology edge");
        edge.to = str(e, "to", "topology edge");
        edge.cost = static_cast<Tick>(number(e["cost"], "topology edge"));
        edge.oneway = e["oneway"] && e["oneway"].as<bool>();
        c.topology.edges.push_back(std::move(edge));
      }
    }
    for (const auto& s : root["stations"]) c.stations.push_back(device(s, false));
    for (const auto& r : root["robots"]) c.robots.push_back(device(r, true));
    for (const auto& a : root["alerts"]) {
      AlertRuleConfig rule;
      rule.id = str(a, "id", "alert rule");
      std::string ctx = "alert rule '" + rule.id + "'";
      if (a["material"]) {
        rule.kind = RuleKind::material_below;
        rule.material = a["material"].Scalar();
        rule.below = quantity(a["below"], ctx);
      } else if (a["failed_samples"]) {
        rule.kind = RuleKind::failed_samples_at_least;
        rule.count = static_cast<int>(number(a["failed_samples"], ctx));
      } else {
        fail(a, ctx + ": needs 'material'/'below' or 'failed_samples'");
      }
      std::string sev = a["severity"] ? a["severity"].Scalar() : "notify";
      if (sev == "notify") rule.severity = Severity::notify;
      else if (sev == "halt") rule.severity = Severity::halt;
      else fail(a["severity"], ctx + ": severity must be notify or halt");
      c.alerts.push_back(std::move(rule));
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ConfigError, doc.path + ": " + e.what());
  }
  return c;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read configuration '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ConfigDoc{ss.str(), path});
}

WorkflowState init_from_config(const Config& config, const PluginRegistry& registry) {
  WorkflowState s;
  if (config.stations.empty()) throw Error(ErrorCode::ConfigError, "a workflow needs at least one station");
  s.topology = config.topology;
  std::set<std::string> node_ids;
  for (const auto& n : s.topology.nodes) {
    if (!node_ids.insert(n.id).second)
      throw Error(ErrorCode::ConfigError, "duplicate topology node '" + n.id + "'");
  }
  for (const auto& e : s.topology.edges) {
    if (!node_ids.count(e.from) || !node_ids.count(e.to))
      throw Error(ErrorCode::ConfigError, "topology edge " + e.from + "->" + e.to + " names an unknown node");
    if (e.cost < 0) throw Error(ErrorCode::ConfigError, "topology edge costs must be non-negative");
  }

  for (const auto& m : config.materials) {
    Material mat;
    mat.name = m.name;
    mat.phase = m.phase;
    mat.unit = m.phase == Phase::solid ? Unit::mg : Unit::mL;
    mat.density = m.density;
    if (m.phase == Phase::liquid && !(m.density > 0))
      throw Error(ErrorCode::ConfigError, "liquid '" + m.name + "' needs a positive density");
    Quantity q = convert(m.quantity, mat.unit);
    if (q.value < 0) throw Error(ErrorCode::ConfigError, "material '" + m.name + "' has negative stock");
    mat.initial = mat.remaining = q.value;
    if (!s.materials.emplace(mat.name, mat).second)
      throw Error(ErrorCode::ConfigError, "duplicate material '" + m.name + "'");
  }

  auto check_location = [&](const DeviceConfig& d) {
    if (!s.topology.contains(d.location))
      throw Error(ErrorCode::ConfigError, "'" + d.id + "' is located at unknown node '" + d.location + "'");
  };
  for (const auto& d : config.stations) {
    const auto& plugin = registry.require(d.type);
    if (plugin.role != DeviceRole::station)
      throw Error(ErrorCode::ConfigError, "type '" + d.type + "' is not a station type");
    check_location(d);
    StationModel st;
    st.id = d.id;
    st.type_name = d.type;
    st.location = d.location;
    st.supported_ops = plugin.ops;
    st.timeout_ticks = d.timeout;
    st.params = d.params;
    if (s.robots.count(d.id) || !s.stations.emplace(d.id, std::move(st)).second)
      throw Error(ErrorCode::ConfigError, "duplicate device id '" + d.id + "'");
  }
  for (const auto& d : config.robots) {
    const auto& plugin = registry.require(d.type);
    if (plugin.role != DeviceRole::robot)
      throw Error(ErrorCode::ConfigError, "type '" + d.type + "' is not a robot type");
    check_location(d);
    RobotModel r;
    r.id = d.id;
    r.type_name = d.type;
    r.location = d.location;
    r.mobile = d.mobile;
    r.capabilities.insert(d.capabilities.begin(), d.capabilities.end());
    r.timeout_ticks = d.timeout;
    r.params = d.params;
    if (r.capabilities.count(JobKind::transport) && !r.mobile)
      throw Error(ErrorCode::ConfigError, "robot '" + d.id + "' cannot transport without being mobile");
    if (s.stations.count(d.id) || !s.robots.emplace(d.id, std::move(r)).second)
      throw Error(ErrorCode::ConfigError, "duplicate device id '" + d.id + "'");
  }
  for (const auto& a : config.alerts) {
    AlertRule rule;
    rule.id = a.id;
    rule.kind = a.kind;
    rule.severity = a.severity;
    if (a.kind == RuleKind::material_below) {
      auto it = s.materials.find(a.material);
      if (it == s.materials.end())
        throw Error(ErrorCode::ConfigError, "alert rule '" + a.id + "' names unknown material '" + a.material + "'");
      rule.material = a.material;
      rule.threshold = convert(*a.below, it->second.unit).value;
    } else {
      rule.threshold = a.count;
    }
    s.alert_rules.push_back(std::move(rule));
  }
  s.revision = 1;
  return s;
}

namespace {
std::string phase_name(Phase p) { return p == Phase::solid ? "solid" : "liquid"; }
}  // namespace

nlohmann::json to_json(const Config& c) {
  using nlohmann::json;
  json j;
  j["materials"] = json::array();
  for (const auto& m : c.materials) {
    j["materials"].push_back({{"name", m.name},
                              {"phase", phase_name(m.phase)},
                              {"quantity", m.quantity.value},
                              {"unit", std::string(symbol(m.quantity.unit))},
                              {"density", m.density}});
  }
  json nodes = json::array(), edges = json::array();
  for (const auto& n : c.topology.nodes) nodes.push_back({{"id", n.id}, {"site", n.site}, {"dock", n.dock}});
  for (const auto& e : c.topology.edges)
    edges.push_back({{"from", e.from}, {"to", e.to}, {"cost", e.cost}, {"oneway", e.oneway}});
  j["topology"] = {{"nodes", nodes}, {"edges", edges}};
  auto dev = [](const DeviceConfig& d, bool robot) {
    json o = {{"id", d.id}, {"type", d.type}, {"location", d.location}, {"timeout", d.timeout}, {"params", d.params}};
    if (robot) {
      o["mobile"] = d.mobile;
      json caps = json::array();
      for (auto k : d.capabilities) caps.push_back(std::string(to_string(k)));
      o["capabilities"] = caps;
    }
    return o;
  };
  j["stations"] = json::array();
  for (const auto& d : c.stations) j["stations"].push_back(dev(d, false));
  j["robots"] = json::array();
  for (const auto& d : c.robots) j["robots"].push_back(dev(d, true));
  j["alerts"] = json::array();
  for (const auto& a : c.alerts) {
    json o = {{"id", a.id}, {"severity", std::string(to_string(a.severity))}};
    if (a.kind == RuleKind::material_below) {
      o["material"] = a.material;
      o["below"] = a.below->value;
      o["unit"] = std::string(symbol(a.below->unit));
    } else {
      o["failed_samples"] = a.count;
    }
    j["alerts"].push_back(o);
  }
  return j;
}

Config config_from_json(const nlohmann::json& j) {
  Config c;
  auto unit = [](const nlohmann::json& u) {
    auto p = parse_unit(u.get<std::string>());
    if (!p) throw Error(ErrorCode::ConfigError, "bad unit in journaled config");
    return *p;
  };
  for (const auto& m : j.at("materials")) {
    MaterialConfig mc;
    mc.name = m.at("name");
    mc.phase = m.at("phase") == "solid" ? Phase::solid : Phase::liquid;
    mc.quantity = Quantity{m.at("quantity").get<double>(), unit(m.at("unit"))};
    mc.density = m.at("density");
    c.materials.push_back(std::move(mc));
  }
  for (const auto& n : j.at("topology").at("nodes"))
    c.topology.nodes.push_back({n.at("id"), n.at("site"), n.at("dock")});
  for (const auto& e : j.at("topology").at("edges"))
    c.topology.edges.push_back({e.at("from"), e.at("to"), e.at("cost").get<Tick>(), e.at("oneway")});
  auto dev = [](const nlohmann::json& o, bool robot) {
    DeviceConfig d;
    d.id = o.at("id");
    d.type = o.at("type");
    d.location = o.at("location");
    d.timeout = o.at("timeout");
    d.params = o.at("params").get<std::map<std::string, double>>();
    if (robot) {
      d.mobile = o.at("mobile");
      for (const auto& k : o.at("capabilities")) d.capabilities.push_back(*parse_job_kind(k.get<std::string>()));
    }
    return d;
  };
  for (const auto& o : j.at("stations")) c.stations.push_back(dev(o, false));
  for (const auto& o : j.at("robots")) c.robots.push_back(dev(o, true));
  for (const auto& o : j.at("alerts")) {
    AlertRuleConfig a;
    a.id = o.at("id");
    a.severity = o.at("severity") == "halt" ? Severity::halt : Severity::notify;
    if (o.contains("material")) {
      a.kind = RuleKind::material_below;
      a.material = o.at("material");
      a.below = Quantity{o.at("below").get<double>(), unit(o.at("unit"))};
    } else {
      a.kind = RuleKind::failed_samples_at_least;
      a.count = o.at("failed_samples");
    }
    c.alerts.push_back(std::move(a));
  }
  return c;
}

}  // namespace archemist::state
