#include "archemist/sim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "archemist/error.hpp"

namespace archemist::sim {

std::string_view to_string(FaultKind k) {
  switch (k) {
    case FaultKind::taring_timeout: return "taring_timeout";
    case FaultKind::misplace_vial: return "misplace_vial";
    case FaultKind::safety_stop: return "safety_stop";
  }
  return "taring_timeout";
}

std::optional<FaultKind> parse_fault_kind(std::string_view s) {
  for (auto k : {FaultKind::taring_timeout, FaultKind::misplace_vial, FaultKind::safety_stop})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ScenarioError, path + ": " + what);
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& path) {
  Scenario s;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    bad(path, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) return s;
  if (!root.IsMap()) bad(path, "scenario must be a mapping");
  try {
    for (auto it = root.begin(); it != root.end(); ++it) {
      const std::string key = it->first.Scalar();
      if (key != "seed" && key != "runs" && key != "start_location" && key != "faults" && key != "status_events" &&
          key != "physics" && key != "max_ticks")
        bad(path, "unknown key '" + key + "'");
    }
    if (root["seed"]) s.seed = root["seed"].as<std::uint64_t>();
    if (root["runs"]) s.runs = root["runs"].as<int>();
    if (s.runs < 1) bad(path, "runs must be at least 1");
    if (root["start_location"]) s.start_location = root["start_location"].as<std::string>();
    if (root["max_ticks"]) s.max_ticks = root["max_ticks"].as<Tick>();
    for (const auto& f : root["faults"]) {
      FaultSpec spec;
      spec.device = f["device"].as<std::string>();
      auto kind = parse_fault_kind(f["kind"].as<std::string>());
      if (!kind) bad(path, "unknown fault kind '" + f["kind"].as<std::string>() + "'");
      spec.kind = *kind;
      if (f["nth_request"]) spec.nth_request = f["nth_request"].as<std::uint64_t>();
      if (f["probability"]) spec.probability = f["probability"].as<double>();
      if (f["duration"]) spec.duration = f["duration"].as<Tick>();
      if (!spec.nth_request && !(spec.probability > 0.0))
        bad(path, "fault on '" + spec.device + "' needs nth_request or probability");
      if (spec.probability < 0.0 || spec.probability > 1.0) bad(path, "probability must lie in [0, 1]");
      s.faults.push_back(spec);
    }
    for (const auto& e : root["status_events"]) {
      StatusEvent ev;
      ev.device = e["device"].as<std::string>();
      ev.at = e["at"].as<Tick>();
      if (e["operational"]) ev.operational = e["operational"].as<bool>();
      if (e["safety_stop"]) ev.safety_stop = e["safety_stop"].as<bool>();
      if (e["duration"]) ev.duration = e["duration"].as<Tick>();
      s.status_events.push_back(ev);
    }
    if (YAML::Node phys = root["physics"]) {
      for (auto it = phys.begin(); it != phys.end(); ++it)
        for (auto p = it->second.begin(); p != it->second.end(); ++p)
          s.physics[it->first.Scalar()][p->first.Scalar()] = p->second.as<double>();
    }
  } catch (const YAML::Exception& e) {
    bad(path, e.what());
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ScenarioError, "cannot read scenario '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

nlohmann::json to_json(const Scenario& s) {
  using nlohmann::json;
  json faults = json::array(), status = json::array();
  for (const auto& f : s.faults) {
    json o = {{"device", f.device}, {"kind", std::string(to_string(f.kind))}, {"probability", f.probability},
              {"duration", f.duration}};
    o["nth_request"] = f.nth_request ? json(*f.nth_request) : json(nullptr);
    faults.push_back(o);
  }
  for (const auto& e : s.status_events)
    status.push_back({{"device", e.device},
                      {"at", e.at},
                      {"operational", e.operational},
                      {"safety_stop", e.safety_stop},
                      {"duration", e.duration}});
  return {{"seed", s.seed},         {"runs", s.runs},       {"start_location", s.start_location},
          {"faults", faults},       {"status_events", status}, {"physics", s.physics},
          {"max_ticks", s.max_ticks}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  if (j.is_null() || j.empty()) return s;
  s.seed = j.at("seed");
  s.runs = j.at("runs");
  s.start_location = j.at("start_location");
  s.max_ticks = j.at("max_ticks");
  for (const auto& f : j.at("faults")) {
    FaultSpec spec;
    spec.device = f.at("device");
    spec.kind = *parse_fault_kind(f.at("kind").get<std::string>());
    spec.probability = f.at("probability");
    spec.duration = f.at("duration");
    if (!f.at("nth_request").is_null()) spec.nth_request = f.at("nth_request").get<std::uint64_t>();
    s.faults.push_back(spec);
  }
  for (const auto& e : j.at("status_events"))
    s.status_events.push_back({e.at("device"), e.at("at"), e.at("operational"), e.at("safety_stop"), e.at("duration")});
  s.physics = j.at("physics").get<std::map<std::string, std::map<std::string, double>>>();
  return s;
}

}  // namespace archemist::sim
