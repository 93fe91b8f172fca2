// Randomised properties over recipes, the scheduler and full simulated campaigns.
// Every generator is seeded, so a failure reproduces from the printed seed.
#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "archemist/app/session.hpp"
#include "archemist/error.hpp"
#include "archemist/orch/scheduler.hpp"
#include "archemist/persist/journal.hpp"
#include "archemist/sim/scenario.hpp"
#include "testlab.hpp"

using namespace archemist;
using recipe::DiagCode;

namespace {

using Gen = std::mt19937_64;

template <class T>
const T& pick(Gen& g, const std::vector<T>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(g)];
}

bool coin(Gen& g, double p) { return std::bernoulli_distribution(p)(g); }
int between(Gen& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

// ---------------------------------------------------------------------------------------------
// Recipe generation

const std::vector<std::string> kSolids = {"NaCl", "KNO3", "CuSO4", "sodium acetate", "Ca(OH)2"};
const std::vector<std::string> kLiquids = {"water", "ethanol", "acetic acid", "H2O2", "ÉtOH"};
const std::vector<std::pair<std::string, std::vector<Unit>>> kQuantityNames = {
    {"mass", {Unit::mg, Unit::g}},   {"volume", {Unit::mL}},   {"temperature", {Unit::degC}},
    {"duration", {Unit::s, Unit::min}}, {"speed", {Unit::rpm}}, {"amount", {Unit::mg, Unit::mL, Unit::s, Unit::rpm}},
};
const std::vector<std::string> kTexts = {"fast", "slow", "auto mode", "42", "true", "x: y"};

recipe::OperationSpec random_op(Gen& g, const std::string& name, const recipe::Recipe& r) {
  recipe::OperationSpec op;
  op.op_name = name;
  if (coin(g, 0.4)) {
    auto solids = std::vector<std::string>(r.solids.begin(), r.solids.end());
    op.properties.push_back({"solid", recipe::ParamKind::solid, pick(g, solids), {}});
  }
  if (coin(g, 0.4)) {
    auto liquids = std::vector<std::string>(r.liquids.begin(), r.liquids.end());
    op.properties.push_back({"liquid", recipe::ParamKind::liquid, pick(g, liquids), {}});
  }
  auto names = kQuantityNames;
  std::shuffle(names.begin(), names.end(), g);
  int quantities = between(g, 0, 3);
  std::uniform_real_distribution<double> value(1e-3, 1e3);
  for (int i = 0; i < quantities; ++i) {
    recipe::ParamValue pv;
    pv.name = names[i].first;
    pv.kind = recipe::ParamKind::quantity;
    pv.quantity = Quantity{coin(g, 0.5) ? value(g) : static_cast<double>(between(g, 1, 500)), pick(g, names[i].second)};
    op.properties.push_back(pv);
  }
  if (coin(g, 0.25)) op.properties.push_back({"mode", recipe::ParamKind::text, pick(g, kTexts), {}});
  std::shuffle(op.properties.begin(), op.properties.end(), g);

  op.output.name = name + "_out";
  if (coin(g, 0.4)) {
    recipe::OutcomePredicate p;
    p.kind = static_cast<recipe::PredicateKind>(between(g, 0, 2));
    p.reading = op.output.name;
    p.limit = std::uniform_real_distribution<double>(1e-4, 10.0)(g);
    p.window = p.kind == recipe::PredicateKind::stable ? between(g, 1, 5) : 0;  // thresholds carry no window
    op.output.predicate = p;
  }
  return op;
}

recipe::FlowNode terminal(std::string_view id, std::string success = {}, std::string fail = {}) {
  recipe::FlowNode n;
  n.id = std::string(id);
  n.on_success = std::move(success);
  n.on_fail = std::move(fail);
  return n;
}

/// Structurally well-formed recipe whose flow may or may not satisfy the flow invariants.
recipe::Recipe random_recipe(Gen& g, int serial) {
  recipe::Recipe r;
  r.name = "generated_" + std::to_string(serial);
  if (coin(g, 0.2)) r.max_iterations = between(g, 1, 5000);
  for (int i = between(g, 1, 2); i > 0; --i) r.solids.insert(pick(g, kSolids));
  for (int i = between(g, 1, 2); i > 0; --i) r.liquids.insert(pick(g, kLiquids));

  int stations = between(g, 1, 4);
  for (int s = 0; s < stations; ++s) {
    recipe::StationOps st;
    st.station = "station_" + std::to_string(s);
    int ops = between(g, 1, 3);
    for (int o = 0; o < ops; ++o) st.ops.push_back(random_op(g, "op" + std::to_string(s) + std::to_string(o), r));
    r.stations.push_back(std::move(st));
  }

  const int k = between(g, 1, 8);
  auto id = [](int i) { return "step_" + std::to_string(i); };
  auto forward = [&](int i) { return i + 1 >= k || coin(g, 0.25) ? std::string("end") : id(between(g, i + 1, k - 1)); };
  auto anywhere = [&]() { return id(between(g, 0, k - 1)); };

  r.flow.nodes.push_back(terminal("start", coin(g, 0.9) ? id(0) : anywhere(), "end"));
  for (int i = 0; i < k; ++i) {
    recipe::FlowNode n;
    n.id = id(i);
    const auto& st = pick(g, r.stations);
    n.station = st.station;
    n.task = pick(g, st.ops);
    n.on_success = coin(g, 0.75) ? forward(i) : anywhere();
    n.on_fail = coin(g, 0.8) ? forward(i) : anywhere();
    r.flow.nodes.push_back(std::move(n));
  }
  r.flow.nodes.push_back(terminal("end"));
  return r;
}

// Independent flow checker: transitive closure by Warshall instead of search/SCCs.
using Closure = std::vector<std::vector<bool>>;

Closure closure(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Closure c(n, std::vector<bool>(n, false));
  for (auto [a, b] : edges) c[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (c[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (c[k][j]) c[i][j] = true;
  return c;
}

std::set<DiagCode> oracle_flow_codes(const recipe::FlowGraph& flow) {
  const std::size_t n = flow.nodes.size();
  auto at = [&](const std::string& id) {
    for (std::size_t i = 0; i < n; ++i)
      if (flow.nodes[i].id == id) return i;
    throw std::logic_error("generator produced a dangling edge");
  };
  std::vector<std::pair<std::size_t, std::size_t>> success, fail, all, unguarded;
  std::size_t start = 0, end = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = flow.nodes[i];
    if (node.is_start()) start = i;
    if (node.is_end()) {
      end = i;
      continue;
    }
    std::size_t s = at(node.on_success), f = at(node.on_fail);
    success.emplace_back(i, s);
    fail.emplace_back(i, f);
    all.emplace_back(i, s);
    all.emplace_back(i, f);
    for (std::size_t t : {s, f})
      if (!node.guarded() && !flow.nodes[t].guarded()) unguarded.emplace_back(i, t);
  }
  std::set<DiagCode> codes;
  auto succ = closure(n, success), any = closure(n, all), fl = closure(n, fail), ung = closure(n, unguarded);
  if (!succ[start][end]) codes.insert(DiagCode::UnreachableEnd);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != end && !any[i][end]) codes.insert(DiagCode::DeadEnd);
    if (fl[i][i]) codes.insert(DiagCode::FailCycle);
    if (ung[i][i]) codes.insert(DiagCode::UnguardedCycle);
  }
  return codes;
}

bool has_success_cycle(const recipe::FlowGraph& flow) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < flow.nodes.size(); ++i) {
    if (flow.nodes[i].is_end()) continue;
    for (std::size_t j = 0; j < flow.nodes.size(); ++j) {
      if (flow.nodes[j].id == flow.nodes[i].on_success) edges.emplace_back(i, j);
      if (flow.nodes[j].id == flow.nodes[i].on_fail) edges.emplace_back(i, j);
    }
  }
  auto c = closure(flow.nodes.size(), edges);
  for (std::size_t i = 0; i < flow.nodes.size(); ++i)
    if (c[i][i]) return true;
  return false;
}

}  // namespace

TEST(GeneratedRecipes, ValidatorAgreesRoundTripAndAdvanceIsTotal) {
  Gen g(20240611);
  int valid = 0, invalid = 0, cyclic = 0, serial = 0;
  while (valid < 1000) {
    recipe::Recipe r = random_recipe(g, serial++);
    std::set<DiagCode> got;
    for (const auto& d : recipe::validate_flow(r.flow)) got.insert(d.code);
    ASSERT_EQ(got, oracle_flow_codes(r.flow)) << "recipe #" << serial << "\n" << recipe::serialize(r);
    if (!got.empty()) {
      ++invalid;
      continue;
    }
    ++valid;
    cyclic += has_success_cycle(r.flow);

    const std::string text = recipe::serialize(r);
    auto parsed = recipe::parse_recipe({text, "generated.yaml"});
    ASSERT_TRUE(parsed.ok()) << text << "\n" << (parsed.diagnostics.empty() ? "" : parsed.diagnostics[0].message);
    ASSERT_EQ(*parsed.recipe, r) << text;
    ASSERT_EQ(recipe::serialize(*parsed.recipe), text);

    const auto& flow = parsed.recipe->flow;
    for (const auto& node : flow.nodes) {
      if (node.is_end()) {
        EXPECT_THROW(recipe::advance_flow(flow, node.id, true), Error);
        continue;
      }
      for (bool ok : {true, false}) {
        const std::string& next = recipe::advance_flow(flow, node.id, ok);
        EXPECT_EQ(next, ok ? node.on_success : node.on_fail);
        EXPECT_TRUE(flow.contains(next));
      }
      // Repeated failure always drains to `end` without revisiting a node.
      std::string cursor = node.id;
      std::size_t steps = 0;
      while (cursor != recipe::kEndNode && steps <= flow.nodes.size()) {
        cursor = recipe::advance_flow(flow, cursor, false);
        ++steps;
      }
      EXPECT_EQ(cursor, recipe::kEndNode) << "from " << node.id << "\n" << text;
      EXPECT_LE(steps, flow.nodes.size());
    }
  }
  // The generator must exercise both sides of the validator and guarded loops.
  EXPECT_GE(invalid, 200);
  EXPECT_GE(cyclic, 100);
}

// ---------------------------------------------------------------------------------------------
// State audits

namespace {

/// Material ledger: stock + what the vials hold + what evaporated equals the initial stock.
void audit_ledger(const state::WorkflowState& s, const std::string& where) {
  for (const auto& [name, m] : s.materials) {
    double held = 0.0;
    for (const auto& [_, smp] : s.samples) {
      if (auto it = smp.contents.find(name); it != smp.contents.end()) held += it->second;
      if (auto it = smp.evaporated.find(name); it != smp.evaporated.end()) held += it->second;
    }
    ASSERT_NEAR(m.initial, m.remaining + held, 1e-9 * std::max(1.0, m.initial))
        << name << " at revision " << s.revision << " (" << where << ")";
  }
}

/// Each sample sits on at most one station or robot, and both sides of an assignment agree.
void audit_assignments(const state::WorkflowState& s, const std::string& where) {
  std::map<SampleId, int> holders;
  for (const auto& [id, st] : s.stations) {
    if (!st.assigned_sample) continue;
    ++holders[*st.assigned_sample];
    const auto& smp = s.samples.at(*st.assigned_sample);
    ASSERT_EQ(smp.assignment.kind, state::AssignmentKind::station) << id << " r" << s.revision << " " << where;
    ASSERT_EQ(smp.assignment.target, id) << where;
  }
  for (const auto& [id, r] : s.robots) {
    if (!r.assigned_job) continue;
    ++holders[r.assigned_job->sample];
    const auto& smp = s.samples.at(r.assigned_job->sample);
    ASSERT_EQ(smp.assignment.kind, state::AssignmentKind::robot) << id << " r" << s.revision << " " << where;
    ASSERT_EQ(smp.assignment.target, id) << where;
  }
  for (const auto& [sid, n] : holders) ASSERT_EQ(n, 1) << "sample " << sid << " r" << s.revision << " " << where;
  for (const auto& [sid, smp] : s.samples) {
    using K = state::AssignmentKind;
    if (smp.assignment.kind == K::station) {
      ASSERT_EQ(s.stations.at(smp.assignment.target).assigned_sample, sid) << where;
    } else if (smp.assignment.kind == K::robot) {
      const auto& job = s.robots.at(smp.assignment.target).assigned_job;
      ASSERT_TRUE(job && job->sample == sid) << where;
    }
  }
}

/// Replays a journal file record by record, auditing every intermediate state.
void audit_journal(const std::string& path, const state::PluginRegistry& registry) {
  auto records = persist::read_journal(path).records;
  ASSERT_FALSE(records.empty());
  state::WorkflowState s;
  for (const auto& rec : records) {
    state::apply_event(s, rec.event, registry);
    ASSERT_EQ(s.revision, rec.revision);
    ASSERT_NO_FATAL_FAILURE(audit_ledger(s, path));
    ASSERT_NO_FATAL_FAILURE(audit_assignments(s, path));
  }
}

struct Outcome {
  state::StatePtr state;
  int acks = 0;
};

/// Runs a campaign to quiescence, acknowledging halt alerts the way an operator would.
Outcome drive(app::Session& session) {
  Outcome out;
  for (int round = 0; round < 100; ++round) {
    auto report = session.run();
    auto s = session.authority().snapshot();
    if (report.stop != orch::RunReport::Stop::stalled || !s->halted()) break;
    for (const auto& a : s->alerts) {
      if (a.severity != state::Severity::halt || a.acknowledged) continue;
      session.authority().commit(state::events::ack(a.id, session.engine().now()));
      ++out.acks;
    }
  }
  out.state = session.authority().snapshot();
  return out;
}

sim::Scenario adversarial(Gen& g, const state::Config& config) {
  sim::Scenario sc;
  sc.seed = g();
  sc.start_location = "kmr_deck";
  std::vector<std::string> devices;
  for (const auto& d : config.stations) devices.push_back(d.id);
  for (const auto& d : config.robots) devices.push_back(d.id);
  for (int i = between(g, 1, 6); i > 0; --i) {
    sim::FaultSpec f;
    f.device = pick(g, devices);
    f.kind = static_cast<sim::FaultKind>(between(g, 0, 2));
    if (coin(g, 0.3)) f.nth_request = static_cast<std::uint64_t>(between(g, 1, 6));
    else f.probability = std::uniform_real_distribution<double>(0.05, 0.5)(g);
    f.duration = between(g, 10, 400);
    sc.faults.push_back(f);
  }
  for (int i = between(g, 0, 3); i > 0; --i) {
    sim::StatusEvent e;
    e.device = pick(g, devices);
    e.at = between(g, 0, 3000);
    e.operational = coin(g, 0.5);
    e.safety_stop = !e.operational ? coin(g, 0.3) : true;
    e.duration = between(g, 30, 900);
    sc.status_events.push_back(e);
  }
  return sc;
}

}  // namespace

TEST(Campaigns, ShippedScenariosKeepLedgerAndAssignmentsConsistent) {
  auto registry = sim::builtin_registry();
  testlab::TempDir dir;
  for (const auto& [recipe, scenario] : {std::pair{"recipes/solubility.yaml", "scenarios/solubility_campaign.yaml"},
                                         std::pair{"recipes/crystallisation.yaml", "scenarios/crystallisation_campaign.yaml"}}) {
    SCOPED_TRACE(recipe);
    app::SessionOptions o;
    o.config = testlab::lab_config();
    o.scenario = sim::load_scenario_file(testlab::data_path(scenario));
    o.recipe_text = testlab::canonical(recipe);
    o.journal_path = dir.file(std::string(recipe).substr(8) + ".journal");
    o.durable = false;
    {
      app::Session session(registry, o);
      session.authority().subscribe([](const state::StatePtr& s, const state::JournalRecord&) {
        audit_ledger(*s, "live");
        audit_assignments(*s, "live");
      });
      auto out = drive(session);
      EXPECT_EQ(out.state->samples.size(), static_cast<std::size_t>(o.scenario.runs));
    }
    audit_journal(o.journal_path, registry);
  }
}

TEST(Campaigns, AdversarialFaultsAlwaysDrainToTerminal) {
  auto registry = sim::builtin_registry();
  testlab::TempDir dir;
  Gen g(77);
  const auto config = testlab::lab_config();
  const std::string recipes[] = {testlab::canonical("recipes/solubility.yaml"),
                                 testlab::canonical("recipes/crystallisation.yaml")};
  int failed = 0, completed = 0, acks = 0;
  for (int trial = 0; trial < 40; ++trial) {
    app::SessionOptions o;
    o.config = config;
    o.scenario = adversarial(g, config);
    o.recipe_text = recipes[trial % 2];
    o.runs = trial % 2 == 0 ? 3 : 1;
    o.journal_path = dir.file("trial" + std::to_string(trial) + ".journal");
    o.durable = false;
    SCOPED_TRACE("trial " + std::to_string(trial) + " scenario " + sim::to_json(o.scenario).dump());
    {
      app::Session session(registry, o);
      auto out = drive(session);
      acks += out.acks;
      ASSERT_EQ(out.state->samples.size(), static_cast<std::size_t>(o.runs));
      for (const auto& [id, smp] : out.state->samples) {
        ASSERT_TRUE(smp.assignment.terminal()) << "sample " << id << " stuck at " << smp.flow_cursor;
        (smp.assignment.kind == state::AssignmentKind::failed ? failed : completed)++;
      }
      EXPECT_TRUE(out.state->robot_job_queue.empty());
    }
    audit_journal(o.journal_path, registry);
  }
  // The schedules must actually bite.
  EXPECT_GT(failed, 0);
  EXPECT_GT(completed, 0);
  RecordProperty("acks", acks);
}

// ---------------------------------------------------------------------------------------------
// Scheduler

namespace {

/// All-pairs tick distances by Floyd-Warshall over the configured edges.
std::map<std::pair<std::string, std::string>, Tick> distances(const state::Topology& t) {
  constexpr Tick inf = std::numeric_limits<Tick>::max() / 4;
  std::map<std::pair<std::string, std::string>, Tick> d;
  for (const auto& a : t.nodes)
    for (const auto& b : t.nodes) d[{a.id, b.id}] = a.id == b.id ? 0 : inf;
  for (const auto& e : t.edges) {
    d[{e.from, e.to}] = std::min(d[{e.from, e.to}], e.cost);
    if (!e.oneway) d[{e.to, e.from}] = std::min(d[{e.to, e.from}], e.cost);
  }
  for (const auto& k : t.nodes)
    for (const auto& i : t.nodes)
      for (const auto& j : t.nodes)
        d[{i.id, j.id}] = std::min(d[{i.id, j.id}], d[{i.id, k.id}] + d[{k.id, j.id}]);
  for (auto it = d.begin(); it != d.end();)
    it = it->second >= inf ? d.erase(it) : std::next(it);
  return d;
}

std::vector<std::pair<JobId, std::string>> oracle_schedule(const state::WorkflowState& s) {
  std::vector<std::pair<JobId, std::string>> out;
  if (s.paused || s.operator_halt) return out;
  for (const auto& a : s.alerts)
    if (a.severity == state::Severity::halt && !a.acknowledged) return out;
  auto dist = distances(s.topology);
  auto site = [&](const std::string& node) { return s.topology.find(node)->site; };
  std::set<std::string> busy;
  for (const auto& job : s.robot_job_queue) {
    std::vector<std::tuple<Tick, std::string>> candidates;
    for (const auto& [id, r] : s.robots) {
      if (busy.count(id) || r.assigned_job || !r.operational || r.safety_stop || !r.capabilities.count(job.kind)) continue;
      if (job.kind == state::JobKind::transport && !r.mobile) continue;
      if (job.kind == state::JobKind::manipulate &&
          !(site(r.location) == site(job.from) && site(job.from) == site(job.to)))
        continue;
      auto d = dist.find({r.location, job.from});
      if (d != dist.end()) candidates.emplace_back(d->second, id);
    }
    if (candidates.empty()) continue;
    auto best = *std::min_element(candidates.begin(), candidates.end());
    busy.insert(std::get<1>(best));
    out.emplace_back(job.id, std::get<1>(best));
  }
  return out;
}

state::Config fleet_config() {
  state::Config c = testlab::lab_config();
  auto kmr = c.robots[0], panda = c.robots[1];
  for (const char* id : {"kmr_b", "kmr_c"}) {
    kmr.id = id;
    c.robots.push_back(kmr);
  }
  panda.id = "panda_b";
  c.robots.push_back(panda);
  return c;
}

}  // namespace

TEST(Scheduler, PureDeterministicAndMatchesOracle) {
  auto registry = sim::builtin_registry();
  const state::Config config = fleet_config();
  state::WorkflowState base;
  state::apply_event(base, state::events::init(config, nlohmann::json::object()), registry);
  std::vector<std::string> nodes, docks, panda_nodes;
  for (const auto& n : base.topology.nodes) {
    nodes.push_back(n.id);
    if (n.dock) docks.push_back(n.id);
    if (n.site == "panda") panda_nodes.push_back(n.id);
  }

  // Same lab declared in a different order must schedule identically.
  state::Config shuffled = config;
  Gen g(4242);
  int assigned = 0;
  for (int trial = 0; trial < 500; ++trial) {
    state::WorkflowState s = base;
    for (auto& [id, r] : s.robots) {
      r.location = r.mobile ? pick(g, docks) : pick(g, panda_nodes);
      r.operational = coin(g, 0.9);
      r.safety_stop = coin(g, 0.1);
      if (coin(g, 0.15)) r.assigned_job = state::RobotJob{999, state::JobKind::transport, 99, "kmr_deck", "quantos_carousel", 0};
    }
    s.paused = coin(g, 0.05);
    for (int j = between(g, 0, 6); j > 0; --j) {
      state::RobotJob job;
      job.id = static_cast<JobId>(s.robot_job_queue.size() + 1);
      job.kind = coin(g, 0.5) ? state::JobKind::transport : state::JobKind::manipulate;
      job.sample = job.id;
      job.from = job.kind == state::JobKind::transport ? pick(g, docks) : pick(g, panda_nodes);
      job.to = job.kind == state::JobKind::transport ? pick(g, docks) : pick(g, panda_nodes);
      s.robot_job_queue.push_back(job);
    }
    const state::WorkflowState before = s;
    auto first = orch::schedule_robot_jobs(s);
    ASSERT_EQ(s, before);
    ASSERT_EQ(orch::schedule_robot_jobs(s), first);
    ASSERT_EQ(first, oracle_schedule(s)) << "trial " << trial;
    assigned += static_cast<int>(first.size());

    std::shuffle(shuffled.robots.begin(), shuffled.robots.end(), g);
    std::shuffle(shuffled.topology.edges.begin(), shuffled.topology.edges.end(), g);
    state::WorkflowState t;
    state::apply_event(t, state::events::init(shuffled, nlohmann::json::object()), registry);
    for (auto& [id, r] : t.robots) r = s.robots.at(id);
    t.robot_job_queue = s.robot_job_queue;
    t.paused = s.paused;
    ASSERT_EQ(orch::schedule_robot_jobs(t), first) << "trial " << trial;
  }
  EXPECT_GT(assigned, 500);
}
