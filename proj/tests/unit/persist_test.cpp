#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "archemist/app/session.hpp"
#include "archemist/error.hpp"
#include "archemist/persist/journal.hpp"
#include "archemist/persist/recovery.hpp"
#include "archemist/state/json.hpp"
#include "testlab.hpp"

using namespace archemist;
using namespace archemist::persist;
using state::Event;
using state::events::control;
using state::ControlCommand;

namespace {

// Reference CRC-32 (IEEE, reflected), bit by bit.
std::uint32_t crc32_ref(std::string_view data) {
  std::uint32_t c = 0xffffffffu;
  for (unsigned char b : data) {
    c ^= b;
    for (int k = 0; k < 8; ++k) c = (c >> 1) ^ (0xedb88320u & (0u - (c & 1u)));
  }
  return ~c;
}

std::string le32(std::uint32_t v) {
  std::string s;
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  return s;
}

Event init_event() { return state::events::init(testlab::lab_config(), nlohmann::json::object()); }

// Toggles pause so that every record is a valid mutation.
Event toggle(std::size_t i) { return control(i % 2 == 0 ? ControlCommand::pause : ControlCommand::resume, static_cast<Tick>(i)); }

std::vector<JournalRecord> write_records(const std::string& path, std::size_t after_init) {
  auto j = Journal::open(path, OpenMode::fresh, OpenOptions{false, false});
  j->append({1, init_event()});
  for (std::size_t i = 0; i < after_init; ++i) j->append({i + 2, toggle(i)});
  return j->records();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no archemist::Error thrown";
  return ErrorCode::InvalidEvent;
}

app::SessionOptions solubility(const std::string& journal) {
  app::SessionOptions o;
  o.config = testlab::lab_config();
  o.scenario.seed = 3;
  o.scenario.runs = 1;
  o.scenario.start_location = "kmr_deck";
  o.recipe_text = testlab::canonical("recipes/solubility.yaml");
  o.journal_path = journal;
  o.durable = false;
  return o;
}

// Runs the session in a child process that dies right after `crash_after` is journaled.
void run_until_crash(const app::SessionOptions& o, std::function<bool(const JournalRecord&)> crash_after) {
  pid_t pid = fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    auto registry = sim::builtin_registry();
    app::Session session(registry, o);
    session.authority().subscribe([&](const state::StatePtr&, const JournalRecord& r) {
      if (crash_after(r)) _exit(0);
    });
    session.run();
    _exit(3);  // never crashed
  }
  int status = 0;
  waitpid(pid, &status, 0);
  ASSERT_TRUE(WIFEXITED(status));
  ASSERT_EQ(WEXITSTATUS(status), 0) << "child finished without reaching the crash point";
}

bool is_solid_dispense_outcome(const JournalRecord& r) {
  return r.event.kind == state::EventKind::outcome && r.event.data.value("op", "") == "station" &&
         r.event.data.at("outcome").at("op").get<std::string>() == "dispense_solid";
}

}  // namespace

TEST(Journal, GoldenRecordBytes) {
  JournalRecord rec{2, control(ControlCommand::pause, 5)};
  const std::string payload = R"({"data":{"command":"pause"},"kind":"control","rev":2,"tick":5})";
  EXPECT_EQ(rec.payload(), payload);
  EXPECT_EQ(encode_record(rec), le32(static_cast<std::uint32_t>(payload.size())) + payload + le32(crc32_ref(payload)));
  EXPECT_EQ(JournalRecord::from_payload(payload), rec);
}

TEST(Journal, FreshOpenIsEmpty) {
  testlab::TempDir dir;
  auto j = Journal::open(dir.file("sub/j.log"), OpenMode::fresh);
  EXPECT_EQ(j->record_count(), 0u);
  EXPECT_EQ(j->last_revision(), 0u);
  EXPECT_EQ(testlab::read_file(dir.file("sub/j.log")), std::string(kMagic));
}

TEST(Journal, FreshRefusesExistingJournal) {
  testlab::TempDir dir;
  write_records(dir.file("j.log"), 1);
  EXPECT_EQ(code_of([&] { Journal::open(dir.file("j.log"), OpenMode::fresh); }), ErrorCode::IoError);
}

TEST(Journal, ResumeAfterFortyTwoRecords) {
  testlab::TempDir dir;
  auto written = write_records(dir.file("j.log"), 42);
  auto j = Journal::open(dir.file("j.log"), OpenMode::resume);
  EXPECT_EQ(j->last_revision(), 43u);
  EXPECT_EQ(j->records(), written);
}

TEST(Journal, TruncatedTailIsCorrupt) {
  testlab::TempDir dir;
  const std::string path = dir.file("j.log");
  write_records(path, 42);
  std::string bytes = testlab::read_file(path);
  testlab::write_file(path, bytes.substr(0, bytes.size() - 3));
  try {
    Journal::open(path, OpenMode::resume);
    FAIL() << "expected Corrupt";
  } catch (const CorruptJournal& e) {
    EXPECT_EQ(e.code(), ErrorCode::Corrupt);
    EXPECT_EQ(e.last_good(), 42u);
  }
  auto j = Journal::open(path, OpenMode::resume, OpenOptions{true});
  EXPECT_EQ(j->last_revision(), 42u);
  j->append({43, toggle(41)});
  j.reset();
  EXPECT_EQ(read_journal(path).records.size(), 43u);
}

TEST(Journal, FlippedByteFailsChecksum) {
  testlab::TempDir dir;
  const std::string path = dir.file("j.log");
  write_records(path, 3);
  std::string bytes = testlab::read_file(path);
  bytes[bytes.size() - 10] ^= 0x20;
  testlab::write_file(path, bytes);
  try {
    read_journal(path);
    FAIL();
  } catch (const CorruptJournal& e) {
    EXPECT_EQ(e.last_good(), 3u);
  }
}

TEST(Journal, AppendOrder) {
  testlab::TempDir dir;
  auto j = Journal::open(dir.file("j.log"), OpenMode::fresh, OpenOptions{false, false});
  j->append({1, init_event()});
  EXPECT_NO_THROW(j->append({2, toggle(0)}));
  EXPECT_EQ(code_of([&] { j->append({5, toggle(1)}); }), ErrorCode::RevisionGap);
  EXPECT_EQ(j->last_revision(), 2u);
}

TEST(Journal, SingleWriter) {
  testlab::TempDir dir;
  auto j = Journal::open(dir.file("j.log"), OpenMode::fresh);
  EXPECT_EQ(code_of([&] { Journal::open(dir.file("j.log"), OpenMode::resume); }), ErrorCode::Locked);
}

TEST(Journal, TenThousandAppendsReplayExactly) {
  testlab::TempDir dir;
  const std::string path = dir.file("j.log");
  auto registry = sim::builtin_registry();
  state::StateAuthority authority(registry);
  const std::string recipe = testlab::canonical("recipes/sample_recipe.yaml");
  {
    auto j = Journal::open(path, OpenMode::fresh, OpenOptions{false, false});
    attach(authority, *j);
    authority.commit(init_event());
    for (std::size_t i = 0; authority.revision() < 10'001; ++i) {
      if (i % 10 == 0)
        authority.commit(state::events::submit(authority.snapshot()->next_sample_id, recipe, "kmr_deck", static_cast<Tick>(i)));
      else
        authority.commit(toggle(i));
    }
    authority.set_sink(nullptr);
  }
  const state::WorkflowState& live = *authority.snapshot();
  auto j = Journal::open(path, OpenMode::resume);
  EXPECT_EQ(j->record_count(), 10'001u);
  auto from_snapshot = recover(j->records(), path, registry, true);
  auto from_scratch = recover(j->records(), path, registry, false);
  EXPECT_EQ(from_snapshot.snapshot_revision, 10'000u);
  EXPECT_EQ(from_snapshot.state, live);
  EXPECT_EQ(from_scratch.state, live);
  EXPECT_EQ(state::to_json(from_scratch.state).dump(), state::to_json(live).dump());
  EXPECT_EQ(list_snapshots(path).size(), 1u);
}

TEST(Recovery, EmptyJournal) {
  testlab::TempDir dir;
  Journal::open(dir.file("j.log"), OpenMode::fresh).reset();
  auto registry = sim::builtin_registry();
  EXPECT_EQ(code_of([&] { recover_file(dir.file("j.log"), registry); }), ErrorCode::EmptyJournal);
}

TEST(Recovery, DamagedSnapshotFallsBackToReplay) {
  testlab::TempDir dir;
  const std::string path = dir.file("j.log");
  auto registry = sim::builtin_registry();
  auto j = Journal::open(path, OpenMode::fresh, OpenOptions{false, false, 10});
  state::StateAuthority authority(registry);
  attach(authority, *j);
  authority.commit(init_event());
  for (std::size_t i = 0; i < 14; ++i) authority.commit(toggle(i));
  auto snaps = list_snapshots(path);
  ASSERT_EQ(snaps.size(), 1u);
  std::string bytes = testlab::read_file(snaps[0].path);
  bytes.back() ^= 1;
  testlab::write_file(snaps[0].path, bytes);
  auto rec = recover(j->records(), path, registry);
  EXPECT_EQ(rec.snapshot_revision, 0u);
  EXPECT_EQ(rec.state, *authority.snapshot());
}

TEST(Recovery, CrashAfterSolidDispense) {
  testlab::TempDir dir;
  const std::string crashed = dir.file("crashed.log");
  const std::string clean = dir.file("clean.log");
  auto registry = sim::builtin_registry();

  run_until_crash(solubility(crashed), is_solid_dispense_outcome);
  {
    auto rec = recover_file(crashed, registry);
    const state::Sample& smp = rec.state.samples.at(1);
    EXPECT_EQ(smp.flow_cursor, "liquid_disp");
    EXPECT_EQ(smp.history.size(), 1u);
  }

  auto resumed_opts = solubility(crashed);
  resumed_opts.resume = true;
  resumed_opts.recipe_text.clear();
  app::Session resumed(registry, resumed_opts);
  auto report = resumed.run();
  EXPECT_EQ(report.completed, 1u);

  app::Session uninterrupted(registry, solubility(clean));
  uninterrupted.run();

  EXPECT_EQ(*resumed.authority().snapshot(), *uninterrupted.authority().snapshot());
  EXPECT_EQ(state::to_json(*resumed.authority().snapshot()).dump(),
            state::to_json(*uninterrupted.authority().snapshot()).dump());
  EXPECT_EQ(testlab::read_file(crashed), testlab::read_file(clean));
}

TEST(Recovery, CrashDuringRobotMoveDoesNotMoveTwice) {
  testlab::TempDir dir;
  const std::string path = dir.file("j.log");
  auto registry = sim::builtin_registry();
  // die while the KMR carries the vial to the Quantos
  run_until_crash(solubility(path), [](const JournalRecord& r) {
    return r.event.kind == state::EventKind::assignment && r.event.data.value("op", "") == "robot";
  });
  auto opts = solubility(path);
  opts.resume = true;
  app::Session resumed(registry, opts);
  {
    auto s = resumed.authority().snapshot();
    ASSERT_EQ(s->robot_job_queue.size(), 1u);
    EXPECT_EQ(s->robot_job_queue.front().attempts, 0);
    EXPECT_FALSE(s->robots.at("kmr").assigned_job.has_value());
  }
  resumed.run();
  auto s = resumed.authority().snapshot();
  const state::Sample& smp = s->samples.at(1);
  EXPECT_EQ(smp.assignment.kind, state::AssignmentKind::complete);
  std::size_t first_job_moves = 0;
  for (const auto& t : smp.transfers) first_job_moves += t.job == 1 ? 1 : 0;
  EXPECT_EQ(first_job_moves, 1u);
  EXPECT_EQ(smp.transfers.front().to, "quantos_carousel");
}
