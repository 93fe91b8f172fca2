#include "archemist/persist/recovery.hpp"

#include "archemist/error.hpp"

namespace archemist::persist {

state::WorkflowState replay(const std::vector<JournalRecord>& records, const state::PluginRegistry& registry,
                            const state::WorkflowState* base) {
  state::WorkflowState s = base ? *base : state::WorkflowState{};
  for (const auto& rec : records) {
    if (rec.revision <= s.revision) continue;
    if (rec.revision != s.revision + 1)
      throw Error(ErrorCode::RevisionGap, "record " + std::to_string(rec.revision) + " does not follow revision " +
                                              std::to_string(s.revision));
    state::apply_event(s, rec.event, registry);
  }
  return s;
}

Recovered recover(const std::vector<JournalRecord>& records, const std::string& journal_path,
                  const state::PluginRegistry& registry, bool use_snapshots) {
  if (records.empty()) throw Error(ErrorCode::EmptyJournal, "journal '" + journal_path + "' has no records");
  Recovered out;
  if (use_snapshots) {
    for (const auto& snap : list_snapshots(journal_path)) {
      if (snap.revision > records.back().revision) continue;
      if (auto base = load_snapshot(snap.path)) {
        if (base->revision != snap.revision) continue;
        out.state = replay(records, registry, &*base);
        out.snapshot_revision = snap.revision;
        return out;
      }
    }
  }
  out.state = replay(records, registry);
  return out;
}

Recovered recover_file(const std::string& journal_path, const state::PluginRegistry& registry) {
  return recover(read_journal(journal_path).records, journal_path, registry);
}

std::vector<state::Event> in_flight_resets(const state::WorkflowState& s) {
  std::vector<state::Event> out;
  for (const auto& [id, st] : s.stations)
    if (st.assigned_sample) out.push_back(state::events::reset_assignment(id, s.clock));
  for (const auto& [id, r] : s.robots)
    if (r.assigned_job) out.push_back(state::events::reset_assignment(id, s.clock));
  return out;
}

void attach(state::StateAuthority& authority, Journal& journal) {
  authority.set_sink([&journal](const JournalRecord& rec) { journal.append(rec); });
  authority.subscribe([&journal](const state::StatePtr& s, const JournalRecord&) { journal.maybe_snapshot(*s); });
}

}  // namespace archemist::persist
