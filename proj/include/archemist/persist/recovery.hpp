#pragma once

#include <vector>

#include "archemist/persist/journal.hpp"
#include "archemist/state/authority.hpp"

namespace archemist::persist {

/// Folds records over `base` (or an empty state), checking each revision. Throws RevisionGap.
state::WorkflowState replay(const std::vector<JournalRecord>& records, const state::PluginRegistry& registry,
                            const state::WorkflowState* base = nullptr);

struct Recovered {
  state::WorkflowState state;
  Revision snapshot_revision = 0;  // 0 when replayed from the first record
};

/// State at the journal's last revision. Throws EmptyJournal, Corrupt, UnknownTypeName.
Recovered recover(const std::vector<JournalRecord>& records, const std::string& journal_path,
                  const state::PluginRegistry& registry, bool use_snapshots = true);
Recovered recover_file(const std::string& journal_path, const state::PluginRegistry& registry);

/// monitor_event records that hand in-flight station and robot work back to the processor.
std::vector<state::Event> in_flight_resets(const state::WorkflowState& s);

/// Routes every commit into the journal and takes periodic snapshots.
void attach(state::StateAuthority& authority, Journal& journal);

}  // namespace archemist::persist
