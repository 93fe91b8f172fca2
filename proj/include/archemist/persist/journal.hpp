#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "archemist/state/events.hpp"

namespace archemist::persist {

using state::JournalRecord;

/// File magic; records follow as [u32 LE length | JSON payload | u32 LE crc32(payload)].
inline constexpr std::string_view kMagic = "ARCH1";
inline constexpr std::size_t kSnapshotEvery = 1000;

enum class OpenMode { fresh, resume };

struct OpenOptions {
  bool repair = false;   // resume: truncate a damaged tail instead of throwing Corrupt
  bool durable = true;   // fdatasync after every append
  std::size_t snapshot_every = kSnapshotEvery;
};

/// Exclusive, append-only journal file.
class Journal {
 public:
  /// fresh: creates an empty journal (IoError if a non-empty one exists).
  /// resume: validates every record and positions after the last one.
  /// Throws Locked, Corrupt, RevisionGap, IoError.
  static std::unique_ptr<Journal> open(const std::string& path, OpenMode mode, OpenOptions options = {});
  ~Journal();
  Journal(const Journal&) = delete;
  Journal& operator=(const Journal&) = delete;

  const std::string& path() const { return path_; }
  Revision last_revision() const { return last_revision_; }
  std::size_t record_count() const { return records_.size(); }
  /// Records present at open plus everything appended since.
  const std::vector<JournalRecord>& records() const { return records_; }

  /// Durable before return. Throws RevisionGap or IoError.
  void append(const JournalRecord& record);

  /// Writes `<path>.snap.<revision>` when the record count crosses a snapshot boundary.
  void maybe_snapshot(const state::WorkflowState& s);
  void write_snapshot(const state::WorkflowState& s);

 private:
  Journal(std::string path, int fd, OpenOptions options);

  std::string path_;
  int fd_ = -1;
  OpenOptions options_;
  Revision last_revision_ = 0;
  std::vector<JournalRecord> records_;
};

struct ReadResult {
  std::vector<JournalRecord> records;
  std::uint64_t valid_bytes = 0;
};

/// Read-only scan without taking the writer lock. Throws Corrupt, RevisionGap, IoError.
ReadResult read_journal(const std::string& path);

std::string encode_record(const JournalRecord& record);

struct Snapshot {
  Revision revision = 0;
  std::string path;
};

/// Snapshots next to `journal_path`, newest first.
std::vector<Snapshot> list_snapshots(const std::string& journal_path);
/// Nullopt when the snapshot file is missing or fails its checksum.
std::optional<state::WorkflowState> load_snapshot(const std::string& snapshot_path);

}  // namespace archemist::persist
