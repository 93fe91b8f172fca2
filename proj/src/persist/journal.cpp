#include "archemist/persist/journal.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "archemist/error.hpp"
#include "archemist/state/json.hpp"

namespace archemist::persist {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSnapMagic = "ARCHSNAP1";
constexpr std::uint32_t kMaxRecord = 64u << 20;

[[noreturn]] void io_error(const std::string& what) {
  throw Error(ErrorCode::IoError, what + ": " + std::strerror(errno));
}

std::uint32_t crc(std::string_view data) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

void write_all(int fd, std::string_view data, const std::string& path) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_error("write to " + path);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Scans `bytes`; stops at the first damaged record instead of throwing when `tolerant`.
ReadResult scan(const std::string& bytes, const std::string& path, bool tolerant, std::string* damage) {
  ReadResult out;
  if (bytes.size() < kMagic.size() || bytes.compare(0, kMagic.size(), kMagic) != 0) {
    if (bytes.empty()) return out;
    throw CorruptJournal(0, "'" + path + "' does not start with the journal magic");
  }
  std::size_t at = kMagic.size();
  out.valid_bytes = at;
  Revision last = 0;
  auto damaged = [&](const std::string& what) {
    if (!tolerant) throw CorruptJournal(last, "'" + path + "': " + what);
    if (damage) *damage = what;
  };
  while (at < bytes.size()) {
    if (bytes.size() - at < 4) {
      damaged("truncated record header at byte " + std::to_string(at));
      return out;
    }
    std::uint32_t len = get_u32(bytes, at);
    if (len > kMaxRecord || bytes.size() - at - 4 < static_cast<std::size_t>(len) + 4) {
      damaged("truncated record at byte " + std::to_string(at));
      return out;
    }
    std::string_view payload(bytes.data() + at + 4, len);
    if (crc(payload) != get_u32(bytes, at + 4 + len)) {
      damaged("checksum mismatch at byte " + std::to_string(at));
      return out;
    }
    JournalRecord rec;
    try {
      rec = JournalRecord::from_payload(payload);
    } catch (const std::exception& e) {
      damaged("undecodable record at byte " + std::to_string(at));
      return out;
    }
    if (rec.revision != last + 1)
      throw Error(ErrorCode::RevisionGap, "'" + path + "': revision " + std::to_string(rec.revision) + " follows " +
                                              std::to_string(last));
    last = rec.revision;
    out.records.push_back(std::move(rec));
    at += 8 + len;
    out.valid_bytes = at;
  }
  return out;
}

}  // namespace

std::string encode_record(const JournalRecord& record) {
  std::string payload = record.payload();
  std::string out;
  out.reserve(payload.size() + 8);
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out += payload;
  put_u32(out, crc(payload));
  return out;
}

ReadResult read_journal(const std::string& path) {
  ReadResult r = scan(read_file(path), path, false, nullptr);
  return r;
}

Journal::Journal(std::string path, int fd, OpenOptions options)
    : path_(std::move(path)), fd_(fd), options_(options) {}

Journal::~Journal() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

std::unique_ptr<Journal> Journal::open(const std::string& path, OpenMode mode, OpenOptions options) {
  if (mode == OpenMode::fresh) {
    fs::path parent = fs::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) fs::create_directories(parent, ec);
  }
  int flags = O_RDWR | O_CLOEXEC | (mode == OpenMode::fresh ? O_CREAT : 0);
  int fd = ::open(path.c_str(), flags, 0644);
  if (fd < 0) io_error("cannot open journal '" + path + "'");
  std::unique_ptr<Journal> j(new Journal(path, fd, options));
  if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
    j->fd_ = -1;
    ::close(fd);
    throw Error(ErrorCode::Locked, "journal '" + path + "' is held by another writer");
  }
  struct stat st {};
  if (::fstat(fd, &st) != 0) io_error("stat " + path);

  if (mode == OpenMode::fresh) {
    if (st.st_size != 0) throw Error(ErrorCode::IoError, "journal '" + path + "' already exists; resume it instead");
    write_all(fd, kMagic, path);
    if (options.durable && ::fdatasync(fd) != 0) io_error("sync " + path);
    return j;
  }

  std::string bytes = read_file(path);
  std::string damage;
  ReadResult r = scan(bytes, path, options.repair, &damage);
  if (bytes.empty()) {
    write_all(fd, kMagic, path);
    r.valid_bytes = kMagic.size();
  } else if (r.valid_bytes < bytes.size()) {
    if (::ftruncate(fd, static_cast<off_t>(r.valid_bytes)) != 0) io_error("truncate " + path);
  }
  if (::lseek(fd, static_cast<off_t>(r.valid_bytes), SEEK_SET) < 0) io_error("seek " + path);
  j->records_ = std::move(r.records);
  j->last_revision_ = j->records_.empty() ? 0 : j->records_.back().revision;
  return j;
}

void Journal::append(const JournalRecord& record) {
  if (record.revision != last_revision_ + 1)
    throw Error(ErrorCode::RevisionGap, "cannot append revision " + std::to_string(record.revision) + " after " +
                                            std::to_string(last_revision_));
  write_all(fd_, encode_record(record), path_);
  if (options_.durable && ::fdatasync(fd_) != 0) io_error("sync " + path_);
  last_revision_ = record.revision;
  records_.push_back(record);
}

void Journal::maybe_snapshot(const state::WorkflowState& s) {
  if (options_.snapshot_every == 0 || records_.empty()) return;
  if (records_.size() % options_.snapshot_every == 0 && s.revision == last_revision_) write_snapshot(s);
}

void Journal::write_snapshot(const state::WorkflowState& s) {
  std::string body = state::to_json(s).dump();
  std::string out(kSnapMagic);
  out.push_back('\n');
  put_u32(out, crc(body));
  out += body;
  std::string final_path = path_ + ".snap." + std::to_string(s.revision);
  std::string tmp = final_path + ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_error("cannot write snapshot '" + tmp + "'");
  write_all(fd, out, tmp);
  if (options_.durable) ::fdatasync(fd);
  ::close(fd);
  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) throw Error(ErrorCode::IoError, "rename snapshot: " + ec.message());
  // compaction: only the newest snapshot is kept
  for (const auto& old : list_snapshots(path_))
    if (old.revision != s.revision) fs::remove(old.path, ec);
}

std::vector<Snapshot> list_snapshots(const std::string& journal_path) {
  std::vector<Snapshot> out;
  fs::path p(journal_path);
  fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
  std::string prefix = p.filename().string() + ".snap.";
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) != 0) continue;
    std::string suffix = name.substr(prefix.size());
    if (suffix.empty() || !std::all_of(suffix.begin(), suffix.end(), [](char c) { return c >= '0' && c <= '9'; }))
      continue;
    out.push_back({std::stoull(suffix), entry.path().string()});
  }
  std::sort(out.begin(), out.end(), [](const Snapshot& a, const Snapshot& b) { return a.revision > b.revision; });
  return out;
}

std::optional<state::WorkflowState> load_snapshot(const std::string& snapshot_path) {
  std::string bytes;
  try {
    bytes = read_file(snapshot_path);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::size_t head = kSnapMagic.size() + 1;
  if (bytes.size() < head + 4 || bytes.compare(0, kSnapMagic.size(), kSnapMagic) != 0) return std::nullopt;
  std::string body = bytes.substr(head + 4);
  if (crc(body) != get_u32(bytes, head)) return std::nullopt;
  try {
    return state::state_from_json(nlohmann::json::parse(body));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace archemist::persist
