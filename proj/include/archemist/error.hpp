#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace archemist {

enum class ErrorCode {
  InvalidCursor,
  UnknownTypeName,
  DuplicateTypeName,
  ConfigError,
  NotAssigned,
  SchemaMismatch,
  UnitMismatch,
  Locked,
  Corrupt,
  RevisionGap,
  IoError,
  EmptyJournal,
  StaleRevision,
  InvalidEvent,
  ScenarioError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure that crosses a module boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a journal fails its framing or checksum check.
class CorruptJournal : public Error {
 public:
  CorruptJournal(std::uint64_t last_good, const std::string& what)
      : Error(ErrorCode::Corrupt, what + " (last good revision " + std::to_string(last_good) + ")"),
        last_good_(last_good) {}

  std::uint64_t last_good() const noexcept { return last_good_; }

 private:
  std::uint64_t last_good_;
};

}  // namespace archemist
