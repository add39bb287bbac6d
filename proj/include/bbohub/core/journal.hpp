#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "bbohub/core/serialize.hpp"

namespace bbohub {

enum class RecordKind : std::uint8_t { study_created, trial_asked, trial_told };

std::string to_string(RecordKind kind);
RecordKind record_kind_from_string(const std::string &text);

/// One journal line: {"seq", "kind", "payload", "checksum"} where checksum is
/// the lowercase hex SHA-256 of canonical(payload).
struct JournalRecord {
  std::uint64_t seq = 0;
  RecordKind kind = RecordKind::study_created;
  json payload;
  std::string checksum;

  static JournalRecord make(std::uint64_t seq, RecordKind kind, json payload);
  /// Parses a line without verifying the checksum (see verify()).
  static JournalRecord parse_line(std::string_view line);

  std::string to_line() const;
  bool verify() const;

  bool operator==(const JournalRecord &) const = default;
};

/// Reads every non-empty line of a journal file. A trailing partial line
/// (no newline, unparsable) is treated as a torn write and dropped.
std::vector<JournalRecord> read_journal(const std::filesystem::path &path);

/// Append-only writer. Each record goes out as one write followed by a flush.
class JournalWriter {
 public:
  explicit JournalWriter(const std::filesystem::path &path, bool truncate = true);

  void append(const JournalRecord &record);
  const std::filesystem::path &path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace bbohub
