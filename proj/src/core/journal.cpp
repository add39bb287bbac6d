#include "bbohub/core/journal.hpp"

#include <sstream>

#include "bbohub/core/error.hpp"
#include "bbohub/core/sha256.hpp"

namespace bbohub {

std::string to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::study_created: return "study_created";
    case RecordKind::trial_asked: return "trial_asked";
    case RecordKind::trial_told: return "trial_told";
  }
  return "?";
}

RecordKind record_kind_from_string(const std::string &text) {
  if (text == "study_created") return RecordKind::study_created;
  if (text == "trial_asked") return RecordKind::trial_asked;
  if (text == "trial_told") return RecordKind::trial_told;
  throw Error(Errc::corruption, "unknown journal record kind '" + text + "'");
}

JournalRecord JournalRecord::make(std::uint64_t seq, RecordKind kind, json payload) {
  JournalRecord r;
  r.seq = seq;
  r.kind = kind;
  r.checksum = sha256_hex(canonical(payload));
  r.payload = std::move(payload);
  return r;
}

JournalRecord JournalRecord::parse_line(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::corruption, "journal line is not a JSON object");
  }
  for (const char *key : {"seq", "kind", "payload", "checksum"}) {
    if (!j.contains(key)) throw Error(Errc::corruption, std::string("journal record missing '") + key + "'");
  }
  if (!j["seq"].is_number_unsigned() || !j["kind"].is_string() || !j["checksum"].is_string()) {
    throw Error(Errc::corruption, "journal record has mistyped fields");
  }
  JournalRecord r;
  r.seq = j["seq"].get<std::uint64_t>();
  r.kind = record_kind_from_string(j["kind"].get<std::string>());
  r.payload = std::move(j["payload"]);
  r.checksum = j["checksum"].get<std::string>();
  return r;
}

std::string JournalRecord::to_line() const {
  json j = json::object();
  j["seq"] = seq;
  j["kind"] = to_string(kind);
  j["payload"] = payload;
  j["checksum"] = checksum;
  return j.dump();
}

bool JournalRecord::verify() const { return sha256_hex(canonical(payload)) == checksum; }

std::vector<JournalRecord> read_journal(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open journal " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::vector<JournalRecord> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string_view line(text.data() + pos, (terminated ? nl : text.size()) - pos);
    pos = terminated ? nl + 1 : text.size();
    if (line.empty()) continue;
    try {
      out.push_back(JournalRecord::parse_line(line));
    } catch (const Error &) {
      if (!terminated) break;  // torn final write
      throw;
    }
  }
  return out;
}

JournalWriter::JournalWriter(const std::filesystem::path &path, bool truncate)
    : path_(path),
      out_(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app)) {
  if (!out_) throw Error(Errc::io, "cannot open journal " + path.string() + " for writing");
}

void JournalWriter::append(const JournalRecord &record) {
  const std::string line = record.to_line() + '\n';
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
  if (!out_) throw Error(Errc::io, "journal write failed: " + path_.string());
}

}  // namespace bbohub
