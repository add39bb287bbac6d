#include "bbohub/registry/manifest.hpp"

#include <algorithm>
#include <cctype>

#include "bbohub/core/error.hpp"

namespace bbohub::registry {

namespace {

[[noreturn]] void bad(const std::string &field, const std::string &why) {
  throw Error(Errc::validation, "manifest field '" + field + "': " + why);
}

const json &need(const json &j, const char *key) {
  if (!j.contains(key)) bad(key, "missing");
  return j.at(key);
}

std::string need_string(const json &j, const char *key) {
  const auto &v = need(j, key);
  if (!v.is_string()) bad(key, "must be a string");
  return v.get<std::string>();
}

std::vector<std::string> need_strings(const json &j, const char *key) {
  const auto &v = need(j, key);
  if (!v.is_array()) bad(key, "must be a list of strings");
  std::vector<std::string> out;
  for (const auto &e : v) {
    if (!e.is_string()) bad(key, "must be a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

bool valid_version(const std::string &version) {
  if (version.empty() || version.front() == '.' || version.back() == '.') return false;
  bool prev_dot = false;
  for (char c : version) {
    if (c == '.') {
      if (prev_dot) return false;
      prev_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      prev_dot = false;
    } else {
      return false;
    }
  }
  return true;
}

bool valid_license(const std::string &license) {
  if (license.empty()) return false;
  return std::all_of(license.begin(), license.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '.' || c == '-' || c == '+';
  });
}

bool valid_tag(const std::string &tag) {
  if (tag.empty()) return false;
  return std::all_of(tag.begin(), tag.end(), [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || std::isdigit(c) || c == '-';
  });
}

PackageManifest parse_manifest(const json &j) {
  if (!j.is_object()) throw Error(Errc::validation, "manifest must be a JSON object");
  PackageManifest m;
  m.name = need_string(j, "name");
  if (!valid_package_name(m.name)) bad("name", "must match [a-z0-9_]+");
  const auto category = category_from_string(need_string(j, "category"));
  if (!category) bad("category", "must be one of samplers, benchmarks, pruners, visualization");
  m.category = *category;
  m.version = need_string(j, "version");
  if (!valid_version(m.version)) bad("version", "must be dotted integers");
  m.summary = need_string(j, "summary");
  if (m.summary.empty() || m.summary.find('\n') != std::string::npos) bad("summary", "must be one non-empty line");
  m.authors = need_strings(j, "authors");
  if (m.authors.empty()) bad("authors", "must not be empty");
  m.license = need_string(j, "license");
  if (!valid_license(m.license)) bad("license", "must be an SPDX-style identifier");
  for (auto &tag : need_strings(j, "tags")) m.tags.push_back(lowercase(std::move(tag)));

  const auto &entry = need(j, "entry");
  if (!entry.is_object()) bad("entry", "must be an object");
  const auto kind = need_string(entry, "kind");
  if (kind == "builtin") {
    m.entry = BuiltinEntry{need_string(entry, "id")};
  } else if (kind == "plugin") {
    PluginEntry p;
    p.command = need_strings(entry, "command");
    if (p.command.empty()) bad("entry.command", "must not be empty");
    const auto &protocol = need(entry, "protocol");
    if (!protocol.is_number_integer()) bad("entry.protocol", "must be an integer");
    p.protocol = protocol.get<int>();
    m.entry = std::move(p);
  } else {
    bad("entry.kind", "must be 'builtin' or 'plugin'");
  }

  m.defaults = need(j, "defaults");
  if (!m.defaults.is_object()) bad("defaults", "must be an object");
  m.dependencies = need_strings(j, "dependencies");
  return m;
}

PackageManifest parse_manifest_text(const std::string &text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::validation, "manifest.json is not valid JSON");
  return parse_manifest(j);
}

json to_json(const PackageManifest &m) {
  json entry;
  if (const auto *b = std::get_if<BuiltinEntry>(&m.entry)) {
    entry = {{"kind", "builtin"}, {"id", b->id}};
  } else {
    const auto &p = std::get<PluginEntry>(m.entry);
    entry = {{"kind", "plugin"}, {"command", p.command}, {"protocol", p.protocol}};
  }
  return {{"name", m.name},       {"category", to_string(m.category)},
          {"version", m.version}, {"summary", m.summary},
          {"authors", m.authors}, {"license", m.license},
          {"tags", m.tags},       {"entry", entry},
          {"defaults", m.defaults}, {"dependencies", m.dependencies}};
}

}  // namespace bbohub::registry
