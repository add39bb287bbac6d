#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bbohub/core/serialize.hpp"
#include "bbohub/registry/ref.hpp"

namespace bbohub::registry {

struct BuiltinEntry {
  std::string id;
  bool operator==(const BuiltinEntry &) const = default;
};

struct PluginEntry {
  std::vector<std::string> command;
  int protocol = 1;
  bool operator==(const PluginEntry &) const = default;
};

struct PackageManifest {
  std::string name;
  Category category = Category::samplers;
  std::string version;
  std::string summary;
  std::vector<std::string> authors;
  std::string license;
  std::vector<std::string> tags;
  std::variant<BuiltinEntry, PluginEntry> entry;
  json defaults = json::object();
  std::vector<std::string> dependencies;

  PackageRef ref() const { return {category, name}; }
  bool is_plugin() const noexcept { return std::holds_alternative<PluginEntry>(entry); }
  bool operator==(const PackageManifest &) const = default;
};

/// The exact field set of manifest.json.
inline constexpr const char *kManifestFields[] = {"name", "category", "version", "summary", "authors",
                                                  "license", "tags", "entry", "defaults", "dependencies"};

/// Strict on the known fields (Errc::validation naming the field), silent
/// about unknown ones; tags are lowercased.
PackageManifest parse_manifest(const json &j);
PackageManifest parse_manifest_text(const std::string &text);
json to_json(const PackageManifest &m);

bool valid_version(const std::string &version);
bool valid_license(const std::string &license);
/// Lowercase letters, digits and '-'.
bool valid_tag(const std::string &tag);

}  // namespace bbohub::registry
