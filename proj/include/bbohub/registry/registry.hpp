#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbohub/core/problem.hpp"
#include "bbohub/core/sampler.hpp"
#include "bbohub/plugin/plugin.hpp"
#include "bbohub/registry/cache.hpp"
#include "bbohub/registry/manifest.hpp"

namespace bbohub::registry {

struct RegistryOptions {
  /// Local directory, file:// URL or http:// URL of the tree holding package/.
  std::string root;
  std::filesystem::path cache_dir;
  /// Resolve from the cache only.
  bool no_network = false;
  /// Pin a version; unset takes the registry's (or cache's) current one.
  std::optional<std::string> version;
  plugin::PluginOptions plugin;

  /// root from BBOHUB_REGISTRY_ROOT (else the bundled registry) and
  /// cache_dir from default_cache_dir().
  static RegistryOptions from_environment();
};

/// Downloads <root>/package/<category>/<name>/ into the cache. When the root
/// cannot be reached, falls back to a verified cached copy.
CacheEntry fetch_package(const PackageRef &ref, const RegistryOptions &options);

/// Instantiation parameters: manifest defaults with caller overrides on top.
json merge_parameters(const json &defaults, const json &overrides);

class LoadedPackage {
 public:
  LoadedPackage(PackageManifest manifest, CacheEntry entry, plugin::PluginOptions plugin_options);

  const PackageManifest &manifest() const noexcept { return manifest_; }
  const CacheEntry &cache_entry() const noexcept { return entry_; }
  PackageRef ref() const { return manifest_.ref(); }

  /// False for pruners and visualization packages (metadata only).
  bool executable() const noexcept;

  /// Errc::unsupported when not executable or not a sampler package,
  /// Errc::binding for an unknown builtin id or bad parameters.
  std::shared_ptr<Sampler> make_sampler(const json &overrides = json::object()) const;
  std::shared_ptr<Problem> make_problem(const json &overrides = json::object()) const;

 private:
  PackageManifest manifest_;
  CacheEntry entry_;
  plugin::PluginOptions plugin_options_;
};

LoadedPackage load_module(const PackageRef &ref, const RegistryOptions &options);
LoadedPackage load_module(const std::string &ref, const RegistryOptions &options);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool publishable() const noexcept { return errors.empty(); }
};

/// Review checks for one package directory (<...>/<category>/<name>).
ValidationReport validate_package(const std::filesystem::path &dir);

}  // namespace bbohub::registry
