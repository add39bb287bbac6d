#include "bbohub/registry/registry.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "bbohub/core/error.hpp"
#include "bbohub/registry/builtins.hpp"

#ifndef BBOHUB_DEFAULT_REGISTRY
#define BBOHUB_DEFAULT_REGISTRY "registry"
#endif

namespace bbohub::registry {

namespace fs = std::filesystem;

namespace {

constexpr const char *kReservedPluginKeys[] = {"search_space", "directions"};

struct RemoteRoot {
  bool http = false;
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // without trailing slash
  fs::path local;
};

RemoteRoot parse_root(const std::string &root) {
  RemoteRoot r;
  if (root.starts_with("http://") || root.starts_with("https://")) {
    r.http = true;
    const auto scheme_end = root.find("://") + 3;
    const auto path_start = root.find('/', scheme_end);
    r.origin = root.substr(0, path_start);
    r.base_path = path_start == std::string::npos ? "" : root.substr(path_start);
    while (!r.base_path.empty() && r.base_path.back() == '/') r.base_path.pop_back();
  } else if (root.starts_with("file://")) {
    r.local = root.substr(7);
  } else {
    r.local = root;
  }
  return r;
}

std::string package_path(const PackageRef &ref) { return "package/" + to_string(ref.category) + "/" + ref.name; }

/// nullopt: root unreachable. Throws not_found when the root answers but
/// lacks the package.
std::optional<FileSet> download_local(const PackageRef &ref, const fs::path &root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return std::nullopt;
  const fs::path dir = root / package_path(ref);
  if (!fs::is_directory(dir, ec)) throw Error(Errc::not_found, "registry has no package " + ref.str());
  return read_tree(dir);
}

std::optional<FileSet> download_http(const PackageRef &ref, const RemoteRoot &root) {
  httplib::Client client(root.origin);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(30, 0);
  const std::string base = root.base_path + "/" + package_path(ref) + "/";

  auto get = [&](const std::string &rel) -> std::optional<std::string> {
    auto res = client.Get(base + rel);
    if (!res) throw std::runtime_error("unreachable");
    if (res->status == 404) return std::nullopt;
    if (res->status != 200) throw Error(Errc::fetch, "GET " + base + rel + " -> HTTP " + std::to_string(res->status));
    return res->body;
  };

  FileSet files;
  try {
    auto manifest = get("manifest.json");
    if (!manifest) throw Error(Errc::not_found, "registry has no package " + ref.str());
    files.emplace("manifest.json", *manifest);
    if (auto readme = get("README.md")) files.emplace("README.md", *readme);
    // There is no directory listing over plain HTTP: besides the manifest
    // and README only files named on the plugin command line are fetched.
    const auto m = parse_manifest_text(files["manifest.json"]);
    if (const auto *p = std::get_if<PluginEntry>(&m.entry)) {
      for (const auto &arg : p->command) {
        if (arg.empty() || arg.starts_with('-') || arg.starts_with('/') || arg.find("..") != std::string::npos) continue;
        if (arg.find('.') == std::string::npos && arg.find('/') == std::string::npos) continue;
        if (auto body = get(arg)) files.emplace(arg, *body);
      }
    }
  } catch (const std::runtime_error &e) {
    if (dynamic_cast<const Error *>(&e) != nullptr) throw;
    return std::nullopt;
  }
  return files;
}

void check_manifest_matches(const PackageManifest &m, const PackageRef &ref) {
  if (m.ref() != ref) {
    throw Error(Errc::validation, "manifest declares " + m.ref().str() + " but was fetched as " + ref.str());
  }
}

std::string cli_value(const json &v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

std::vector<std::string> plugin_argv(const PluginEntry &entry, const json &params) {
  std::vector<std::string> argv = entry.command;
  for (const auto &[key, value] : params.items()) {
    if (std::find(std::begin(kReservedPluginKeys), std::end(kReservedPluginKeys), key) !=
        std::end(kReservedPluginKeys)) {
      continue;
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) argv.push_back("--" + key);
      continue;
    }
    if (value.is_null()) continue;
    argv.push_back("--" + key + "=" + cli_value(value));
  }
  return argv;
}

}  // namespace

RegistryOptions RegistryOptions::from_environment() {
  RegistryOptions o;
  const char *root = std::getenv("BBOHUB_REGISTRY_ROOT");
  o.root = root != nullptr && *root != '\0' ? root : BBOHUB_DEFAULT_REGISTRY;
  o.cache_dir = default_cache_dir();
  return o;
}

CacheEntry fetch_package(const PackageRef &ref, const RegistryOptions &options) {
  Cache cache(options.cache_dir);
  Cache::RefLock lock(cache, ref);

  if (!options.no_network) {
    const auto root = parse_root(options.root);
    const auto files = root.http ? download_http(ref, root) : download_local(ref, root.local);
    if (files) {
      auto it = files->find("manifest.json");
      if (it == files->end()) throw Error(Errc::validation, ref.str() + ": manifest.json missing");
      const auto manifest = parse_manifest_text(it->second);
      check_manifest_matches(manifest, ref);
      if (options.version && *options.version != manifest.version) {
        throw Error(Errc::not_found, ref.str() + "@" + *options.version + " is not the registry's version (" +
                                         manifest.version + ")");
      }
      return cache.store(ref, manifest.version, *files);
    }
  }

  auto entry = cache.lookup(ref, options.version);
  if (!entry) {
    throw Error(Errc::fetch, ref.str() + (options.no_network ? ": not in cache (network disabled)"
                                                             : ": registry unreachable and not in cache"));
  }
  cache.verify(*entry);
  return *entry;
}

json merge_parameters(const json &defaults, const json &overrides) {
  json merged = defaults.is_object() ? defaults : json::object();
  if (overrides.is_object()) {
    for (const auto &[key, value] : overrides.items()) merged[key] = value;
  }
  return merged;
}

LoadedPackage::LoadedPackage(PackageManifest manifest, CacheEntry entry, plugin::PluginOptions plugin_options)
    : manifest_(std::move(manifest)), entry_(std::move(entry)), plugin_options_(std::move(plugin_options)) {}

bool LoadedPackage::executable() const noexcept {
  return manifest_.category == Category::samplers || manifest_.category == Category::benchmarks;
}

std::shared_ptr<Sampler> LoadedPackage::make_sampler(const json &overrides) const {
  if (manifest_.category != Category::samplers) {
    throw Error(Errc::unsupported, ref().str() + " is not a sampler package" +
                                       (executable() ? "" : " (metadata-only category)"));
  }
  const json params = merge_parameters(manifest_.defaults, overrides);
  if (const auto *b = std::get_if<BuiltinEntry>(&manifest_.entry)) {
    if (!builtin_known(Category::samplers, b->id)) throw Error(Errc::binding, "unknown builtin sampler '" + b->id + "'");
    return make_builtin_sampler(b->id, params);
  }
  const auto &p = std::get<PluginEntry>(manifest_.entry);
  if (p.protocol != plugin::kProtocolVersion) {
    throw Error(Errc::version, ref().str() + " needs plugin protocol " + std::to_string(p.protocol));
  }
  auto opts = plugin_options_;
  opts.working_dir = entry_.directory;
  std::shared_ptr<plugin::PluginHandle> handle =
      plugin::spawn_plugin(plugin_argv(p, params), plugin::Capability::sampler, opts);
  return std::make_shared<plugin::PluginSampler>(ref().str(), std::move(handle));
}

std::shared_ptr<Problem> LoadedPackage::make_problem(const json &overrides) const {
  if (manifest_.category != Category::benchmarks) {
    throw Error(Errc::unsupported, ref().str() + " is not a benchmark package" +
                                       (executable() ? "" : " (metadata-only category)"));
  }
  const json params = merge_parameters(manifest_.defaults, overrides);
  if (const auto *b = std::get_if<BuiltinEntry>(&manifest_.entry)) {
    if (!builtin_known(Category::benchmarks, b->id)) {
      throw Error(Errc::binding, "unknown builtin problem '" + b->id + "'");
    }
    return make_builtin_problem(b->id, params);
  }
  const auto &p = std::get<PluginEntry>(manifest_.entry);
  if (p.protocol != plugin::kProtocolVersion) {
    throw Error(Errc::version, ref().str() + " needs plugin protocol " + std::to_string(p.protocol));
  }
  if (!params.contains("search_space")) {
    throw Error(Errc::binding, ref().str() + ": plugin problems declare 'search_space' in defaults");
  }
  const SearchSpace space = search_space_from_json(params["search_space"]);
  const auto directions = params.contains("directions") ? directions_from_json(params["directions"])
                                                        : std::vector<Direction>{Direction::minimize};
  auto opts = plugin_options_;
  opts.working_dir = entry_.directory;
  std::shared_ptr<plugin::PluginHandle> handle =
      plugin::spawn_plugin(plugin_argv(p, params), plugin::Capability::problem, opts);
  return std::make_shared<plugin::PluginProblem>(ref().str(), std::move(handle), space, directions);
}

LoadedPackage load_module(const PackageRef &ref, const RegistryOptions &options) {
  const CacheEntry entry = fetch_package(ref, options);
  const FileSet files = Cache(options.cache_dir).verify(entry);
  auto manifest = parse_manifest_text(files.at("manifest.json"));
  check_manifest_matches(manifest, ref);
  return LoadedPackage(std::move(manifest), entry, options.plugin);
}

LoadedPackage load_module(const std::string &ref, const RegistryOptions &options) {
  return load_module(parse_ref(ref), options);
}

ValidationReport validate_package(const fs::path &dir) {
  ValidationReport report;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    report.errors.push_back("package directory does not exist: " + dir.string());
    return report;
  }

  const fs::path readme = dir / "README.md";
  if (!fs::is_regular_file(readme, ec)) {
    report.errors.emplace_back("README.md required");
  } else {
    std::ifstream in(readme, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto text = buf.str();
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
      report.errors.emplace_back("README.md is empty");
    }
  }

  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::is_regular_file(manifest_path, ec)) {
    report.errors.emplace_back("manifest.json required");
    return report;
  }
  std::ifstream in(manifest_path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  const json raw = json::parse(buf.str(), nullptr, false);
  if (raw.is_discarded() || !raw.is_object()) {
    report.errors.emplace_back("manifest.json is not a JSON object");
    return report;
  }

  for (const auto &[key, value] : raw.items()) {
    if (std::find_if(std::begin(kManifestFields), std::end(kManifestFields),
                     [&](const char *f) { return key == f; }) == std::end(kManifestFields)) {
      report.warnings.push_back("unknown manifest field '" + key + "' ignored");
    }
  }
  if (raw.contains("tags") && raw["tags"].is_array()) {
    for (const auto &t : raw["tags"]) {
      if (!t.is_string()) continue;
      const auto tag = t.get<std::string>();
      std::string lower = tag;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (!valid_tag(lower)) {
        report.errors.push_back("tag '" + tag + "' must use [a-z0-9-]");
      } else if (lower != tag) {
        report.warnings.push_back("tag '" + tag + "' normalized to '" + lower + "'");
      }
    }
  }

  PackageManifest m;
  try {
    m = parse_manifest(raw);
  } catch (const Error &e) {
    report.errors.emplace_back(e.what());
    return report;
  }

  const auto dir_category = dir.lexically_normal().parent_path().filename().string();
  const auto dir_name = dir.lexically_normal().filename().string();
  if (!dir_category.empty() && dir_category != to_string(m.category)) {
    report.errors.push_back("category '" + to_string(m.category) + "' does not match directory '" + dir_category +
                            "'");
  }
  if (dir_name != m.name) {
    report.errors.push_back("name '" + m.name + "' does not match directory '" + dir_name + "'");
  }

  if (const auto *b = std::get_if<BuiltinEntry>(&m.entry)) {
    if (!builtin_known(m.category, b->id)) {
      report.errors.push_back("entry: unknown builtin id '" + b->id + "' for " + to_string(m.category));
    }
  } else {
    const auto &p = std::get<PluginEntry>(m.entry);
    if (p.protocol != plugin::kProtocolVersion) {
      report.errors.push_back("entry: unsupported plugin protocol " + std::to_string(p.protocol));
    }
    const bool has_file = std::any_of(p.command.begin(), p.command.end(), [&](const std::string &arg) {
      if (arg.empty() || arg.starts_with('-')) return false;
      const fs::path candidate = fs::path(arg).is_absolute() ? fs::path(arg) : dir / arg;
      return fs::is_regular_file(candidate, ec);
    });
    if (!has_file) report.errors.emplace_back("entry: plugin command names no file present in the package");
  }
  return report;
}

}  // namespace bbohub::registry
