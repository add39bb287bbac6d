#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bbohub/registry/ref.hpp"

namespace bbohub::registry {

/// Relative path (forward slashes) -> file bytes.
using FileSet = std::map<std::string, std::string>;

/// SHA-256 over the canonical archive: for each path in byte order,
/// path NUL size NUL bytes.
std::string content_digest(const FileSet &files);

struct CacheEntry {
  PackageRef ref;
  std::string version;
  std::string content_digest;
  std::string fetched_at;
  std::vector<std::string> files;
  /// Directory holding the files (objects/<digest>).
  std::filesystem::path directory;

  bool operator==(const CacheEntry &) const = default;
};

/// Content-addressed store:
///   <root>/objects/<digest>/...   published by write-then-rename
///   <root>/index.json             (ref, version) -> entry, ref -> current version
///   <root>/locks/<category>__<name>.lock
class Cache {
 public:
  explicit Cache(std::filesystem::path root);

  const std::filesystem::path &root() const noexcept { return root_; }

  /// Publishes `files` and points (ref, version) and ref's current version at them.
  CacheEntry store(const PackageRef &ref, const std::string &version, const FileSet &files);

  /// Entry for (ref, version), or ref's current version when none is given.
  std::optional<CacheEntry> lookup(const PackageRef &ref, const std::optional<std::string> &version = {}) const;

  /// Re-reads the entry's files and recomputes the digest.
  /// Throws Errc::corruption on any mismatch or missing file.
  FileSet verify(const CacheEntry &entry) const;

  std::vector<CacheEntry> list() const;

  /// Exclusive advisory lock serializing fetches of one ref.
  class RefLock {
   public:
    RefLock(const Cache &cache, const PackageRef &ref);
    ~RefLock();
    RefLock(const RefLock &) = delete;
    RefLock &operator=(const RefLock &) = delete;

   private:
    int fd_ = -1;
  };

 private:
  std::filesystem::path root_;
};

/// BBOHUB_CACHE_DIR, else $XDG_CACHE_HOME/bbohub, else $HOME/.cache/bbohub.
std::filesystem::path default_cache_dir();

/// Reads every regular file under `dir` (skipping dot-entries and __pycache__).
FileSet read_tree(const std::filesystem::path &dir);

}  // namespace bbohub::registry
