#pragma once
// Shared helpers for the unit and acceptance tests.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bbohub::testing {

namespace fs = std::filesystem;

inline fs::path fixtures_dir() { return BBOHUB_FIXTURES_DIR; }
inline fs::path shipped_registry() { return BBOHUB_REGISTRY_DIR; }
inline fs::path plugin_registry() { return fixtures_dir() / "plugin_registry"; }
inline fs::path cli_path() { return BBOHUB_CLI; }

/// mkdtemp directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &tag = "bbohub");
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const fs::path &path() const noexcept { return path_; }
  fs::path operator/(const std::string &rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

std::string read_file(const fs::path &p);
void write_file(const fs::path &p, const std::string &content);
/// Recursive copy preserving permissions.
void copy_tree(const fs::path &from, const fs::path &to);

struct CommandResult {
  int exit_code = -1;  // -1 when killed by a signal
  std::string out;
  std::string err;
};

/// Runs argv with extra environment variables; captures stdout and stderr.
CommandResult run_command(const std::vector<std::string> &argv, const std::map<std::string, std::string> &env = {});

/// Sets (or unsets, for nullopt) an environment variable for the scope.
class ScopedEnv {
 public:
  ScopedEnv(std::string name, std::optional<std::string> value);
  ~ScopedEnv();
  ScopedEnv(const ScopedEnv &) = delete;
  ScopedEnv &operator=(const ScopedEnv &) = delete;

 private:
  std::string name_;
  std::optional<std::string> old_;
};

}  // namespace bbohub::testing
