#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <sys/types.h>
#include <vector>

namespace bbohub::plugin {

/// Child process whose stdin and stdout are both connected to one end of a
/// socketpair. stderr is inherited. Writes never raise SIGPIPE.
class Subprocess {
 public:
  Subprocess(const std::vector<std::string> &argv, const std::filesystem::path &working_dir = {});
  ~Subprocess();

  Subprocess(const Subprocess &) = delete;
  Subprocess &operator=(const Subprocess &) = delete;

  /// Returns false if the peer is gone.
  bool write_line(const std::string &line);

  enum class ReadStatus { line, timeout, eof };
  /// Waits up to `timeout` for one newline-terminated line (newline stripped).
  ReadStatus read_line(std::string &out, std::chrono::milliseconds timeout);

  /// Closes our end of the channel, waits up to `grace` for exit, then SIGKILLs.
  /// Returns true when the child exited on its own. Idempotent.
  bool terminate(std::chrono::milliseconds grace);

  bool running();
  pid_t pid() const noexcept { return pid_; }

 private:
  bool reap(bool block);

  pid_t pid_ = -1;
  int fd_ = -1;
  bool reaped_ = false;
  std::string buffer_;
};

}  // namespace bbohub::plugin
