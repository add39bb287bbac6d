#include "bbohub/plugin/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "bbohub/core/error.hpp"

namespace bbohub::plugin {

namespace {

using Clock = std::chrono::steady_clock;

}  // namespace

Subprocess::Subprocess(const std::vector<std::string> &argv, const std::filesystem::path &working_dir) {
  if (argv.empty()) throw Error(Errc::startup, "plugin command is empty");
  std::vector<char *> cargv;
  for (const auto &a : argv) cargv.push_back(const_cast<char *>(a.c_str()));
  cargv.push_back(nullptr);
  const std::string cwd = working_dir.string();

  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw Error(Errc::startup, std::string("socketpair: ") + std::strerror(errno));
  }
  int exec_pipe[2];
  if (::pipe2(exec_pipe, O_CLOEXEC) != 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw Error(Errc::startup, std::string("pipe: ") + std::strerror(errno));
  }

  pid_ = ::fork();
  if (pid_ < 0) {
    const int err = errno;
    ::close(sv[0]);
    ::close(sv[1]);
    ::close(exec_pipe[0]);
    ::close(exec_pipe[1]);
    throw Error(Errc::startup, std::string("fork: ") + std::strerror(err));
  }
  if (pid_ == 0) {
    // Child: async-signal-safe calls only.
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
      const int err = errno;
      [[maybe_unused]] auto n = ::write(exec_pipe[1], &err, sizeof err);
      ::_exit(127);
    }
    ::execvp(cargv[0], cargv.data());
    const int err = errno;
    [[maybe_unused]] auto n = ::write(exec_pipe[1], &err, sizeof err);
    ::_exit(127);
  }

  ::close(sv[1]);
  ::close(exec_pipe[1]);
  fd_ = sv[0];
  int child_errno = 0;
  ssize_t got;
  do {
    got = ::read(exec_pipe[0], &child_errno, sizeof child_errno);
  } while (got < 0 && errno == EINTR);
  ::close(exec_pipe[0]);
  if (got == static_cast<ssize_t>(sizeof child_errno)) {
    reap(true);
    ::close(fd_);
    fd_ = -1;
    throw Error(Errc::startup, "cannot start '" + argv.front() + "': " + std::strerror(child_errno));
  }
}

Subprocess::~Subprocess() { terminate(std::chrono::milliseconds(0)); }

bool Subprocess::write_line(const std::string &line) {
  if (fd_ < 0) return false;
  std::string data = line + '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

Subprocess::ReadStatus Subprocess::read_line(std::string &out, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      out.assign(buffer_, 0, nl);
      buffer_.erase(0, nl + 1);
      return ReadStatus::line;
    }
    if (fd_ < 0) return ReadStatus::eof;
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) return ReadStatus::timeout;
    pollfd pfd{fd_, POLLIN, 0};
    const int r = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      return ReadStatus::eof;
    }
    if (r == 0) return ReadStatus::timeout;
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return ReadStatus::eof;
    }
    if (n == 0) return ReadStatus::eof;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

bool Subprocess::reap(bool block) {
  if (reaped_ || pid_ <= 0) return true;
  int status = 0;
  pid_t r;
  do {
    r = ::waitpid(pid_, &status, block ? 0 : WNOHANG);
  } while (r < 0 && errno == EINTR);
  if (r == pid_ || r < 0) reaped_ = true;
  return reaped_;
}

bool Subprocess::running() { return !reap(false); }

bool Subprocess::terminate(std::chrono::milliseconds grace) {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  if (reaped_ || pid_ <= 0) return true;
  const auto deadline = Clock::now() + grace;
  while (Clock::now() < deadline) {
    if (reap(false)) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (reap(false)) return true;
  ::kill(pid_, SIGKILL);
  reap(true);
  return false;
}

}  // namespace bbohub::plugin
