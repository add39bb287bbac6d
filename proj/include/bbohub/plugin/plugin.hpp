#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bbohub/core/problem.hpp"
#include "bbohub/core/sampler.hpp"
#include "bbohub/plugin/message.hpp"
#include "bbohub/plugin/process.hpp"

namespace bbohub::plugin {

struct PluginOptions {
  std::chrono::milliseconds handshake_timeout{10'000};
  std::chrono::milliseconds request_timeout{30'000};
  std::chrono::milliseconds shutdown_grace{5'000};
  std::filesystem::path working_dir;
};

enum class HandleState : std::uint8_t { starting, ready, closed };

/// Host side of one plugin process. Strict request/response: a mutex keeps
/// at most one request in flight. Any timeout or broken stream closes the
/// handle (the process is killed); later requests fail with Errc::state.
class PluginHandle {
 public:
  PluginHandle(std::vector<std::string> command, Capability expected, PluginOptions options = {});
  ~PluginHandle();

  PluginHandle(const PluginHandle &) = delete;
  PluginHandle &operator=(const PluginHandle &) = delete;

  /// Returned params are validated against `space` (Errc::contract_violation).
  Params ask(std::int64_t trial_id, const SearchSpace &space, std::span<const Trial> trials);
  void tell(const Trial &trial);
  /// Returned values must be `arity` finite numbers (Errc::contract_violation).
  std::vector<double> evaluate(const Params &params, std::size_t arity);
  void shutdown();

  HandleState state() const;
  int protocol() const noexcept { return protocol_; }
  const std::vector<Capability> &capabilities() const noexcept { return capabilities_; }
  bool has(Capability c) const;
  const std::vector<std::string> &command() const noexcept { return command_; }
  /// True if the last shutdown() needed SIGKILL.
  bool was_killed() const noexcept { return killed_; }

 private:
  PluginMessage request_locked(const PluginMessage &msg, MessageType expected);
  void close_locked();
  void require_ready_locked(Capability c) const;

  std::vector<std::string> command_;
  PluginOptions options_;
  mutable std::mutex mutex_;
  std::unique_ptr<Subprocess> process_;
  HandleState state_ = HandleState::starting;
  int protocol_ = 0;
  std::vector<Capability> capabilities_;
  bool killed_ = false;
};

std::unique_ptr<PluginHandle> spawn_plugin(std::vector<std::string> command, Capability expected,
                                           PluginOptions options = {});

/// Sampler adapter; forwards asks and tells over the handle.
class PluginSampler final : public Sampler {
 public:
  PluginSampler(std::string identity, std::shared_ptr<PluginHandle> handle);

  std::string identity() const override { return identity_; }
  Params ask(const SamplingContext &ctx) override;
  void after_tell(const Trial &trial) override;

  PluginHandle &handle() noexcept { return *handle_; }

 private:
  std::string identity_;
  std::shared_ptr<PluginHandle> handle_;
};

/// Problem adapter. The space and directions come from the package manifest;
/// the wire protocol only carries evaluations.
class PluginProblem final : public Problem {
 public:
  PluginProblem(std::string identity, std::shared_ptr<PluginHandle> handle, SearchSpace space,
                std::vector<Direction> directions);

  std::string identity() const override { return identity_; }
  const SearchSpace &search_space() const override { return space_; }
  std::span<const Direction> directions() const override { return directions_; }
  std::vector<double> evaluate(const Params &params) override;

  PluginHandle &handle() noexcept { return *handle_; }

 private:
  std::string identity_;
  std::shared_ptr<PluginHandle> handle_;
  SearchSpace space_;
  std::vector<Direction> directions_;
};

}  // namespace bbohub::plugin
