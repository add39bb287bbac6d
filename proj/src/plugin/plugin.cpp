#include "bbohub/plugin/plugin.hpp"

#include <algorithm>
#include <cmath>

#include "bbohub/core/error.hpp"

namespace bbohub::plugin {

namespace {

std::string describe(const std::vector<std::string> &command) {
  std::string out;
  for (const auto &a : command) out += (out.empty() ? "" : " ") + a;
  return out;
}

}  // namespace

PluginHandle::PluginHandle(std::vector<std::string> command, Capability expected, PluginOptions options)
    : command_(std::move(command)), options_(std::move(options)) {
  process_ = std::make_unique<Subprocess>(command_, options_.working_dir);
  std::lock_guard lock(mutex_);
  const std::array<Capability, 1> wanted{expected};
  if (!process_->write_line(make_hello(kProtocolVersion, wanted).serialize())) {
    close_locked();
    throw Error(Errc::startup, "plugin '" + describe(command_) + "' closed its input during handshake");
  }
  std::string line;
  switch (process_->read_line(line, options_.handshake_timeout)) {
    case Subprocess::ReadStatus::timeout:
      close_locked();
      throw Error(Errc::startup, "plugin '" + describe(command_) + "' handshake timed out");
    case Subprocess::ReadStatus::eof:
      close_locked();
      throw Error(Errc::startup, "plugin '" + describe(command_) + "' exited during handshake");
    case Subprocess::ReadStatus::line:
      break;
  }
  PluginMessage ack;
  try {
    ack = parse_message(line);
  } catch (const Error &) {
    close_locked();
    throw;
  }
  if (ack.type != MessageType::hello_ack) {
    close_locked();
    throw Error(Errc::protocol, "expected hello_ack, got " + to_string(ack.type));
  }
  protocol_ = ack.body["protocol"].get<int>();
  if (protocol_ != kProtocolVersion) {
    close_locked();
    throw Error(Errc::version, "plugin speaks protocol " + std::to_string(protocol_) + ", host supports " +
                                   std::to_string(kProtocolVersion));
  }
  for (const auto &c : ack.body["capabilities"]) {
    const auto name = c.get<std::string>();
    if (name == "sampler") capabilities_.push_back(Capability::sampler);
    if (name == "problem") capabilities_.push_back(Capability::problem);
  }
  if (std::find(capabilities_.begin(), capabilities_.end(), expected) == capabilities_.end()) {
    close_locked();
    throw Error(Errc::capability, "plugin '" + describe(command_) + "' lacks the " + to_string(expected) +
                                      " capability");
  }
  state_ = HandleState::ready;
}

PluginHandle::~PluginHandle() {
  try {
    shutdown();
  } catch (...) {
  }
}

HandleState PluginHandle::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

bool PluginHandle::has(Capability c) const {
  return std::find(capabilities_.begin(), capabilities_.end(), c) != capabilities_.end();
}

void PluginHandle::close_locked() {
  if (process_) killed_ = !process_->terminate(std::chrono::milliseconds(0)) || killed_;
  state_ = HandleState::closed;
}

void PluginHandle::require_ready_locked(Capability c) const {
  if (state_ != HandleState::ready) throw Error(Errc::state, "plugin handle is not ready");
  if (!has(c)) throw Error(Errc::capability, "plugin lacks the " + to_string(c) + " capability");
}

PluginMessage PluginHandle::request_locked(const PluginMessage &msg, MessageType expected) {
  if (!process_->write_line(msg.serialize())) {
    close_locked();
    throw Error(Errc::protocol, "plugin '" + describe(command_) + "' is gone (write failed)");
  }
  std::string line;
  switch (process_->read_line(line, options_.request_timeout)) {
    case Subprocess::ReadStatus::timeout:
      close_locked();
      throw Error(Errc::timeout, "plugin '" + describe(command_) + "' did not answer " + to_string(msg.type) +
                                     " within " + std::to_string(options_.request_timeout.count()) + " ms");
    case Subprocess::ReadStatus::eof:
      close_locked();
      throw Error(Errc::protocol, "plugin '" + describe(command_) + "' exited while handling " +
                                      to_string(msg.type));
    case Subprocess::ReadStatus::line:
      break;
  }
  PluginMessage reply;
  try {
    reply = parse_message(line);
  } catch (const Error &) {
    close_locked();
    throw;
  }
  if (reply.type == MessageType::error) {
    throw Error(Errc::remote, "plugin error " + reply.body["code"].get<std::string>() + ": " +
                                  reply.body["message"].get<std::string>());
  }
  if (reply.type != expected) {
    close_locked();
    throw Error(Errc::protocol, "expected " + to_string(expected) + ", got " + to_string(reply.type));
  }
  return reply;
}

Params PluginHandle::ask(std::int64_t trial_id, const SearchSpace &space, std::span<const Trial> trials) {
  std::lock_guard lock(mutex_);
  require_ready_locked(Capability::sampler);
  auto reply = request_locked(make_ask(trial_id, space, trials), MessageType::params);
  if (reply.body["trial_id"].get<std::int64_t>() != trial_id) {
    close_locked();
    throw Error(Errc::protocol, "params reply for trial " + std::to_string(reply.body["trial_id"].get<std::int64_t>()) +
                                    ", expected " + std::to_string(trial_id));
  }
  Params params;
  try {
    params = params_from_json(reply.body["params"], space);
    space.check(params);
  } catch (const Error &e) {
    throw Error(Errc::contract_violation, std::string("plugin params rejected: ") + e.what());
  }
  return params;
}

void PluginHandle::tell(const Trial &trial) {
  std::lock_guard lock(mutex_);
  require_ready_locked(Capability::sampler);
  auto reply = request_locked(make_tell(trial), MessageType::tell_ack);
  if (reply.body["trial_id"].get<std::int64_t>() != trial.id) {
    close_locked();
    throw Error(Errc::protocol, "tell_ack for the wrong trial");
  }
}

std::vector<double> PluginHandle::evaluate(const Params &params, std::size_t arity) {
  std::lock_guard lock(mutex_);
  require_ready_locked(Capability::problem);
  auto reply = request_locked(make_evaluate(params), MessageType::values);
  const auto &arr = reply.body["values"];
  if (arr.size() != arity) {
    throw Error(Errc::contract_violation, "plugin returned " + std::to_string(arr.size()) + " values, expected " +
                                              std::to_string(arity));
  }
  std::vector<double> values;
  for (const auto &v : arr) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw Error(Errc::contract_violation, "plugin returned a non-finite value");
    }
    values.push_back(v.get<double>());
  }
  return values;
}

void PluginHandle::shutdown() {
  std::lock_guard lock(mutex_);
  if (state_ == HandleState::closed) return;
  if (process_) {
    process_->write_line(make_shutdown().serialize());
    killed_ = !process_->terminate(options_.shutdown_grace);
  }
  state_ = HandleState::closed;
}

std::unique_ptr<PluginHandle> spawn_plugin(std::vector<std::string> command, Capability expected,
                                           PluginOptions options) {
  return std::make_unique<PluginHandle>(std::move(command), expected, std::move(options));
}

PluginSampler::PluginSampler(std::string identity, std::shared_ptr<PluginHandle> handle)
    : identity_(std::move(identity)), handle_(std::move(handle)) {}

Params PluginSampler::ask(const SamplingContext &ctx) { return handle_->ask(ctx.trial_id, ctx.space, ctx.trials); }

void PluginSampler::after_tell(const Trial &trial) { handle_->tell(trial); }

PluginProblem::PluginProblem(std::string identity, std::shared_ptr<PluginHandle> handle, SearchSpace space,
                             std::vector<Direction> directions)
    : identity_(std::move(identity)),
      handle_(std::move(handle)),
      space_(std::move(space)),
      directions_(std::move(directions)) {
  space_.validate();
  if (directions_.empty()) throw Error(Errc::validation, "plugin problem needs at least one direction");
}

std::vector<double> PluginProblem::evaluate(const Params &params) {
  space_.check(params);
  return handle_->evaluate(params, directions_.size());
}

}  // namespace bbohub::plugin
