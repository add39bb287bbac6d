#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bbohub/core/serialize.hpp"

namespace bbohub::plugin {

inline constexpr int kProtocolVersion = 1;

enum class MessageType : std::uint8_t {
  hello,
  hello_ack,
  ask,
  params,
  tell,
  tell_ack,
  evaluate,
  values,
  shutdown,
  error,
};

std::string to_string(MessageType type);

enum class Capability : std::uint8_t { sampler, problem };

std::string to_string(Capability c);

/// One wire message: a JSON object with a "type" field plus the fields of
/// that type. Lines are compact, key-sorted JSON without the trailing newline.
///
///   hello      {protocol, capabilities}
///   hello_ack  {protocol, capabilities}
///   ask        {trial_id, search_space, history: [{trial_id, params, values}]}
///   params     {trial_id, params}
///   tell       {trial_id, values} | {trial_id, failure: true}
///   tell_ack   {trial_id}
///   evaluate   {params}
///   values     {values}
///   shutdown   {}
///   error      {code, message}
struct PluginMessage {
  MessageType type = MessageType::shutdown;
  json body = json::object();

  std::string serialize() const;
  bool operator==(const PluginMessage &) const = default;
};

/// Throws Errc::protocol for anything that is not a well-formed message.
/// Bare NaN / Infinity tokens (as emitted by some JSON encoders) decode as
/// null so that non-finite values surface as contract violations instead.
PluginMessage parse_message(std::string_view line);

PluginMessage make_hello(int protocol, std::span<const Capability> capabilities);
PluginMessage make_hello_ack(int protocol, std::span<const Capability> capabilities);
PluginMessage make_ask(std::int64_t trial_id, const SearchSpace &space, std::span<const Trial> history);
PluginMessage make_params(std::int64_t trial_id, const Params &params);
PluginMessage make_tell(const Trial &trial);
PluginMessage make_tell_ack(std::int64_t trial_id);
PluginMessage make_evaluate(const Params &params);
PluginMessage make_values(std::span<const double> values);
PluginMessage make_shutdown();
PluginMessage make_error(const std::string &code, const std::string &message);

}  // namespace bbohub::plugin
