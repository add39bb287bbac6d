#include "bbohub/plugin/message.hpp"

#include <array>

#include "bbohub/core/error.hpp"

namespace bbohub::plugin {

namespace {

constexpr std::array<std::pair<MessageType, const char *>, 10> kTypeNames{{
    {MessageType::hello, "hello"},
    {MessageType::hello_ack, "hello_ack"},
    {MessageType::ask, "ask"},
    {MessageType::params, "params"},
    {MessageType::tell, "tell"},
    {MessageType::tell_ack, "tell_ack"},
    {MessageType::evaluate, "evaluate"},
    {MessageType::values, "values"},
    {MessageType::shutdown, "shutdown"},
    {MessageType::error, "error"},
}};

[[noreturn]] void bad(const std::string &why) { throw Error(Errc::protocol, "malformed plugin message: " + why); }

// Rewrites bare NaN / Infinity / -Infinity tokens outside strings to null.
std::string neutralize_non_finite(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < line.size()) out.push_back(line[++i]);
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    bool replaced = false;
    for (std::string_view token : {"-Infinity", "Infinity", "NaN"}) {
      if (line.substr(i, token.size()) == token) {
        out += "null";
        i += token.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(c);
  }
  return out;
}

void require(const json &j, const char *key, json::value_t kind) {
  if (!j.contains(key)) bad(std::string("missing '") + key + "'");
  const auto &v = j.at(key);
  const bool ok = kind == json::value_t::number_integer ? v.is_number_integer() : v.type() == kind;
  if (!ok) bad(std::string("field '") + key + "' has the wrong type");
}

PluginMessage make(MessageType type, json body) {
  body["type"] = to_string(type);
  return PluginMessage{type, std::move(body)};
}

json capability_list(std::span<const Capability> caps) {
  json arr = json::array();
  for (auto c : caps) arr.push_back(to_string(c));
  return arr;
}

}  // namespace

std::string to_string(MessageType type) {
  for (const auto &[t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "?";
}

std::string to_string(Capability c) { return c == Capability::sampler ? "sampler" : "problem"; }

std::string PluginMessage::serialize() const { return body.dump(); }

PluginMessage parse_message(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  json j = json::parse(neutralize_non_finite(line), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) bad("not JSON: '" + std::string(line.substr(0, 80)) + "'");
  if (!j.is_object()) bad("not a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) bad("missing 'type'");
  const auto name = j["type"].get<std::string>();
  std::optional<MessageType> type;
  for (const auto &[t, n] : kTypeNames) {
    if (name == n) type = t;
  }
  if (!type) bad("unknown type '" + name + "'");

  using vt = json::value_t;
  switch (*type) {
    case MessageType::hello:
    case MessageType::hello_ack:
      require(j, "protocol", vt::number_integer);
      require(j, "capabilities", vt::array);
      for (const auto &c : j["capabilities"]) {
        if (!c.is_string()) bad("capabilities must be strings");
      }
      break;
    case MessageType::ask:
      require(j, "trial_id", vt::number_integer);
      require(j, "search_space", vt::array);
      require(j, "history", vt::array);
      break;
    case MessageType::params:
      require(j, "trial_id", vt::number_integer);
      require(j, "params", vt::object);
      break;
    case MessageType::tell:
      require(j, "trial_id", vt::number_integer);
      if (j.contains("values")) {
        require(j, "values", vt::array);
      } else {
        require(j, "failure", vt::boolean);
      }
      break;
    case MessageType::tell_ack:
      require(j, "trial_id", vt::number_integer);
      break;
    case MessageType::evaluate:
      require(j, "params", vt::object);
      break;
    case MessageType::values:
      require(j, "values", vt::array);
      break;
    case MessageType::shutdown:
      break;
    case MessageType::error:
      require(j, "code", vt::string);
      require(j, "message", vt::string);
      break;
  }
  return PluginMessage{*type, std::move(j)};
}

PluginMessage make_hello(int protocol, std::span<const Capability> capabilities) {
  return make(MessageType::hello, {{"protocol", protocol}, {"capabilities", capability_list(capabilities)}});
}

PluginMessage make_hello_ack(int protocol, std::span<const Capability> capabilities) {
  return make(MessageType::hello_ack, {{"protocol", protocol}, {"capabilities", capability_list(capabilities)}});
}

PluginMessage make_ask(std::int64_t trial_id, const SearchSpace &space, std::span<const Trial> history) {
  json hist = json::array();
  for (const auto &t : history) {
    if (t.state != TrialState::complete) continue;
    hist.push_back({{"trial_id", t.id}, {"params", to_json(t.params)}, {"values", t.values}});
  }
  return make(MessageType::ask, {{"trial_id", trial_id}, {"search_space", to_json(space)}, {"history", hist}});
}

PluginMessage make_params(std::int64_t trial_id, const Params &params) {
  return make(MessageType::params, {{"trial_id", trial_id}, {"params", to_json(params)}});
}

PluginMessage make_tell(const Trial &trial) {
  json body = {{"trial_id", trial.id}};
  if (trial.state == TrialState::complete) {
    body["values"] = trial.values;
  } else {
    body["failure"] = true;
  }
  return make(MessageType::tell, std::move(body));
}

PluginMessage make_tell_ack(std::int64_t trial_id) { return make(MessageType::tell_ack, {{"trial_id", trial_id}}); }

PluginMessage make_evaluate(const Params &params) { return make(MessageType::evaluate, {{"params", to_json(params)}}); }

PluginMessage make_values(std::span<const double> values) {
  return make(MessageType::values, {{"values", std::vector<double>(values.begin(), values.end())}});
}

PluginMessage make_shutdown() { return make(MessageType::shutdown, json::object()); }

PluginMessage make_error(const std::string &code, const std::string &message) {
  return make(MessageType::error, {{"code", code}, {"message", message}});
}

}  // namespace bbohub::plugin
