#include "bbohub/core/serialize.hpp"

#include <cmath>
#include <limits>

#include "bbohub/core/error.hpp"

namespace bbohub {

namespace {

const json &field(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(Errc::validation, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

ParamValue coerce(const json &v, const Distribution &dist, const std::string &name) {
  switch (dist.kind) {
    case DistributionKind::float_:
      if (v.is_number()) return v.get<double>();
      break;
    case DistributionKind::int_:
      if (v.is_number_integer()) return v.get<std::int64_t>();
      if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && std::trunc(d) == d && std::abs(d) < 9.0e15) {
          return static_cast<std::int64_t>(d);
        }
      }
      break;
    case DistributionKind::categorical:
      if (v.is_string()) return v.get<std::string>();
      break;
  }
  throw Error(Errc::validation, "parameter '" + name + "' has a value of the wrong type");
}

}  // namespace

json to_json(const Distribution &dist) {
  json j = json::object();
  j["kind"] = to_string(dist.kind);
  switch (dist.kind) {
    case DistributionKind::float_:
      j["low"] = dist.low;
      j["high"] = dist.high;
      j["log"] = dist.log_scale;
      break;
    case DistributionKind::int_:
      j["low"] = static_cast<std::int64_t>(dist.low);
      j["high"] = static_cast<std::int64_t>(dist.high);
      break;
    case DistributionKind::categorical:
      j["choices"] = dist.choices;
      break;
  }
  return j;
}

json to_json(const SearchSpace &space) {
  json arr = json::array();
  for (const auto &[name, dist] : space.params()) {
    json e = to_json(dist);
    e["name"] = name;
    arr.push_back(std::move(e));
  }
  return arr;
}

json to_json(const ParamValue &value) {
  return std::visit([](const auto &v) { return json(v); }, value);
}

json to_json(const Params &params) {
  json j = json::object();
  for (const auto &[name, value] : params) j[name] = to_json(value);
  return j;
}

json to_json(const Trial &trial) {
  json j = json::object();
  j["id"] = trial.id;
  j["state"] = to_string(trial.state);
  j["params"] = to_json(trial.params);
  j["values"] = trial.values;
  return j;
}

json to_json(std::span<const Direction> directions) {
  json arr = json::array();
  for (auto d : directions) arr.push_back(to_string(d));
  return arr;
}

SearchSpace search_space_from_json(const json &j) {
  if (!j.is_array()) throw Error(Errc::validation, "search_space must be an array");
  SearchSpace space;
  for (const auto &e : j) {
    const auto name = field(e, "name").get<std::string>();
    const auto kind = field(e, "kind").get<std::string>();
    Distribution dist;
    if (kind == "float") {
      dist = Distribution::floating(field(e, "low").get<double>(), field(e, "high").get<double>(),
                                    e.value("log", false));
    } else if (kind == "int") {
      dist = Distribution::integer(field(e, "low").get<std::int64_t>(),
                                   field(e, "high").get<std::int64_t>());
    } else if (kind == "categorical") {
      dist = Distribution::categorical(field(e, "choices").get<std::vector<std::string>>());
    } else {
      throw Error(Errc::validation, "parameter '" + name + "': unknown kind '" + kind + "'");
    }
    space.add(name, std::move(dist));
  }
  space.validate();
  return space;
}

std::vector<Direction> directions_from_json(const json &j) {
  if (!j.is_array()) throw Error(Errc::validation, "directions must be an array");
  std::vector<Direction> out;
  for (const auto &d : j) out.push_back(direction_from_string(d.get<std::string>()));
  return out;
}

Params params_from_json(const json &j, const SearchSpace &space) {
  if (!j.is_object()) throw Error(Errc::validation, "params must be an object");
  Params out;
  for (const auto &[name, v] : j.items()) {
    const Distribution *dist = space.find(name);
    if (dist == nullptr) throw Error(Errc::validation, "unknown parameter '" + name + "'");
    out.emplace(name, coerce(v, *dist, name));
  }
  return out;
}

Params params_from_json(const json &j) {
  if (!j.is_object()) throw Error(Errc::validation, "params must be an object");
  Params out;
  for (const auto &[name, v] : j.items()) {
    if (v.is_number_integer()) {
      out.emplace(name, v.get<std::int64_t>());
    } else if (v.is_number()) {
      out.emplace(name, v.get<double>());
    } else if (v.is_string()) {
      out.emplace(name, v.get<std::string>());
    } else {
      throw Error(Errc::validation, "parameter '" + name + "' has a value of the wrong type");
    }
  }
  return out;
}

Trial trial_from_json(const json &j, const SearchSpace &space) {
  Trial t;
  t.id = field(j, "id").get<std::int64_t>();
  t.state = trial_state_from_string(field(j, "state").get<std::string>());
  t.params = params_from_json(field(j, "params"), space);
  t.values = field(j, "values").get<std::vector<double>>();
  return t;
}

std::string canonical(const json &j) { return j.dump(); }

}  // namespace bbohub
