#pragma once

#include <json.hpp>

#include "bbohub/core/search_space.hpp"
#include "bbohub/core/trial.hpp"

namespace bbohub {

using json = nlohmann::json;

json to_json(const Distribution &dist);
json to_json(const SearchSpace &space);
json to_json(const ParamValue &value);
json to_json(const Params &params);
json to_json(const Trial &trial);
json to_json(std::span<const Direction> directions);

/// Entry is {"name": ..., "kind": ...} plus kind-specific fields.
SearchSpace search_space_from_json(const json &j);
std::vector<Direction> directions_from_json(const json &j);
/// Numbers are coerced by the declared kind: float params accept any number,
/// int params require an integral value, categorical params a string.
Params params_from_json(const json &j, const SearchSpace &space);
/// Space-free decoding: integer -> int64, float -> double, string -> string.
Params params_from_json(const json &j);
Trial trial_from_json(const json &j, const SearchSpace &space);

/// Compact, key-sorted rendering used for checksums and byte comparisons.
std::string canonical(const json &j);

}  // namespace bbohub
