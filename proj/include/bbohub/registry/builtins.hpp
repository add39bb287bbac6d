#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bbohub/core/problem.hpp"
#include "bbohub/core/sampler.hpp"
#include "bbohub/core/serialize.hpp"
#include "bbohub/registry/ref.hpp"

namespace bbohub::registry {

/// Compiled-in ids: samplers {random, nelder_mead, tpe, nsga2, auto_sampler},
/// benchmarks {bbob, bi_sphere}.
bool builtin_known(Category category, const std::string &id);
std::vector<std::string> builtin_ids(Category category);

/// Parameters are checked against each builtin's accepted keys
/// (Errc::binding on unknown keys or wrong types).
std::shared_ptr<Sampler> make_builtin_sampler(const std::string &id, const json &params);
std::shared_ptr<Problem> make_builtin_problem(const std::string &id, const json &params);

}  // namespace bbohub::registry
