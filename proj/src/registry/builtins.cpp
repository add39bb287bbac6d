#include "bbohub/registry/builtins.hpp"

#include <algorithm>
#include <set>

#include "bbohub/benchmarks/bbob.hpp"
#include "bbohub/benchmarks/bi_sphere.hpp"
#include "bbohub/core/error.hpp"
#include "bbohub/samplers/auto.hpp"
#include "bbohub/samplers/nelder_mead.hpp"
#include "bbohub/samplers/nsga2.hpp"
#include "bbohub/samplers/random.hpp"
#include "bbohub/samplers/tpe.hpp"

namespace bbohub::registry {

namespace {

void only_keys(const std::string &id, const json &params, std::set<std::string> allowed) {
  if (!params.is_object()) throw Error(Errc::binding, "parameters for '" + id + "' must be an object");
  for (const auto &[key, value] : params.items()) {
    if (!allowed.contains(key)) throw Error(Errc::binding, "'" + id + "' does not accept parameter '" + key + "'");
  }
}

int int_param(const std::string &id, const json &params, const char *key, int fallback) {
  if (!params.contains(key)) return fallback;
  const auto &v = params.at(key);
  if (!v.is_number_integer()) throw Error(Errc::binding, "'" + id + "' parameter '" + key + "' must be an integer");
  return v.get<int>();
}

double number_param(const std::string &id, const json &params, const char *key, double fallback) {
  if (!params.contains(key)) return fallback;
  const auto &v = params.at(key);
  if (!v.is_number()) throw Error(Errc::binding, "'" + id + "' parameter '" + key + "' must be a number");
  return v.get<double>();
}

const std::vector<std::string> kSamplerIds{"auto_sampler", "nelder_mead", "nsga2", "random", "tpe"};
const std::vector<std::string> kProblemIds{"bbob", "bi_sphere"};

}  // namespace

std::vector<std::string> builtin_ids(Category category) {
  switch (category) {
    case Category::samplers: return kSamplerIds;
    case Category::benchmarks: return kProblemIds;
    default: return {};
  }
}

bool builtin_known(Category category, const std::string &id) {
  const auto ids = builtin_ids(category);
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

std::shared_ptr<Sampler> make_builtin_sampler(const std::string &id, const json &params) {
  if (id == "random") {
    only_keys(id, params, {});
    return std::make_shared<samplers::RandomSampler>();
  }
  if (id == "nelder_mead") {
    only_keys(id, params, {});
    return std::make_shared<samplers::NelderMeadSampler>();
  }
  if (id == "auto_sampler") {
    only_keys(id, params, {});
    return std::make_shared<samplers::AutoSampler>();
  }
  if (id == "tpe") {
    only_keys(id, params, {"gamma_fraction", "n_candidates", "n_startup", "bandwidth_floor"});
    samplers::TpeConfig c;
    c.gamma_fraction = number_param(id, params, "gamma_fraction", c.gamma_fraction);
    c.n_candidates = int_param(id, params, "n_candidates", c.n_candidates);
    c.n_startup = int_param(id, params, "n_startup", c.n_startup);
    c.bandwidth_floor = number_param(id, params, "bandwidth_floor", c.bandwidth_floor);
    return std::make_shared<samplers::TpeSampler>(c);
  }
  if (id == "nsga2") {
    only_keys(id, params, {"population_size", "crossover_prob", "mutation_prob_per_param", "distribution_index"});
    samplers::Nsga2Config c;
    c.population_size = int_param(id, params, "population_size", c.population_size);
    c.crossover_prob = number_param(id, params, "crossover_prob", c.crossover_prob);
    if (params.contains("mutation_prob_per_param") && !params["mutation_prob_per_param"].is_null()) {
      c.mutation_prob_per_param = number_param(id, params, "mutation_prob_per_param", 0.0);
    }
    c.distribution_index = number_param(id, params, "distribution_index", c.distribution_index);
    return std::make_shared<samplers::Nsga2Sampler>(c);
  }
  throw Error(Errc::binding, "unknown builtin sampler '" + id + "'");
}

std::shared_ptr<Problem> make_builtin_problem(const std::string &id, const json &params) {
  if (id == "bbob") {
    only_keys(id, params, {"function_id", "dimension", "instance"});
    benchmarks::BenchmarkSpec spec;
    spec.function_id = int_param(id, params, "function_id", spec.function_id);
    spec.dimension = int_param(id, params, "dimension", spec.dimension);
    spec.instance = int_param(id, params, "instance", spec.instance);
    return benchmarks::make_bbob(spec);
  }
  if (id == "bi_sphere") {
    only_keys(id, params, {"dimension", "offset"});
    return benchmarks::make_bi_sphere(int_param(id, params, "dimension", 2), number_param(id, params, "offset", 1.0));
  }
  throw Error(Errc::binding, "unknown builtin problem '" + id + "'");
}

}  // namespace bbohub::registry
