#include "bbohub/samplers/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bbohub/core/error.hpp"
#include "bbohub/samplers/pareto.hpp"
#include "bbohub/samplers/random.hpp"
#include "numeric_coding.hpp"

namespace bbohub::samplers {

namespace {

constexpr std::uint64_t kNsgaSalt = 0x6e736761325f6368ULL;

struct Ranked {
  const Trial *trial;
  std::size_t rank;
  double crowding;
};

/// Ranks and crowding distances of `pool` (all complete).
std::vector<Ranked> rank_population(const std::vector<const Trial *> &pool, std::span<const Direction> dirs) {
  std::vector<std::vector<double>> values;
  values.reserve(pool.size());
  for (const Trial *t : pool) values.push_back(t->values);
  std::vector<Ranked> out(pool.size());
  const auto fronts = non_dominated_sort(values, dirs);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    std::vector<std::vector<double>> front_values;
    for (std::size_t i : fronts[r]) {
      std::vector<double> oriented_values(values[i].size());
      for (std::size_t k = 0; k < dirs.size(); ++k) oriented_values[k] = oriented(values[i][k], dirs[k]);
      front_values.push_back(std::move(oriented_values));
    }
    const auto crowd = crowding_distance(front_values);
    for (std::size_t f = 0; f < fronts[r].size(); ++f) {
      const std::size_t i = fronts[r][f];
      out[i] = Ranked{pool[i], r, crowd[f]};
    }
  }
  return out;
}

/// Elitist truncation to `size` individuals by (rank, crowding, id).
std::vector<const Trial *> select_survivors(const std::vector<const Trial *> &pool,
                                            std::span<const Direction> dirs, std::size_t size) {
  if (pool.size() <= size) return pool;
  auto ranked = rank_population(pool, dirs);
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked &a, const Ranked &b) {
    if (crowded_less(a.rank, a.crowding, b.rank, b.crowding)) return true;
    if (crowded_less(b.rank, b.crowding, a.rank, a.crowding)) return false;
    return a.trial->id < b.trial->id;
  });
  std::vector<const Trial *> out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(ranked[i].trial);
  std::sort(out.begin(), out.end(), [](const Trial *a, const Trial *b) { return a->id < b->id; });
  return out;
}

const Ranked &tournament(const std::vector<Ranked> &population, Rng &rng) {
  const Ranked &a = population[rng.index(population.size())];
  const Ranked &b = population[rng.index(population.size())];
  if (crowded_less(b.rank, b.crowding, a.rank, a.crowding)) return b;
  return a;
}

}  // namespace

void Nsga2Config::validate() const {
  if (population_size < 2 || population_size % 2 != 0) {
    throw Error(Errc::validation, "nsga2: population_size must be a positive even integer");
  }
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
    throw Error(Errc::validation, "nsga2: crossover_prob must be in [0, 1]");
  }
  if (mutation_prob_per_param && !(*mutation_prob_per_param >= 0.0 && *mutation_prob_per_param <= 1.0)) {
    throw Error(Errc::validation, "nsga2: mutation_prob_per_param must be in [0, 1]");
  }
  if (!(distribution_index > 0.0)) throw Error(Errc::validation, "nsga2: distribution_index must be positive");
}

bool crowded_less(std::size_t rank_a, double crowd_a, std::size_t rank_b, double crowd_b) noexcept {
  if (rank_a != rank_b) return rank_a < rank_b;
  return crowd_a > crowd_b;
}

std::pair<double, double> sbx_crossover(double x1, double x2, double low, double high, double eta, Rng &rng) {
  if (!(high > low) || std::abs(x1 - x2) <= 1e-14) return {x1, x2};
  const double y1 = std::min(x1, x2);
  const double y2 = std::max(x1, x2);
  const double u = rng.uniform01();
  auto spread = [&](double beta) {
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    return u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                            : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
  };
  const double beta_low = 1.0 + 2.0 * (y1 - low) / (y2 - y1);
  const double beta_high = 1.0 + 2.0 * (high - y2) / (y2 - y1);
  double c1 = 0.5 * ((y1 + y2) - spread(beta_low) * (y2 - y1));
  double c2 = 0.5 * ((y1 + y2) + spread(beta_high) * (y2 - y1));
  c1 = std::clamp(c1, low, high);
  c2 = std::clamp(c2, low, high);
  if (rng.bernoulli(0.5)) std::swap(c1, c2);
  return {c1, c2};
}

double polynomial_mutation(double x, double low, double high, double eta, Rng &rng) {
  const double range = high - low;
  if (!(range > 0.0)) return x;
  const double d1 = (x - low) / range;
  const double d2 = (high - x) / range;
  const double u = rng.uniform01();
  const double power = 1.0 / (eta + 1.0);
  double dq;
  if (u < 0.5) {
    const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
    dq = std::pow(v, power) - 1.0;
  } else {
    const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
    dq = 1.0 - std::pow(v, power);
  }
  return std::clamp(x + dq * range, low, high);
}

Nsga2Sampler::Nsga2Sampler(Nsga2Config config) : config_(config) { config_.validate(); }

Params Nsga2Sampler::ask(const SamplingContext &ctx) {
  if (ctx.directions.size() < 2) {
    throw Error(Errc::configuration, "nsga2 needs at least two objectives; use tpe or nelder_mead");
  }
  Rng rng = trial_rng(ctx.seed, ctx.trial_id, kNsgaSalt);
  const auto pop = static_cast<std::int64_t>(config_.population_size);
  const std::int64_t generation = ctx.trial_id / pop;
  if (generation == 0) return random_sample(ctx.space, rng);

  std::vector<const Trial *> parents;
  for (std::int64_t g = 0; g < generation; ++g) {
    std::vector<const Trial *> pool = parents;
    for (const auto &t : ctx.trials) {
      if (t.id / pop == g && t.state == TrialState::complete) pool.push_back(&t);
    }
    parents = select_survivors(pool, ctx.directions, static_cast<std::size_t>(pop));
  }
  if (parents.empty()) return random_sample(ctx.space, rng);

  const auto population = rank_population(parents, ctx.directions);
  const Trial &p1 = *tournament(population, rng).trial;
  const Trial &p2 = *tournament(population, rng).trial;
  const bool crossover = rng.bernoulli(config_.crossover_prob);
  const double mutation_prob =
      config_.mutation_prob_per_param.value_or(ctx.space.empty() ? 0.0 : 1.0 / static_cast<double>(ctx.space.size()));
  const double eta = config_.distribution_index;

  Params child;
  for (const auto &[name, d] : ctx.space.params()) {
    const auto &v1 = p1.params.at(name);
    const auto &v2 = p2.params.at(name);
    if (d.kind == DistributionKind::categorical) {
      ParamValue v = (crossover && rng.bernoulli(0.5)) ? v2 : v1;
      if (rng.bernoulli(mutation_prob)) v = d.choices[rng.index(d.choices.size())];
      child.emplace(name, std::move(v));
      continue;
    }
    const auto b = detail::internal_bounds(d);
    double x = detail::to_internal(d, v1);
    if (crossover && rng.bernoulli(0.5)) {
      x = sbx_crossover(x, detail::to_internal(d, v2), b.low, b.high, eta, rng).first;
    }
    if (rng.bernoulli(mutation_prob)) x = polynomial_mutation(x, b.low, b.high, eta, rng);
    child.emplace(name, detail::from_internal(d, x));
  }
  return child;
}

}  // namespace bbohub::samplers
