#include "bbohub/samplers/random.hpp"

#include <algorithm>
#include <cmath>

namespace bbohub::samplers {

namespace {
constexpr std::uint64_t kRandomSalt = 0x72616e646f6dULL;
}

Params random_sample(const SearchSpace &space, Rng &rng) {
  Params out;
  for (const auto &[name, d] : space.params()) {
    switch (d.kind) {
      case DistributionKind::float_: {
        double x = d.log_scale ? std::exp(rng.uniform(std::log(d.low), std::log(d.high)))
                               : rng.uniform(d.low, d.high);
        out.emplace(name, std::clamp(x, d.low, d.high));
        break;
      }
      case DistributionKind::int_:
        out.emplace(name, rng.integer(static_cast<std::int64_t>(d.low), static_cast<std::int64_t>(d.high)));
        break;
      case DistributionKind::categorical:
        out.emplace(name, d.choices[rng.index(d.choices.size())]);
        break;
    }
  }
  return out;
}

Rng trial_rng(std::uint64_t seed, std::int64_t trial_id, std::uint64_t salt) {
  return Rng(derive_seed({seed, static_cast<std::uint64_t>(trial_id), salt}));
}

Params RandomSampler::ask(const SamplingContext &ctx) {
  Rng rng = trial_rng(ctx.seed, ctx.trial_id, kRandomSalt);
  return random_sample(ctx.space, rng);
}

}  // namespace bbohub::samplers
