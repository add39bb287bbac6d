#pragma once

#include "bbohub/core/random.hpp"
#include "bbohub/core/sampler.hpp"

namespace bbohub::samplers {

/// Independent draw per parameter: uniform (uniform in log-space when
/// log_scale) for floats, inclusive-uniform for ints, uniform over choices.
Params random_sample(const SearchSpace &space, Rng &rng);

/// Generator for one (seed, trial) pair. Every builtin sampler draws from a
/// stream derived this way, which makes asks a pure function of
/// (seed, trial id, history).
Rng trial_rng(std::uint64_t seed, std::int64_t trial_id, std::uint64_t salt);

class RandomSampler final : public Sampler {
 public:
  std::string identity() const override { return "samplers/random"; }
  Params ask(const SamplingContext &ctx) override;
};

}  // namespace bbohub::samplers
