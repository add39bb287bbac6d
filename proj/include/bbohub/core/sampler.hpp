#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "bbohub/core/search_space.hpp"
#include "bbohub/core/trial.hpp"

namespace bbohub {

/// Everything a sampler may look at when proposing trial `trial_id`.
/// `trials` holds every trial of the study ordered by id, including running
/// ones; samplers typically filter on state.
struct SamplingContext {
  const SearchSpace &space;
  std::span<const Direction> directions;
  std::span<const Trial> trials;
  std::int64_t trial_id;
  std::uint64_t seed;
};

class Sampler {
 public:
  virtual ~Sampler() = default;

  /// Registry-style name, e.g. "samplers/tpe". Carried by sampler errors.
  virtual std::string identity() const = 0;

  virtual Params ask(const SamplingContext &ctx) = 0;

  /// Called after a trial finishes. Stateless samplers ignore it.
  virtual void after_tell(const Trial & /*trial*/) {}
};

}  // namespace bbohub
