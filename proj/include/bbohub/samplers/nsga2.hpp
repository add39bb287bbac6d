#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bbohub/core/random.hpp"
#include "bbohub/core/sampler.hpp"

namespace bbohub::samplers {

struct Nsga2Config {
  int population_size = 20;
  double crossover_prob = 0.9;
  /// Unset means 1 / (number of parameters).
  std::optional<double> mutation_prob_per_param;
  /// Shared by SBX crossover and polynomial mutation.
  double distribution_index = 20.0;

  void validate() const;
};

/// Crowded-comparison order: lower rank wins, then larger crowding distance.
/// Returns true when (rank_a, crowd_a) is strictly preferred.
bool crowded_less(std::size_t rank_a, double crowd_a, std::size_t rank_b, double crowd_b) noexcept;

/// Bounded simulated binary crossover of one variable; returns both children.
std::pair<double, double> sbx_crossover(double x1, double x2, double low, double high, double eta, Rng &rng);

/// Bounded polynomial mutation of one variable.
double polynomial_mutation(double x, double low, double high, double eta, Rng &rng);

/// Generational NSGA-II. Trial t belongs to generation t / population_size;
/// generation 0 is random, later generations breed from the elitist
/// survivors of the previous one. Survivors are recomputed from history on
/// each ask, so trials still running at a boundary simply miss that selection.
class Nsga2Sampler final : public Sampler {
 public:
  explicit Nsga2Sampler(Nsga2Config config = {});

  std::string identity() const override { return "samplers/nsga2"; }
  Params ask(const SamplingContext &ctx) override;
  const Nsga2Config &config() const noexcept { return config_; }

 private:
  Nsga2Config config_;
};

}  // namespace bbohub::samplers
