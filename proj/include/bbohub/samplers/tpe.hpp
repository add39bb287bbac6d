#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bbohub/core/random.hpp"
#include "bbohub/core/sampler.hpp"

namespace bbohub::samplers {

struct TpeConfig {
  double gamma_fraction = 0.10;
  int n_candidates = 24;
  int n_startup = 10;
  /// Lower bound on kernel bandwidth, as a fraction of the parameter range.
  double bandwidth_floor = 1e-3;

  void validate() const;
};

/// Sorts complete trials best-first under `direction` (stable on id) and
/// returns (first ceil(gamma * n), rest).
std::pair<std::vector<Trial>, std::vector<Trial>> tpe_split(std::span<const Trial> complete,
                                                            double gamma_fraction, Direction direction);

/// Laplace-smoothed (+1) categorical weights from observed choice counts.
std::vector<double> smoothed_weights(std::span<const std::size_t> counts);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_std(std::span<const double> xs);

/// Mixture of equal-weight Gaussians truncated to [low, high]. With no
/// observations the density is uniform on the interval.
///
/// Bandwidth is Scott's rule, scale * n^(-1/5), floored at
/// bandwidth_floor * (high - low). `scale` is the spread of every completed
/// observation of the parameter, not just this model's centers: the good
/// group is often one or two points and its own spread would collapse to 0.
class TruncatedParzen {
 public:
  TruncatedParzen(std::vector<double> centers, double low, double high, double scale, double bandwidth_floor);

  double bandwidth() const noexcept { return sigma_; }
  double log_pdf(double x) const;
  double sample(Rng &rng) const;

 private:
  std::vector<double> centers_;
  double low_, high_, sigma_;
  std::vector<double> log_mass_;
};

class TpeSampler final : public Sampler {
 public:
  explicit TpeSampler(TpeConfig config = {});

  std::string identity() const override { return "samplers/tpe"; }
  Params ask(const SamplingContext &ctx) override;
  const TpeConfig &config() const noexcept { return config_; }

 private:
  TpeConfig config_;
};

}  // namespace bbohub::samplers
