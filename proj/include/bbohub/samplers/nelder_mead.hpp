#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bbohub/core/sampler.hpp"

namespace bbohub::samplers {

struct NelderMeadCoefficients {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

enum class NelderMeadPhase : std::uint8_t { init, reflect, expand, contract, shrink };

struct Vertex {
  std::vector<double> point;
  double value = 0.0;
};

/// Bound-clipped simplex state machine over a box. Minimizes.
///
/// propose() returns the point the machine is waiting on (stable until the
/// next feed()); feed() reports its value. The caller may feed a different
/// point than the one proposed; the machine then continues from the point
/// actually evaluated.
class NelderMeadState {
 public:
  /// Startup: vertex 0 is `start`, vertex i moves coordinate i-1 by 5% of
  /// its range (inward when that would leave the box).
  NelderMeadState(std::vector<double> lower, std::vector<double> upper, std::vector<double> start,
                  NelderMeadCoefficients coeffs = {});

  /// Resumes from a fully evaluated simplex of d+1 vertices; next phase is reflect.
  static NelderMeadState from_simplex(std::vector<double> lower, std::vector<double> upper,
                                      std::vector<Vertex> simplex, NelderMeadCoefficients coeffs = {});

  const std::vector<double> &propose() const noexcept { return pending_; }
  void feed(const std::vector<double> &point, double value);

  NelderMeadPhase phase() const noexcept { return phase_; }
  const std::vector<Vertex> &simplex() const noexcept { return simplex_; }
  std::size_t dimension() const noexcept { return lower_.size(); }

 private:
  NelderMeadState() = default;
  std::vector<double> clip(std::vector<double> x) const;
  void start_iteration();
  void replace_worst(Vertex v);

  std::vector<double> lower_, upper_;
  NelderMeadCoefficients coeffs_;
  std::vector<Vertex> simplex_;
  std::vector<std::vector<double>> init_queue_;
  NelderMeadPhase phase_ = NelderMeadPhase::init;
  std::vector<double> pending_;
  std::vector<double> centroid_;
  Vertex reflected_;
  bool inside_contraction_ = false;
  std::size_t shrink_index_ = 0;
};

/// Nelder-Mead over float-only spaces (log-scale floats move in log space).
/// The state machine is rebuilt from the trial history on every ask, so the
/// sampler itself holds no state.
class NelderMeadSampler final : public Sampler {
 public:
  explicit NelderMeadSampler(NelderMeadCoefficients coeffs = {}) : coeffs_(coeffs) {}

  std::string identity() const override { return "samplers/nelder_mead"; }
  Params ask(const SamplingContext &ctx) override;

 private:
  NelderMeadCoefficients coeffs_;
};

}  // namespace bbohub::samplers
