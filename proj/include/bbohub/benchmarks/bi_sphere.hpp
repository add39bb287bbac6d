#pragma once

#include <memory>

#include "bbohub/core/problem.hpp"

namespace bbohub::benchmarks {

/// f1 = |x - a|^2, f2 = |x + a|^2 with a = (offset, ..., offset), both
/// minimized on [-5, 5]^d. The Pareto set is the segment [-a, a].
class BiSphereProblem final : public Problem {
 public:
  BiSphereProblem(int dimension, double offset);

  std::string identity() const override { return "benchmarks/bi_sphere"; }
  const SearchSpace &search_space() const override { return space_; }
  std::span<const Direction> directions() const override { return directions_; }
  std::vector<double> evaluate(const Params &params) override;
  bool reentrant() const override { return true; }

  std::vector<double> values_at(std::span<const double> x) const;
  double offset() const noexcept { return offset_; }

 private:
  int dimension_;
  double offset_;
  SearchSpace space_;
  std::vector<Direction> directions_{Direction::minimize, Direction::minimize};
};

std::unique_ptr<BiSphereProblem> make_bi_sphere(int dimension, double offset);

}  // namespace bbohub::benchmarks
