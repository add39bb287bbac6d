#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "bbohub/core/problem.hpp"

namespace bbohub::benchmarks {

inline constexpr std::array<int, 4> kSupportedFunctions{1, 2, 3, 8};

struct BenchmarkSpec {
  int function_id = 1;
  int dimension = 2;
  int instance = 0;

  void validate() const;
};

/// Shifted BBOB-style function on [-5, 5]^d: f(x) = g(x - shift) + f_opt.
/// Instance 0 has x_opt = 0 and f_opt = 0; instance k > 0 draws x_opt from
/// [-4, 4]^d and f_opt from [-100, 100] with a generator seeded only by
/// (function_id, instance, dimension).
class BbobFunction {
 public:
  explicit BbobFunction(const BenchmarkSpec &spec);

  double operator()(std::span<const double> x) const;

  const BenchmarkSpec &spec() const noexcept { return spec_; }
  const std::vector<double> &optimum() const noexcept { return x_opt_; }
  double optimal_value() const noexcept { return f_opt_; }

 private:
  BenchmarkSpec spec_;
  std::vector<double> x_opt_;
  std::vector<double> shift_;
  double f_opt_ = 0.0;
};

/// Params are named x0 .. x{d-1}.
SearchSpace box_space(int dimension, double low = -5.0, double high = 5.0);
std::vector<double> params_to_point(const SearchSpace &space, const Params &params);
Params point_to_params(std::span<const double> x);

class BbobProblem final : public Problem {
 public:
  explicit BbobProblem(const BenchmarkSpec &spec);

  std::string identity() const override { return "benchmarks/bbob"; }
  const SearchSpace &search_space() const override { return space_; }
  std::span<const Direction> directions() const override { return directions_; }
  std::vector<double> evaluate(const Params &params) override;
  bool reentrant() const override { return true; }

  const BbobFunction &function() const noexcept { return function_; }

 private:
  BbobFunction function_;
  SearchSpace space_;
  std::vector<Direction> directions_{Direction::minimize};
};

/// Throws Errc::unsupported listing the implemented ids.
std::unique_ptr<BbobProblem> make_bbob(const BenchmarkSpec &spec);

/// Value of f at each point; the loop over points is OpenMP-parallel.
std::vector<double> evaluate_batch(const BbobFunction &f, std::span<const std::vector<double>> points);
/// Single-threaded reference for evaluate_batch.
std::vector<double> evaluate_batch_serial(const BbobFunction &f, std::span<const std::vector<double>> points);

}  // namespace bbohub::benchmarks
