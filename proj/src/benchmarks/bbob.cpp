#include "bbohub/benchmarks/bbob.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbohub/core/error.hpp"
#include "bbohub/core/random.hpp"

namespace bbohub::benchmarks {

namespace {

constexpr std::uint64_t kInstanceSalt = 0x62626f62ULL;

double sphere(std::span<const double> z) {
  double s = 0.0;
  for (double v : z) s += v * v;
  return s;
}

double ellipsoid(std::span<const double> z) {
  const std::size_t d = z.size();
  if (d == 1) return z[0] * z[0];
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double exponent = 6.0 * static_cast<double>(i) / static_cast<double>(d - 1);
    s += std::pow(10.0, exponent) * z[i] * z[i];
  }
  return s;
}

double rastrigin(std::span<const double> z) {
  double s = 10.0 * static_cast<double>(z.size());
  for (double v : z) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

double rosenbrock(std::span<const double> z) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) {
    const double a = z[i + 1] - z[i] * z[i];
    const double b = z[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  if (z.size() == 1) s = (z[0] - 1.0) * (z[0] - 1.0);
  return s;
}

}  // namespace

void BenchmarkSpec::validate() const {
  if (std::find(kSupportedFunctions.begin(), kSupportedFunctions.end(), function_id) == kSupportedFunctions.end()) {
    std::string list;
    for (int id : kSupportedFunctions) list += (list.empty() ? "" : ", ") + std::to_string(id);
    throw Error(Errc::unsupported,
                "bbob function_id " + std::to_string(function_id) + " is not implemented (supported: " + list + ")");
  }
  if (dimension < 1) throw Error(Errc::validation, "bbob dimension must be >= 1");
  if (instance < 0) throw Error(Errc::validation, "bbob instance must be >= 0");
}

BbobFunction::BbobFunction(const BenchmarkSpec &spec) : spec_(spec) {
  spec_.validate();
  const auto d = static_cast<std::size_t>(spec_.dimension);
  x_opt_.assign(d, 0.0);
  if (spec_.instance > 0) {
    Rng rng(derive_seed({static_cast<std::uint64_t>(spec_.function_id), static_cast<std::uint64_t>(spec_.instance),
                         static_cast<std::uint64_t>(spec_.dimension), kInstanceSalt}));
    for (auto &x : x_opt_) {
      x = rng.uniform(-4.0, 4.0);
      if (spec_.function_id == 8) x = std::clamp(x + 1.0, -4.0, 4.0);
    }
    f_opt_ = rng.uniform(-100.0, 100.0);
  }
  // Rosenbrock's unshifted optimum sits at z = 1.
  shift_ = x_opt_;
  if (spec_.function_id == 8) {
    for (auto &s : shift_) s -= 1.0;
  }
}

double BbobFunction::operator()(std::span<const double> x) const {
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - shift_[i];
  double g = 0.0;
  switch (spec_.function_id) {
    case 1: g = sphere(z); break;
    case 2: g = ellipsoid(z); break;
    case 3: g = rastrigin(z); break;
    case 8: g = rosenbrock(z); break;
    default: break;
  }
  return g + f_opt_;
}

SearchSpace box_space(int dimension, double low, double high) {
  SearchSpace space;
  for (int i = 0; i < dimension; ++i) space.add("x" + std::to_string(i), Distribution::floating(low, high));
  return space;
}

std::vector<double> params_to_point(const SearchSpace &space, const Params &params) {
  space.check(params);
  std::vector<double> x;
  x.reserve(space.size());
  for (const auto &[name, dist] : space.params()) x.push_back(std::get<double>(params.at(name)));
  return x;
}

Params point_to_params(std::span<const double> x) {
  Params p;
  for (std::size_t i = 0; i < x.size(); ++i) p.emplace("x" + std::to_string(i), x[i]);
  return p;
}

BbobProblem::BbobProblem(const BenchmarkSpec &spec) : function_(spec), space_(box_space(spec.dimension)) {}

std::vector<double> BbobProblem::evaluate(const Params &params) {
  const auto x = params_to_point(space_, params);
  return {function_(x)};
}

std::unique_ptr<BbobProblem> make_bbob(const BenchmarkSpec &spec) {
  spec.validate();
  return std::make_unique<BbobProblem>(spec);
}

std::vector<double> evaluate_batch(const BbobFunction &f, std::span<const std::vector<double>> points) {
  std::vector<double> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = f(points[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<double> evaluate_batch_serial(const BbobFunction &f, std::span<const std::vector<double>> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto &x : points) out.push_back(f(x));
  return out;
}

}  // namespace bbohub::benchmarks
