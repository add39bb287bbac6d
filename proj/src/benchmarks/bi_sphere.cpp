#include "bbohub/benchmarks/bi_sphere.hpp"

#include "bbohub/benchmarks/bbob.hpp"
#include "bbohub/core/error.hpp"

namespace bbohub::benchmarks {

BiSphereProblem::BiSphereProblem(int dimension, double offset)
    : dimension_(dimension), offset_(offset) {
  if (dimension < 1) throw Error(Errc::validation, "bi_sphere dimension must be >= 1");
  if (!(offset > 0.0 && offset <= 4.0)) throw Error(Errc::validation, "bi_sphere offset must be in (0, 4]");
  space_ = box_space(dimension);
}

std::vector<double> BiSphereProblem::values_at(std::span<const double> x) const {
  double f1 = 0.0, f2 = 0.0;
  for (double v : x) {
    f1 += (v - offset_) * (v - offset_);
    f2 += (v + offset_) * (v + offset_);
  }
  return {f1, f2};
}

std::vector<double> BiSphereProblem::evaluate(const Params &params) {
  return values_at(params_to_point(space_, params));
}

std::unique_ptr<BiSphereProblem> make_bi_sphere(int dimension, double offset) {
  return std::make_unique<BiSphereProblem>(dimension, offset);
}

}  // namespace bbohub::benchmarks
