#pragma once

// Maps numeric params onto an unconstrained-looking box the geometric
// samplers can move in: log-scale floats live in log space, ints in
// [low - 0.5, high + 0.5] and round back to the nearest integer.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "bbohub/core/search_space.hpp"

namespace bbohub::samplers::detail {

struct Interval {
  double low;
  double high;
};

inline Interval internal_bounds(const Distribution &d) {
  switch (d.kind) {
    case DistributionKind::float_:
      return d.log_scale ? Interval{std::log(d.low), std::log(d.high)} : Interval{d.low, d.high};
    case DistributionKind::int_:
      return {d.low - 0.5, d.high + 0.5};
    case DistributionKind::categorical:
      break;
  }
  return {0.0, 0.0};
}

inline double to_internal(const Distribution &d, const ParamValue &v) {
  if (d.kind == DistributionKind::int_) return static_cast<double>(std::get<std::int64_t>(v));
  const double x = std::get<double>(v);
  return d.log_scale ? std::log(x) : x;
}

inline ParamValue from_internal(const Distribution &d, double x) {
  if (d.kind == DistributionKind::int_) {
    const double r = std::clamp(std::round(x), d.low, d.high);
    return static_cast<std::int64_t>(r);
  }
  const double v = d.log_scale ? std::exp(x) : x;
  return std::clamp(v, d.low, d.high);
}

}  // namespace bbohub::samplers::detail
