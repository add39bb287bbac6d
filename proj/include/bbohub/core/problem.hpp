#pragma once

#include <span>
#include <string>
#include <vector>

#include "bbohub/core/search_space.hpp"

namespace bbohub {

/// Objective with a declared search space and one direction per value.
/// evaluate() is non-const so plugin-backed problems can do I/O.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string identity() const = 0;
  virtual const SearchSpace &search_space() const = 0;
  virtual std::span<const Direction> directions() const = 0;
  virtual std::vector<double> evaluate(const Params &params) = 0;

  /// True when evaluate may be called from several threads at once.
  virtual bool reentrant() const { return false; }
};

}  // namespace bbohub
