#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bbohub/core/search_space.hpp"

namespace bbohub::samplers {

using Front = std::vector<std::size_t>;

/// Fronts of mutually non-dominated points. Front 0 is the non-dominated set
/// of all points; front k the non-dominated set once fronts < k are removed.
/// Indices ascend within each front. Throws Errc::arity on ragged input.
///
/// Domination counts are computed row-parallel with OpenMP; the peel that
/// follows is serial.
std::vector<Front> non_dominated_sort(std::span<const std::vector<double>> points,
                                      std::span<const Direction> directions);

/// Reference: repeated full scans for the remaining non-dominated set.
/// Single-threaded, O(n^2 m) per front. Kept for tests and benchmarks.
std::vector<Front> non_dominated_sort_serial(std::span<const std::vector<double>> points,
                                             std::span<const Direction> directions);

/// NSGA-II crowding distance for the points of one front. Boundary points of
/// every objective get +inf; an objective with zero range contributes 0.
std::vector<double> crowding_distance(std::span<const std::vector<double>> front_values);

}  // namespace bbohub::samplers
