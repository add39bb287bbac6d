#include "bbohub/samplers/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "bbohub/core/error.hpp"
#include "bbohub/core/search_space.hpp"
#include "bbohub/core/trial.hpp"

namespace bbohub::samplers {

namespace {

void check_arity(std::span<const std::vector<double>> points, std::span<const Direction> directions) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != directions.size()) {
      throw Error(Errc::arity, "point " + std::to_string(i) + " has " + std::to_string(points[i].size()) +
                                   " objectives, expected " + std::to_string(directions.size()));
    }
  }
}

}  // namespace

std::vector<Front> non_dominated_sort(std::span<const std::vector<double>> points,
                                      std::span<const Direction> directions) {
  check_arity(points, directions);
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  const std::size_t m = directions.size();
  // Oriented copy in one block so the pair loop is a single pass over m.
  std::vector<double> flat(points.size() * m);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < m; ++k) flat[i * m + k] = oriented(points[i][k], directions[k]);
  }
  std::vector<std::size_t> dominated_by(points.size(), 0);
  std::vector<std::vector<std::size_t>> dominates_list(points.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double *pi = flat.data() + static_cast<std::size_t>(i) * m;
    auto &out = dominates_list[static_cast<std::size_t>(i)];
    std::size_t count = 0;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double *pj = flat.data() + static_cast<std::size_t>(j) * m;
      bool i_better = false, j_better = false;
      for (std::size_t k = 0; k < m; ++k) {
        i_better |= pi[k] < pj[k];
        j_better |= pj[k] < pi[k];
      }
      if (j_better && !i_better) ++count;
      else if (i_better && !j_better) out.push_back(static_cast<std::size_t>(j));
    }
    dominated_by[static_cast<std::size_t>(i)] = count;
  }

  std::vector<Front> fronts;
  Front current;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (dominated_by[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    Front next;
    for (std::size_t i : current) {
      for (std::size_t j : dominates_list[i]) {
        if (--dominated_by[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<Front> non_dominated_sort_serial(std::span<const std::vector<double>> points,
                                             std::span<const Direction> directions) {
  check_arity(points, directions);
  std::vector<std::size_t> remaining(points.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  std::vector<Front> fronts;
  while (!remaining.empty()) {
    Front front, rest;
    for (std::size_t i : remaining) {
      const bool dominated = std::any_of(remaining.begin(), remaining.end(), [&](std::size_t j) {
        return j != i && dominates(points[j], points[i], directions);
      });
      (dominated ? rest : front).push_back(i);
    }
    fronts.push_back(std::move(front));
    remaining = std::move(rest);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const std::vector<double>> front_values) {
  const std::size_t n = front_values.size();
  std::vector<double> distance(n, 0.0);
  if (n == 0) return distance;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), inf);
    return distance;
  }
  const std::size_t m = front_values.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < m; ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return front_values[a][k] < front_values[b][k]; });
    distance[order.front()] = inf;
    distance[order.back()] = inf;
    const double range = front_values[order.back()][k] - front_values[order.front()][k];
    if (!(range > 0.0)) continue;
    for (std::size_t r = 1; r + 1 < n; ++r) {
      distance[order[r]] += (front_values[order[r + 1]][k] - front_values[order[r - 1]][k]) / range;
    }
  }
  return distance;
}

}  // namespace bbohub::samplers
