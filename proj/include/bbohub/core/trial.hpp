#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bbohub/core/search_space.hpp"

namespace bbohub {

enum class TrialState : std::uint8_t { running, complete, failed };

std::string to_string(TrialState s);
TrialState trial_state_from_string(const std::string &text);

struct Trial {
  std::int64_t id = 0;
  Params params;
  TrialState state = TrialState::running;
  std::vector<double> values;

  bool finished() const noexcept { return state != TrialState::running; }
  bool operator==(const Trial &) const = default;
};

/// `a` dominates `b` when it is no worse in every objective and strictly
/// better in at least one, with each objective oriented by its direction.
bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Direction> directions);

}  // namespace bbohub
