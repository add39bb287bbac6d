#include "bbohub/core/trial.hpp"

#include "bbohub/core/error.hpp"

namespace bbohub {

std::string to_string(TrialState s) {
  switch (s) {
    case TrialState::running: return "running";
    case TrialState::complete: return "complete";
    case TrialState::failed: return "failed";
  }
  return "?";
}

TrialState trial_state_from_string(const std::string &text) {
  if (text == "running") return TrialState::running;
  if (text == "complete") return TrialState::complete;
  if (text == "failed") return TrialState::failed;
  throw Error(Errc::validation, "unknown trial state '" + text + "'");
}

bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Direction> directions) {
  if (a.size() != directions.size() || b.size() != directions.size()) {
    throw Error(Errc::arity, "objective vector length does not match directions");
  }
  bool strictly = false;
  for (std::size_t k = 0; k < directions.size(); ++k) {
    const double x = oriented(a[k], directions[k]);
    const double y = oriented(b[k], directions[k]);
    if (x > y) return false;
    if (x < y) strictly = true;
  }
  return strictly;
}

}  // namespace bbohub
