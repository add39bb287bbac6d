#include "bbohub/core/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "bbohub/core/error.hpp"

namespace bbohub {

Distribution Distribution::floating(double low, double high, bool log_scale) {
  Distribution d;
  d.kind = DistributionKind::float_;
  d.low = low;
  d.high = high;
  d.log_scale = log_scale;
  return d;
}

Distribution Distribution::integer(std::int64_t low, std::int64_t high) {
  Distribution d;
  d.kind = DistributionKind::int_;
  d.low = static_cast<double>(low);
  d.high = static_cast<double>(high);
  return d;
}

Distribution Distribution::categorical(std::vector<std::string> choices) {
  Distribution d;
  d.kind = DistributionKind::categorical;
  d.choices = std::move(choices);
  return d;
}

void Distribution::validate(const std::string &name) const {
  auto fail = [&](const std::string &why) {
    throw Error(Errc::validation, "parameter '" + name + "': " + why);
  };
  switch (kind) {
    case DistributionKind::float_:
    case DistributionKind::int_: {
      if (!std::isfinite(low) || !std::isfinite(high)) fail("bounds must be finite");
      if (low > high) fail("low must be <= high");
      if (kind == DistributionKind::int_) {
        if (log_scale) fail("log_scale applies to float parameters only");
        if (std::trunc(low) != low || std::trunc(high) != high) fail("int bounds must be integral");
      }
      if (log_scale && !(low > 0.0)) fail("log_scale requires low > 0");
      if (!choices.empty()) fail("numeric parameter cannot carry choices");
      break;
    }
    case DistributionKind::categorical: {
      if (choices.empty()) fail("categorical needs at least one choice");
      std::set<std::string> seen(choices.begin(), choices.end());
      if (seen.size() != choices.size()) fail("categorical choices must be distinct");
      if (log_scale) fail("log_scale applies to float parameters only");
      break;
    }
  }
}

std::string to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::float_: return "float";
    case DistributionKind::int_: return "int";
    case DistributionKind::categorical: return "categorical";
  }
  return "?";
}

SearchSpace::SearchSpace(std::initializer_list<Entry> entries) {
  for (const auto &e : entries) add(e.first, e.second);
}

SearchSpace &SearchSpace::add(std::string name, Distribution dist) {
  params_.emplace_back(std::move(name), std::move(dist));
  return *this;
}

const Distribution *SearchSpace::find(const std::string &name) const {
  for (const auto &[n, d] : params_) {
    if (n == name) return &d;
  }
  return nullptr;
}

void SearchSpace::validate() const {
  std::set<std::string> names;
  for (const auto &[name, dist] : params_) {
    if (name.empty()) throw Error(Errc::validation, "parameter names must be non-empty");
    if (!names.insert(name).second) {
      throw Error(Errc::validation, "duplicate parameter '" + name + "'");
    }
    dist.validate(name);
  }
}

bool value_in(const Distribution &dist, const ParamValue &value) {
  switch (dist.kind) {
    case DistributionKind::float_: {
      const auto *v = std::get_if<double>(&value);
      return v != nullptr && std::isfinite(*v) && *v >= dist.low && *v <= dist.high;
    }
    case DistributionKind::int_: {
      const auto *v = std::get_if<std::int64_t>(&value);
      return v != nullptr && static_cast<double>(*v) >= dist.low &&
             static_cast<double>(*v) <= dist.high;
    }
    case DistributionKind::categorical: {
      const auto *v = std::get_if<std::string>(&value);
      return v != nullptr && std::find(dist.choices.begin(), dist.choices.end(), *v) != dist.choices.end();
    }
  }
  return false;
}

void SearchSpace::check(const Params &params) const {
  for (const auto &[name, dist] : params_) {
    auto it = params.find(name);
    if (it == params.end()) throw Error(Errc::validation, "missing parameter '" + name + "'");
    if (!value_in(dist, it->second)) {
      throw Error(Errc::validation, "parameter '" + name + "' outside its " + to_string(dist.kind) + " domain");
    }
  }
  if (params.size() != params_.size()) {
    for (const auto &[name, value] : params) {
      if (find(name) == nullptr) throw Error(Errc::validation, "unknown parameter '" + name + "'");
    }
  }
}

bool SearchSpace::contains(const Params &params) const {
  try {
    check(params);
    return true;
  } catch (const Error &) {
    return false;
  }
}

bool SearchSpace::has_categorical() const {
  return std::any_of(params_.begin(), params_.end(),
                     [](const Entry &e) { return e.second.kind == DistributionKind::categorical; });
}

bool SearchSpace::all_float() const {
  return std::all_of(params_.begin(), params_.end(),
                     [](const Entry &e) { return e.second.kind == DistributionKind::float_; });
}

std::string to_string(Direction d) { return d == Direction::minimize ? "minimize" : "maximize"; }

Direction direction_from_string(const std::string &text) {
  if (text == "minimize") return Direction::minimize;
  if (text == "maximize") return Direction::maximize;
  throw Error(Errc::validation, "unknown direction '" + text + "'");
}

}  // namespace bbohub
