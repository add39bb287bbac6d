#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bbohub {

enum class DistributionKind : std::uint8_t { float_, int_, categorical };

/// Declared domain of one parameter. Bounds are inclusive.
struct Distribution {
  DistributionKind kind = DistributionKind::float_;
  double low = 0.0;
  double high = 0.0;
  bool log_scale = false;
  std::vector<std::string> choices;

  static Distribution floating(double low, double high, bool log_scale = false);
  static Distribution integer(std::int64_t low, std::int64_t high);
  static Distribution categorical(std::vector<std::string> choices);

  /// Throws Errc::validation naming `name` when an invariant is broken.
  void validate(const std::string &name) const;

  bool operator==(const Distribution &) const = default;
};

/// A suggested value: double for float params, int64 for int params and the
/// choice string for categorical ones.
using ParamValue = std::variant<double, std::int64_t, std::string>;
using Params = std::map<std::string, ParamValue>;

std::string to_string(DistributionKind kind);

/// Ordered name -> distribution map. Order is part of the identity.
class SearchSpace {
 public:
  using Entry = std::pair<std::string, Distribution>;

  SearchSpace() = default;
  SearchSpace(std::initializer_list<Entry> entries);

  SearchSpace &add(std::string name, Distribution dist);

  const std::vector<Entry> &params() const noexcept { return params_; }
  std::size_t size() const noexcept { return params_.size(); }
  bool empty() const noexcept { return params_.empty(); }
  const Distribution *find(const std::string &name) const;

  void validate() const;
  bool contains(const Params &params) const;
  /// Throws Errc::validation describing the first non-conforming param.
  void check(const Params &params) const;

  bool has_categorical() const;
  bool all_float() const;

  bool operator==(const SearchSpace &) const = default;

 private:
  std::vector<Entry> params_;
};

bool value_in(const Distribution &dist, const ParamValue &value);

enum class Direction : std::uint8_t { minimize, maximize };

std::string to_string(Direction d);
Direction direction_from_string(const std::string &text);

/// Maps an objective to "smaller is better" form.
inline double oriented(double value, Direction d) noexcept {
  return d == Direction::minimize ? value : -value;
}

}  // namespace bbohub
