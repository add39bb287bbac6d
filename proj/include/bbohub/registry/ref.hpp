#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bbohub::registry {

enum class Category : std::uint8_t { samplers, benchmarks, pruners, visualization };

std::string to_string(Category c);
std::optional<Category> category_from_string(std::string_view text);

/// "category/package_name" with name in [a-z0-9_]+.
struct PackageRef {
  Category category = Category::samplers;
  std::string name;

  std::string str() const;
  auto operator<=>(const PackageRef &) const = default;
};

/// Throws Errc::parse; the message carries the 0-based offending position.
PackageRef parse_ref(std::string_view text);
std::string format_ref(const PackageRef &ref);

bool valid_package_name(std::string_view name);

}  // namespace bbohub::registry
