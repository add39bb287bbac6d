#include "bbohub/registry/ref.hpp"

#include "bbohub/core/error.hpp"

namespace bbohub::registry {

namespace {

[[noreturn]] void fail(std::string_view text, std::size_t pos, const std::string &why) {
  throw Error(Errc::parse, "invalid package ref '" + std::string(text) + "' at position " + std::to_string(pos) +
                               ": " + why);
}

bool name_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; }

}  // namespace

std::string to_string(Category c) {
  switch (c) {
    case Category::samplers: return "samplers";
    case Category::benchmarks: return "benchmarks";
    case Category::pruners: return "pruners";
    case Category::visualization: return "visualization";
  }
  return "?";
}

std::optional<Category> category_from_string(std::string_view text) {
  if (text == "samplers") return Category::samplers;
  if (text == "benchmarks") return Category::benchmarks;
  if (text == "pruners") return Category::pruners;
  if (text == "visualization") return Category::visualization;
  return std::nullopt;
}

std::string PackageRef::str() const { return to_string(category) + "/" + name; }

bool valid_package_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (!name_char(c)) return false;
  }
  return true;
}

PackageRef parse_ref(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) fail(text, text.size(), "expected 'category/package_name'");
  if (const auto second = text.find('/', slash + 1); second != std::string_view::npos) {
    fail(text, second, "more than one '/'");
  }
  const auto category = category_from_string(text.substr(0, slash));
  if (!category) fail(text, 0, "unknown category '" + std::string(text.substr(0, slash)) + "'");
  const auto name = text.substr(slash + 1);
  if (name.empty()) fail(text, slash + 1, "empty package name");
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (!name_char(name[i])) fail(text, slash + 1 + i, "package names use [a-z0-9_]");
  }
  return PackageRef{*category, std::string(name)};
}

std::string format_ref(const PackageRef &ref) { return ref.str(); }

}  // namespace bbohub::registry
