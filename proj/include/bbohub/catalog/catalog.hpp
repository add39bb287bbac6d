#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bbohub/core/serialize.hpp"
#include "bbohub/registry/manifest.hpp"
#include "bbohub/registry/registry.hpp"

namespace bbohub::catalog {

struct PageDoc {
  registry::PackageRef ref;
  std::string title;
  std::string version;
  std::string summary;
  std::vector<std::string> authors;
  std::string license;
  std::vector<std::string> tags;
  std::vector<std::string> dependencies;
  std::string body_text;
  std::string body_html;
  std::optional<std::string> thumbnail;
  std::optional<std::string> example_snippet;

  bool operator==(const PageDoc &) const = default;
};

/// Errc::validation for a README that is empty or whitespace.
PageDoc build_page(std::string_view readme_text, const registry::PackageManifest &manifest);

/// Lowercase ASCII alphanumeric runs; every other byte separates.
std::vector<std::string> tokenize(std::string_view text);

/// Term-frequency multipliers per field.
struct FieldWeights {
  static constexpr std::uint32_t title = 3;
  static constexpr std::uint32_t summary = 2;
  static constexpr std::uint32_t tags = 2;
  static constexpr std::uint32_t body = 1;
};

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t tf = 0;
  bool operator==(const Posting &) const = default;
};

struct SearchIndex {
  std::vector<std::string> docs;                           // refs, ascending
  std::map<std::string, std::vector<Posting>> terms;       // postings ordered by doc
  std::vector<std::uint32_t> doc_lengths;                  // sum of weighted tf per doc
  std::map<std::string, std::vector<std::uint32_t>> tag_map;

  bool operator==(const SearchIndex &) const = default;
};

/// Documents are indexed in ref order regardless of input order.
SearchIndex build_index(std::vector<PageDoc> docs);

struct SearchHit {
  std::string ref;
  double score = 0.0;
};

/// Conjunctive over query tokens and tags; TF-IDF cosine with
/// idf = 1 + ln(N / df), descending, ties by ref. An empty query returns the
/// tag matches (all docs when no tags) ordered by ref with score 0.
std::vector<SearchHit> search(const SearchIndex &index, std::string_view query,
                              const std::vector<std::string> &tags = {});

json to_json(const PageDoc &doc);
PageDoc page_from_json(const json &j);
json to_json(const SearchIndex &index);
SearchIndex index_from_json(const json &j);

/// Writes catalog.json, search_index.json and packages/<category>/<name>.json
/// under out_dir; returns the written paths. Errc::io naming the path on
/// failure.
std::vector<std::filesystem::path> emit_site(std::vector<PageDoc> docs, const SearchIndex &index,
                                             const std::filesystem::path &out_dir);

/// Reads <out_dir>/search_index.json.
SearchIndex load_index(const std::filesystem::path &site_dir);

struct CatalogBuild {
  std::vector<PageDoc> docs;
  /// Packages that failed validation, by directory, with their reports.
  std::vector<std::pair<std::string, registry::ValidationReport>> rejected;
};

/// Validates and builds a page for every <root>/package/<category>/<name>.
CatalogBuild build_catalog(const std::filesystem::path &registry_root);

}  // namespace bbohub::catalog
