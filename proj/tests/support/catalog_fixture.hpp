#pragma once
// Generated registries for catalog tests.

#include <filesystem>
#include <string>
#include <vector>

#include "bbohub/core/random.hpp"

namespace bbohub::testing {

/// Vocabulary shared by generated READMEs and random queries.
const std::vector<std::string> &fixture_words();
const std::vector<std::string> &fixture_tags();

/// Writes n valid packages under <root>/package, deterministic in seed.
/// Returns their refs.
std::vector<std::string> write_catalog_fixture(const std::filesystem::path &root, int n, std::uint64_t seed);

/// 0..3 words, sometimes with odd case or punctuation, sometimes a word no
/// package uses.
std::string random_query(Rng &rng);
std::vector<std::string> random_tags(Rng &rng);

}  // namespace bbohub::testing
