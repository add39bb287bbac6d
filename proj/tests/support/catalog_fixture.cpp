#include "catalog_fixture.hpp"

#include <json.hpp>

#include "support.hpp"

namespace bbohub::testing {

namespace {

const char *const kCategories[] = {"samplers", "benchmarks", "pruners", "visualization"};

std::string pick(Rng &rng, const std::vector<std::string> &v) { return v[rng.index(v.size())]; }

std::string sentence(Rng &rng, int words) {
  std::string s;
  for (int i = 0; i < words; ++i) {
    if (i) s += ' ';
    s += pick(rng, fixture_words());
  }
  return s;
}

}  // namespace

const std::vector<std::string> &fixture_words() {
  static const std::vector<std::string> words{
      "bayesian", "evolutionary", "simplex", "gradient", "surrogate", "kernel", "pareto", "front",
      "sphere", "rosenbrock", "rastrigin", "noise", "budget", "population", "mutation", "crossover",
      "density", "parzen", "prior", "robust", "fast", "sparse", "tree", "grid", "median", "plot",
      "trial", "sampler", "bound", "scale", "v2", "3d"};
  return words;
}

const std::vector<std::string> &fixture_tags() {
  static const std::vector<std::string> tags{"single-objective", "multi-objective", "continuous", "categorical",
                                             "bayesian", "evolutionary", "noisy", "toy", "plotting"};
  return tags;
}

std::vector<std::string> write_catalog_fixture(const std::filesystem::path &root, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> refs;
  for (int i = 0; i < n; ++i) {
    const std::string category = kCategories[rng.index(4)];
    const std::string name = pick(rng, fixture_words()) + "_" + std::to_string(i);
    nlohmann::json tags = nlohmann::json::array();
    const auto ntags = rng.integer(0, 3);
    for (std::int64_t t = 0; t < ntags; ++t) tags.push_back(pick(rng, fixture_tags()));
    if (rng.bernoulli(0.2) && !tags.empty()) tags.push_back("Toy");
    nlohmann::json manifest{{"name", name},
                            {"category", category},
                            {"version", "1." + std::to_string(i) + ".0"},
                            {"summary", sentence(rng, 5)},
                            {"authors", {"Fixture Author"}},
                            {"license", "MIT"},
                            {"tags", tags},
                            {"entry", {{"kind", "plugin"}, {"command", {"python3", "main.py"}}, {"protocol", 1}}},
                            {"defaults", nlohmann::json::object()},
                            {"dependencies", nlohmann::json::array()}};
    std::string readme;
    if (rng.bernoulli(0.8)) readme += "# " + sentence(rng, 2) + "\n\n";
    const auto paragraphs = rng.integer(1, 4);
    for (std::int64_t p = 0; p < paragraphs; ++p) {
      readme += sentence(rng, static_cast<int>(rng.integer(3, 25)));
      if (rng.bernoulli(0.3)) readme += " **" + pick(rng, fixture_words()) + "**";
      if (rng.bernoulli(0.2)) readme += " [" + pick(rng, fixture_words()) + "](https://example.org/x)";
      readme += ".\n\n";
      if (rng.bernoulli(0.25)) readme += "```python\nrun(" + pick(rng, fixture_words()) + ")\n```\n\n";
      if (rng.bernoulli(0.15)) readme += "![" + pick(rng, fixture_words()) + "](img.png)\n\n";
      if (rng.bernoulli(0.2)) readme += "- " + sentence(rng, 2) + "\n- " + sentence(rng, 2) + "\n\n";
    }
    const auto dir = root / "package" / category / name;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    write_file(dir / "README.md", readme);
    write_file(dir / "main.py", "print('fixture')\n");
    refs.push_back(category + "/" + name);
  }
  return refs;
}

std::string random_query(Rng &rng) {
  std::string q;
  const auto n = rng.integer(0, 3);
  for (std::int64_t i = 0; i < n; ++i) {
    if (i) q += rng.bernoulli(0.5) ? " " : ", ";
    std::string w = rng.bernoulli(0.1) ? "zzzunused" : pick(rng, fixture_words());
    if (rng.bernoulli(0.2)) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    q += w;
  }
  return q;
}

std::vector<std::string> random_tags(Rng &rng) {
  std::vector<std::string> tags;
  if (rng.bernoulli(0.6)) return tags;
  tags.push_back(pick(rng, fixture_tags()));
  if (rng.bernoulli(0.2)) tags.push_back(rng.bernoulli(0.5) ? "unknown-tag" : pick(rng, fixture_tags()));
  return tags;
}

}  // namespace bbohub::testing
