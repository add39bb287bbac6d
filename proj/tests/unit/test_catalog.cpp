#include <doctest.h>

#include <set>

#include "../support/catalog_fixture.hpp"
#include "../support/oracles.hpp"
#include "../support/support.hpp"
#include "bbohub/catalog/catalog.hpp"
#include "bbohub/catalog/markdown.hpp"
#include "bbohub/core/error.hpp"

using namespace bbohub;
using namespace bbohub::catalog;
using bbohub::testing::TempDir;
namespace fs = std::filesystem;

namespace {

registry::PackageManifest manifest_named(const std::string &name, std::vector<std::string> tags = {}) {
  registry::PackageManifest m;
  m.name = name;
  m.category = registry::Category::samplers;
  m.version = "1.0.0";
  m.summary = "Summary of " + name + ".";
  m.authors = {"Someone"};
  m.license = "MIT";
  m.tags = std::move(tags);
  m.entry = registry::BuiltinEntry{"random"};
  m.defaults = json::object();
  return m;
}

testing::OracleDoc oracle_doc(const PageDoc &d) { return {d.ref.str(), d.title, d.summary, d.tags, d.body_text}; }

void check_against_oracle(const std::vector<PageDoc> &docs, const SearchIndex &index, const std::string &query,
                          const std::vector<std::string> &tags) {
  std::vector<testing::OracleDoc> odocs;
  for (const auto &d : docs) odocs.push_back(oracle_doc(d));
  const auto expected = testing::oracle_search(odocs, query, tags);
  const auto got = search(index, query, tags);
  CAPTURE(query);
  REQUIRE(got.size() == expected.size());
  std::map<std::string, double> want;
  for (const auto &h : expected) want[h.ref] = h.score;
  for (std::size_t i = 0; i < got.size(); ++i) {
    REQUIRE(want.count(got[i].ref));
    CHECK(got[i].score == doctest::Approx(want[got[i].ref]).epsilon(1e-12));
    if (i > 0) {
      const bool ordered = got[i - 1].score > got[i].score ||
                           (got[i - 1].score == got[i].score && got[i - 1].ref < got[i].ref);
      CHECK(ordered);
    }
  }
}

}  // namespace

TEST_CASE("readme rendering") {
  const auto r = render_readme(
      "Intro line.\n\n# The *Title*\n\nSome `code` and a [link](javascript:alert(1)).\n\n"
      "![plot](front.svg)\n\n```python\nstudy.optimize(f)\n```\n\n```\nsecond\n```\n"
      "<script>steal()</script>\n<b>bold?</b>\n");
  REQUIRE(r.title);
  CHECK(*r.title == "The Title");
  CHECK(r.first_image == std::optional<std::string>("front.svg"));
  CHECK(r.first_code_block == std::optional<std::string>("study.optimize(f)\n"));
  CHECK(r.html.find("<script") == std::string::npos);
  CHECK(r.html.find("steal") == std::string::npos);
  CHECK(r.text.find("steal") == std::string::npos);
  CHECK(r.html.find("javascript:") == std::string::npos);
  CHECK(r.html.find("href=\"#\"") != std::string::npos);
  CHECK(r.html.find("&lt;b&gt;") != std::string::npos);
  CHECK(r.html.find("<code>code</code>") != std::string::npos);

  CHECK(safe_url(" JavaScript:x") == "#");
  CHECK(safe_url("data:text/html,x") == "#");
  CHECK(safe_url("java\tscript:x") == "#");
  CHECK(safe_url("https://example.org/a?b=c") == "https://example.org/a?b=c");
  CHECK(html_escape("<a href=\"x\">&'") == "&lt;a href=&quot;x&quot;&gt;&amp;&#39;");

  CHECK(render_readme("Setext\n======\n\nbody").title == std::optional<std::string>("Setext"));
  CHECK_FALSE(render_readme("## Only level two\n").title.has_value());
  // Script text inside a fence is code, not markup.
  const auto fenced = render_readme("```\n<script>x</script>\n```\n");
  CHECK(fenced.html.find("&lt;script&gt;") != std::string::npos);
  CHECK(render_readme("<iframe src=x>inner</iframe>after").text.find("inner") == std::string::npos);
}

TEST_CASE("package pages") {
  auto doc = build_page("# Fancy Name\n\nHello.\n", manifest_named("plain", {"B", "a", "b"}));
  CHECK(doc.title == "Fancy Name");
  CHECK(doc.ref.str() == "samplers/plain");
  CHECK(doc.tags == std::vector<std::string>{"a", "b"});
  CHECK_FALSE(doc.thumbnail.has_value());
  CHECK(build_page("No heading here.\n", manifest_named("fallback")).title == "fallback");
  auto code = [](auto &&f) {
    try {
      f();
    } catch (const Error &e) {
      return e.code();
    }
    return Errc::io;
  };
  CHECK(code([] { build_page(" \n\t\n", manifest_named("x")); }) == Errc::validation);
  CHECK(page_from_json(to_json(doc)) == doc);
}

TEST_CASE("tokenizer and weights") {
  CHECK(tokenize("Nelder-Mead, v2.0 (fast)!") == std::vector<std::string>{"nelder", "mead", "v2", "0", "fast"});
  CHECK(tokenize("naïve") == std::vector<std::string>{"na", "ve"});
  CHECK(tokenize("  ").empty());

  PageDoc d;
  d.ref = registry::parse_ref("samplers/w");
  d.title = "alpha";
  d.summary = "alpha beta";
  d.tags = {"beta"};
  d.body_text = "alpha gamma";
  const auto index = build_index({d});
  CHECK(index.terms.at("alpha") == std::vector<Posting>{{0, 3 + 2 + 1}});
  CHECK(index.terms.at("beta") == std::vector<Posting>{{0, 2 + 2}});
  CHECK(index.terms.at("gamma") == std::vector<Posting>{{0, 1}});
  CHECK(index.doc_lengths == std::vector<std::uint32_t>{11});
  CHECK(index_from_json(to_json(index)) == index);
}

TEST_CASE("title outranks body") {
  PageDoc a, b;
  a.ref = registry::parse_ref("samplers/a");
  a.title = "kernel";
  a.body_text = "other words";
  b.ref = registry::parse_ref("samplers/b");
  b.title = "other";
  b.body_text = "kernel words";
  const auto hits = search(build_index({b, a}), "kernel");
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].ref == "samplers/a");
  CHECK(search(build_index({a, b}), "zzzz").empty());
  CHECK(search(build_index({}), "kernel").empty());
  CHECK(search(build_index({}), "").empty());
}

TEST_CASE("search equals the linear scan oracle") {
  TempDir reg;
  testing::write_catalog_fixture(reg.path(), 20, 99);
  const auto build = build_catalog(reg.path());
  REQUIRE(build.rejected.empty());
  REQUIRE(build.docs.size() == 20);
  const auto index = build_index(build.docs);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) check_against_oracle(build.docs, index, testing::random_query(rng), testing::random_tags(rng));
  check_against_oracle(build.docs, index, "", {});
  check_against_oracle(build.docs, index, "", {"unknown-tag"});
  CHECK(search(index, "", {"unknown-tag"}).empty());
}

TEST_CASE("site emission") {
  TempDir reg, out1, out2;
  const auto refs = testing::write_catalog_fixture(reg.path(), 5, 7);
  auto build = build_catalog(reg.path());
  REQUIRE(build.docs.size() == 5);
  const auto index = build_index(build.docs);
  const auto written = emit_site(build.docs, index, out1.path());
  CHECK(written.size() == 7);
  for (const auto &ref : refs) CHECK(fs::exists(out1.path() / "packages" / (ref + ".json")));

  // Input order does not matter; output is byte-identical.
  std::reverse(build.docs.begin(), build.docs.end());
  emit_site(build.docs, build_index(build.docs), out2.path());
  for (const auto &p : written) {
    const auto rel = fs::relative(p, out1.path());
    CHECK(testing::read_file(out1.path() / rel) == testing::read_file(out2.path() / rel));
  }
  CHECK(load_index(out1.path()) == index);
  const auto catalog = json::parse(testing::read_file(out1.path() / "catalog.json"));
  CHECK(catalog.at("packages").size() == 5);

  // Editing one README refreshes that page.
  const auto dir = reg.path() / "package" / refs[0];
  testing::write_file(dir / "README.md", "# Renamed Package\n\nquokka habitat\n");
  const auto rebuilt = build_catalog(reg.path());
  emit_site(rebuilt.docs, build_index(rebuilt.docs), out1.path());
  const auto page = json::parse(testing::read_file(out1.path() / "packages" / (refs[0] + ".json")));
  CHECK(page.at("title") == "Renamed Package");
  const auto hits = search(load_index(out1.path()), "quokka");
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].ref == refs[0]);

  // Invalid packages are reported and skipped.
  fs::remove(dir / "README.md");
  const auto partial = build_catalog(reg.path());
  CHECK(partial.docs.size() == 4);
  REQUIRE(partial.rejected.size() == 1);

  TempDir empty_reg, empty_out;
  fs::create_directories(empty_reg.path() / "package");
  const auto none = build_catalog(empty_reg.path());
  CHECK(none.docs.empty());
  CHECK(emit_site({}, build_index({}), empty_out.path()).size() == 2);
  CHECK(load_index(empty_out.path()).docs.empty());
}

TEST_CASE("shipped registry builds cleanly") {
  const auto build = build_catalog(testing::shipped_registry());
  CHECK(build.rejected.empty());
  CHECK(build.docs.size() == 9);
  const auto index = build_index(build.docs);
  const auto hits = search(index, "nelder mead");
  REQUIRE_FALSE(hits.empty());
  CHECK(hits[0].ref == "samplers/nelder_mead");
  for (const auto &d : build.docs) {
    if (d.ref.str() == "samplers/nsga2") CHECK(d.thumbnail == std::optional<std::string>("front.svg"));
  }
}

TEST_CASE("malformed index files") {
  auto code = [](const json &j) {
    try {
      index_from_json(j);
    } catch (const Error &e) {
      return e.code();
    }
    return Errc::io;
  };
  CHECK(code(json::array()) == Errc::parse);
  CHECK(code(json{{"docs", {"a"}}, {"terms", {{"x", {{5, 1}}}}}, {"doc_lengths", {1}}, {"tag_map", json::object()}}) ==
        Errc::parse);
}
