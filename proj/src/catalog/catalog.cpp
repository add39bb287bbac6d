#include "bbohub/catalog/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bbohub/catalog/markdown.hpp"
#include "bbohub/core/error.hpp"

namespace bbohub::catalog {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path &p, const std::string &content) {
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  if (ec) throw Error(Errc::io, "cannot create " + p.parent_path().string() + ": " + ec.message());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw Error(Errc::io, "cannot write " + p.string());
}

std::string pretty(const json &j) { return j.dump(2) + "\n"; }

json optional_string(const std::optional<std::string> &s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> optional_from(const json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

PageDoc build_page(std::string_view readme_text, const registry::PackageManifest &manifest) {
  if (std::all_of(readme_text.begin(), readme_text.end(), [](unsigned char c) { return std::isspace(c); })) {
    throw Error(Errc::validation, manifest.ref().str() + ": README.md is empty");
  }
  const auto rendered = render_readme(readme_text);
  PageDoc doc;
  doc.ref = manifest.ref();
  doc.title = rendered.title.value_or(manifest.name);
  doc.version = manifest.version;
  doc.summary = manifest.summary;
  doc.authors = manifest.authors;
  doc.license = manifest.license;
  doc.tags = manifest.tags;
  for (auto &t : doc.tags) {
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  }
  std::sort(doc.tags.begin(), doc.tags.end());
  doc.tags.erase(std::unique(doc.tags.begin(), doc.tags.end()), doc.tags.end());
  doc.dependencies = manifest.dependencies;
  doc.body_text = rendered.text;
  doc.body_html = rendered.html;
  doc.thumbnail = rendered.first_image;
  doc.example_snippet = rendered.first_code_block;
  return doc;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalnum(u)) {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

SearchIndex build_index(std::vector<PageDoc> docs) {
  std::sort(docs.begin(), docs.end(), [](const PageDoc &a, const PageDoc &b) { return a.ref < b.ref; });
  SearchIndex index;
  for (std::uint32_t ord = 0; ord < docs.size(); ++ord) {
    const auto &d = docs[ord];
    index.docs.push_back(d.ref.str());
    std::map<std::string, std::uint32_t> tf;
    auto add = [&](std::string_view text, std::uint32_t weight) {
      for (auto &tok : tokenize(text)) tf[tok] += weight;
    };
    add(d.title, FieldWeights::title);
    add(d.summary, FieldWeights::summary);
    for (const auto &t : d.tags) add(t, FieldWeights::tags);
    add(d.body_text, FieldWeights::body);

    std::uint32_t length = 0;
    for (const auto &[term, n] : tf) {
      index.terms[term].push_back({ord, n});
      length += n;
    }
    index.doc_lengths.push_back(length);
    for (const auto &t : d.tags) {
      auto &list = index.tag_map[t];
      if (list.empty() || list.back() != ord) list.push_back(ord);
    }
  }
  return index;
}

std::vector<SearchHit> search(const SearchIndex &index, std::string_view query, const std::vector<std::string> &tags) {
  const std::size_t n = index.docs.size();
  std::vector<char> allowed(n, 1);
  for (const auto &raw_tag : tags) {
    std::string tag = raw_tag;
    std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::vector<char> has(n, 0);
    if (auto it = index.tag_map.find(tag); it != index.tag_map.end()) {
      for (auto ord : it->second) {
        if (ord < n) has[ord] = 1;
      }
    }
    for (std::size_t i = 0; i < n; ++i) allowed[i] = allowed[i] && has[i];
  }

  std::map<std::string, std::uint32_t> query_tf;
  for (auto &tok : tokenize(query)) ++query_tf[tok];

  std::vector<SearchHit> hits;
  if (query_tf.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (allowed[i]) hits.push_back({index.docs[i], 0.0});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit &a, const SearchHit &b) { return a.ref < b.ref; });
    return hits;
  }

  auto idf = [&](std::size_t df) { return 1.0 + std::log(static_cast<double>(n) / static_cast<double>(df)); };

  // Conjunctive filter first: every query term must have a posting.
  std::vector<std::uint32_t> matched(n, 0);
  for (const auto &[term, qtf] : query_tf) {
    auto it = index.terms.find(term);
    if (it == index.terms.end()) return {};
    for (const auto &p : it->second) {
      if (p.doc < n) ++matched[p.doc];
    }
  }

  std::vector<double> norm2(n, 0.0);
  std::vector<double> dot(n, 0.0);
  double qnorm2 = 0.0;
  for (const auto &[term, postings] : index.terms) {
    const double w = idf(postings.size());
    const auto q = query_tf.find(term);
    const double qw = q == query_tf.end() ? 0.0 : q->second * w;
    qnorm2 += qw * qw;
    for (const auto &p : postings) {
      if (p.doc >= n || matched[p.doc] != query_tf.size()) continue;
      const double dw = p.tf * w;
      norm2[p.doc] += dw * dw;
      dot[p.doc] += dw * qw;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!allowed[i] || matched[i] != query_tf.size()) continue;
    const double denom = std::sqrt(norm2[i]) * std::sqrt(qnorm2);
    hits.push_back({index.docs[i], denom > 0 ? dot[i] / denom : 0.0});
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit &a, const SearchHit &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ref < b.ref;
  });
  return hits;
}

json to_json(const PageDoc &d) {
  return json{{"ref", d.ref.str()},
              {"category", registry::to_string(d.ref.category)},
              {"name", d.ref.name},
              {"title", d.title},
              {"version", d.version},
              {"summary", d.summary},
              {"authors", d.authors},
              {"license", d.license},
              {"tags", d.tags},
              {"dependencies", d.dependencies},
              {"body_text", d.body_text},
              {"body_html", d.body_html},
              {"thumbnail", optional_string(d.thumbnail)},
              {"example_snippet", optional_string(d.example_snippet)}};
}

PageDoc page_from_json(const json &j) {
  try {
    PageDoc d;
    d.ref = registry::parse_ref(j.at("ref").get<std::string>());
    d.title = j.at("title").get<std::string>();
    d.version = j.at("version").get<std::string>();
    d.summary = j.at("summary").get<std::string>();
    d.authors = j.at("authors").get<std::vector<std::string>>();
    d.license = j.at("license").get<std::string>();
    d.tags = j.at("tags").get<std::vector<std::string>>();
    d.dependencies = j.at("dependencies").get<std::vector<std::string>>();
    d.body_text = j.at("body_text").get<std::string>();
    d.body_html = j.at("body_html").get<std::string>();
    d.thumbnail = optional_from(j, "thumbnail");
    d.example_snippet = optional_from(j, "example_snippet");
    return d;
  } catch (const json::exception &e) {
    throw Error(Errc::parse, std::string("malformed page document: ") + e.what());
  }
}

json to_json(const SearchIndex &index) {
  json terms = json::object();
  for (const auto &[term, postings] : index.terms) {
    json list = json::array();
    for (const auto &p : postings) list.push_back(json::array({p.doc, p.tf}));
    terms[term] = std::move(list);
  }
  return json{{"docs", index.docs},
              {"terms", std::move(terms)},
              {"doc_lengths", index.doc_lengths},
              {"tag_map", index.tag_map},
              {"weights",
               {{"title", FieldWeights::title},
                {"summary", FieldWeights::summary},
                {"tags", FieldWeights::tags},
                {"body", FieldWeights::body}}}};
}

SearchIndex index_from_json(const json &j) {
  try {
    SearchIndex index;
    index.docs = j.at("docs").get<std::vector<std::string>>();
    for (const auto &[term, list] : j.at("terms").items()) {
      auto &postings = index.terms[term];
      for (const auto &p : list) postings.push_back({p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()});
    }
    index.doc_lengths = j.at("doc_lengths").get<std::vector<std::uint32_t>>();
    index.tag_map = j.at("tag_map").get<std::map<std::string, std::vector<std::uint32_t>>>();
    const auto n = index.docs.size();
    auto check = [&](std::uint32_t ord) {
      if (ord >= n) throw Error(Errc::parse, "search index posting out of range: " + std::to_string(ord));
    };
    for (const auto &[term, postings] : index.terms) {
      for (const auto &p : postings) check(p.doc);
    }
    for (const auto &[tag, ords] : index.tag_map) {
      for (auto o : ords) check(o);
    }
    if (index.doc_lengths.size() != n) throw Error(Errc::parse, "search index doc_lengths size mismatch");
    return index;
  } catch (const json::exception &e) {
    throw Error(Errc::parse, std::string("malformed search index: ") + e.what());
  }
}

std::vector<fs::path> emit_site(std::vector<PageDoc> docs, const SearchIndex &index, const fs::path &out_dir) {
  std::sort(docs.begin(), docs.end(), [](const PageDoc &a, const PageDoc &b) { return a.ref < b.ref; });
  std::vector<fs::path> written;

  json packages = json::array();
  for (const auto &d : docs) packages.push_back(to_json(d));
  const fs::path catalog_path = out_dir / "catalog.json";
  write_file(catalog_path, pretty(json{{"packages", std::move(packages)}}));
  written.push_back(catalog_path);

  const fs::path index_path = out_dir / "search_index.json";
  write_file(index_path, pretty(to_json(index)));
  written.push_back(index_path);

  for (const auto &d : docs) {
    const fs::path page = out_dir / "packages" / registry::to_string(d.ref.category) / (d.ref.name + ".json");
    write_file(page, pretty(to_json(d)));
    written.push_back(page);
  }
  return written;
}

SearchIndex load_index(const fs::path &site_dir) {
  const auto path = fs::is_directory(site_dir) ? site_dir / "search_index.json" : site_dir;
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error(Errc::parse, path.string() + " is not valid JSON");
  return index_from_json(j);
}

CatalogBuild build_catalog(const fs::path &registry_root) {
  const fs::path base = registry_root / "package";
  std::error_code ec;
  if (!fs::is_directory(base, ec)) throw Error(Errc::not_found, "no package/ directory under " + registry_root.string());

  std::set<fs::path> dirs;
  for (const auto &cat : fs::directory_iterator(base)) {
    if (!cat.is_directory()) continue;
    for (const auto &pkg : fs::directory_iterator(cat.path())) {
      if (pkg.is_directory() && !pkg.path().filename().string().starts_with('.')) dirs.insert(pkg.path());
    }
  }

  CatalogBuild build;
  for (const auto &dir : dirs) {
    const auto rel = dir.parent_path().filename().string() + "/" + dir.filename().string();
    auto report = registry::validate_package(dir);
    if (!report.publishable()) {
      build.rejected.emplace_back(rel, std::move(report));
      continue;
    }
    const auto manifest = registry::parse_manifest_text(read_file(dir / "manifest.json"));
    build.docs.push_back(build_page(read_file(dir / "README.md"), manifest));
  }
  std::sort(build.docs.begin(), build.docs.end(), [](const PageDoc &a, const PageDoc &b) { return a.ref < b.ref; });
  return build;
}

}  // namespace bbohub::catalog
