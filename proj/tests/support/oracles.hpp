#pragma once
// Brute-force references. Written from the definitions, independent of the
// library code they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "bbohub/core/search_space.hpp"
#include "bbohub/core/trial.hpp"

namespace bbohub::testing {

/// a dominates b: no worse everywhere, strictly better somewhere.
inline bool oracle_dominates(const std::vector<double> &a, const std::vector<double> &b,
                             const std::vector<Direction> &dirs) {
  bool strictly = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = dirs[k] == Direction::minimize ? a[k] : -a[k];
    const double y = dirs[k] == Direction::minimize ? b[k] : -b[k];
    if (x > y) return false;
    if (x < y) strictly = true;
  }
  return strictly;
}

/// Rank of a point = length of the longest chain of points dominating it.
/// Front k holds the points of rank k, indices ascending.
inline std::vector<std::vector<std::size_t>> oracle_fronts(const std::vector<std::vector<double>> &pts,
                                                          const std::vector<Direction> &dirs) {
  const std::size_t n = pts.size();
  std::vector<int> rank(n, -1);
  std::function<int(std::size_t)> rank_of = [&](std::size_t i) -> int {
    if (rank[i] >= 0) return rank[i];
    int r = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && oracle_dominates(pts[j], pts[i], dirs)) r = std::max(r, rank_of(j) + 1);
    }
    return rank[i] = r;
  };
  int max_rank = -1;
  for (std::size_t i = 0; i < n; ++i) max_rank = std::max(max_rank, rank_of(i));
  std::vector<std::vector<std::size_t>> fronts(static_cast<std::size_t>(max_rank + 1));
  for (std::size_t i = 0; i < n; ++i) fronts[static_cast<std::size_t>(rank[i])].push_back(i);
  return fronts;
}

/// Ids of complete trials dominated by no other complete trial.
inline std::vector<std::int64_t> oracle_pareto_ids(const std::vector<Trial> &trials,
                                                   const std::vector<Direction> &dirs) {
  std::vector<std::int64_t> ids;
  for (const auto &a : trials) {
    if (a.state != TrialState::complete) continue;
    bool dominated = false;
    for (const auto &b : trials) {
      if (b.state == TrialState::complete && oracle_dominates(b.values, a.values, dirs)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) ids.push_back(a.id);
  }
  return ids;
}

/// Area dominated by `points` (minimization) and bounded by `ref`.
inline double hypervolume_2d(std::vector<std::vector<double>> points, double ref_x, double ref_y) {
  points.erase(std::remove_if(points.begin(), points.end(),
                              [&](const auto &p) { return !(p[0] < ref_x && p[1] < ref_y); }),
               points.end());
  std::sort(points.begin(), points.end());
  double area = 0.0;
  double ceiling = ref_y;
  for (const auto &p : points) {
    if (p[1] >= ceiling) continue;
    area += (ref_x - p[0]) * (ceiling - p[1]);
    ceiling = p[1];
  }
  return area;
}

/// Lowercased ASCII alphanumeric words.
inline std::set<std::string> oracle_words(const std::string &text) {
  static const std::regex word("[A-Za-z0-9]+");
  std::set<std::string> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), word); it != std::sregex_iterator(); ++it) {
    std::string w = it->str();
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.insert(w);
  }
  return out;
}

/// Lowercased ASCII alphanumeric words with repeats.
inline std::vector<std::string> oracle_word_list(const std::string &text) {
  static const std::regex word("[A-Za-z0-9]+");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), word); it != std::sregex_iterator(); ++it) {
    std::string w = it->str();
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.push_back(w);
  }
  return out;
}

struct OracleDoc {
  std::string ref;
  std::string title;
  std::string summary;
  std::vector<std::string> tags;
  std::string body;
};

struct OracleHit {
  std::string ref;
  double score;
};

/// Linear scan: a doc matches when it has every query word and every tag.
/// Score is the cosine of tf*idf vectors with tf weighted 3/2/2/1 over
/// title/summary/tags/body and idf = 1 + ln(N/df). Empty query: matches by
/// ref, score 0.
inline std::vector<OracleHit> oracle_search(const std::vector<OracleDoc> &docs, const std::string &query,
                                            const std::vector<std::string> &tags) {
  std::vector<std::map<std::string, double>> tf(docs.size());
  std::map<std::string, double> df;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (const auto &w : oracle_word_list(docs[i].title)) tf[i][w] += 3;
    for (const auto &w : oracle_word_list(docs[i].summary)) tf[i][w] += 2;
    for (const auto &t : docs[i].tags) {
      for (const auto &w : oracle_word_list(t)) tf[i][w] += 2;
    }
    for (const auto &w : oracle_word_list(docs[i].body)) tf[i][w] += 1;
    for (const auto &[w, n] : tf[i]) df[w] += 1;
  }
  std::map<std::string, double> qtf;
  for (const auto &w : oracle_word_list(query)) qtf[w] += 1;
  const double n = static_cast<double>(docs.size());

  std::vector<OracleHit> hits;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    bool ok = true;
    for (const auto &t : tags) {
      std::string lower = t;
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      ok = ok && std::find(docs[i].tags.begin(), docs[i].tags.end(), lower) != docs[i].tags.end();
    }
    for (const auto &[w, c] : qtf) ok = ok && tf[i].count(w);
    if (!ok) continue;
    if (qtf.empty()) {
      hits.push_back({docs[i].ref, 0.0});
      continue;
    }
    double dot = 0, dn = 0, qn = 0;
    for (const auto &[w, c] : df) {
      const double idf = 1.0 + std::log(n / c);
      const auto d = tf[i].count(w) ? tf[i].at(w) * idf : 0.0;
      const auto q = qtf.count(w) ? qtf.at(w) * idf : 0.0;
      dot += d * q;
      dn += d * d;
      qn += q * q;
    }
    hits.push_back({docs[i].ref, dot / std::sqrt(dn * qn)});
  }
  std::sort(hits.begin(), hits.end(), [](const OracleHit &a, const OracleHit &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ref < b.ref;
  });
  return hits;
}

}  // namespace bbohub::testing
