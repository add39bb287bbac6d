#include "bbohub/samplers/tpe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "bbohub/core/error.hpp"
#include "bbohub/samplers/random.hpp"
#include "numeric_coding.hpp"

namespace bbohub::samplers {

namespace {

constexpr std::uint64_t kTpeSalt = 0x7470655f73616d70ULL;
constexpr int kMaxRejections = 64;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

void TpeConfig::validate() const {
  if (!(gamma_fraction > 0.0 && gamma_fraction < 1.0)) {
    throw Error(Errc::validation, "tpe: gamma_fraction must be in (0, 1)");
  }
  if (n_candidates < 1) throw Error(Errc::validation, "tpe: n_candidates must be positive");
  if (n_startup < 1) throw Error(Errc::validation, "tpe: n_startup must be positive");
  if (!(bandwidth_floor > 0.0)) throw Error(Errc::validation, "tpe: bandwidth_floor must be positive");
}

std::pair<std::vector<Trial>, std::vector<Trial>> tpe_split(std::span<const Trial> complete,
                                                            double gamma_fraction, Direction direction) {
  std::vector<Trial> sorted(complete.begin(), complete.end());
  std::stable_sort(sorted.begin(), sorted.end(), [&](const Trial &a, const Trial &b) {
    return oriented(a.values.front(), direction) < oriented(b.values.front(), direction);
  });
  const auto n_good = std::min(
      sorted.size(), static_cast<std::size_t>(std::ceil(gamma_fraction * static_cast<double>(sorted.size()))));
  std::vector<Trial> good(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n_good));
  std::vector<Trial> bad(sorted.begin() + static_cast<std::ptrdiff_t>(n_good), sorted.end());
  return {std::move(good), std::move(bad)};
}

std::vector<double> smoothed_weights(std::span<const std::size_t> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0) + static_cast<double>(counts.size());
  std::vector<double> w;
  w.reserve(counts.size());
  for (auto c : counts) w.push_back((static_cast<double>(c) + 1.0) / total);
  return w;
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / (n - 1.0));
}

TruncatedParzen::TruncatedParzen(std::vector<double> centers, double low, double high, double scale,
                                 double bandwidth_floor)
    : centers_(std::move(centers)), low_(low), high_(high) {
  const double n = static_cast<double>(std::max<std::size_t>(centers_.size(), 1));
  sigma_ = std::max(scale * std::pow(n, -0.2), bandwidth_floor * (high_ - low_));
  log_mass_.reserve(centers_.size());
  for (double c : centers_) {
    const double mass = sigma_ > 0.0 ? normal_cdf((high_ - c) / sigma_) - normal_cdf((low_ - c) / sigma_) : 1.0;
    log_mass_.push_back(std::log(std::max(mass, 1e-300)));
  }
}

double TruncatedParzen::log_pdf(double x) const {
  const double range = high_ - low_;
  if (centers_.empty() || !(range > 0.0) || !(sigma_ > 0.0)) {
    return range > 0.0 ? -std::log(range) : 0.0;
  }
  std::vector<double> terms(centers_.size());
  const double norm = std::log(sigma_) + 0.5 * std::log(2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < centers_.size(); ++k) {
    const double z = (x - centers_[k]) / sigma_;
    terms[k] = -0.5 * z * z - norm - log_mass_[k];
  }
  return log_sum_exp(terms) - std::log(static_cast<double>(centers_.size()));
}

double TruncatedParzen::sample(Rng &rng) const {
  if (centers_.empty() || !(high_ > low_)) return rng.uniform(low_, high_);
  const double center = centers_[rng.index(centers_.size())];
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double x = center + sigma_ * rng.normal();
    if (x >= low_ && x <= high_) return x;
  }
  return std::clamp(center, low_, high_);
}

TpeSampler::TpeSampler(TpeConfig config) : config_(config) { config_.validate(); }

Params TpeSampler::ask(const SamplingContext &ctx) {
  if (ctx.directions.size() != 1) throw Error(Errc::configuration, "tpe is single-objective");
  Rng rng = trial_rng(ctx.seed, ctx.trial_id, kTpeSalt);

  std::vector<Trial> complete;
  for (const auto &t : ctx.trials) {
    if (t.state == TrialState::complete && t.id < ctx.trial_id) complete.push_back(t);
  }
  if (static_cast<int>(complete.size()) < config_.n_startup) return random_sample(ctx.space, rng);

  const auto [good, bad] = tpe_split(complete, config_.gamma_fraction, ctx.directions.front());
  const auto n_cand = static_cast<std::size_t>(config_.n_candidates);
  std::vector<Params> candidates(n_cand);
  std::vector<double> score(n_cand, 0.0);

  for (const auto &[name, d] : ctx.space.params()) {
    if (d.kind == DistributionKind::categorical) {
      std::vector<std::size_t> good_counts(d.choices.size(), 0), bad_counts(d.choices.size(), 0);
      auto tally = [&](const std::vector<Trial> &group, std::vector<std::size_t> &counts) {
        for (const auto &t : group) {
          auto it = t.params.find(name);
          if (it == t.params.end()) continue;
          const auto &choice = std::get<std::string>(it->second);
          const auto pos = std::find(d.choices.begin(), d.choices.end(), choice) - d.choices.begin();
          if (pos < static_cast<std::ptrdiff_t>(counts.size())) ++counts[static_cast<std::size_t>(pos)];
        }
      };
      tally(good, good_counts);
      tally(bad, bad_counts);
      const auto wg = smoothed_weights(good_counts);
      const auto wb = smoothed_weights(bad_counts);
      for (std::size_t c = 0; c < n_cand; ++c) {
        double u = rng.uniform01();
        std::size_t pick = 0;
        while (pick + 1 < wg.size() && u >= wg[pick]) {
          u -= wg[pick];
          ++pick;
        }
        candidates[c].emplace(name, d.choices[pick]);
        score[c] += std::log(wg[pick]) - std::log(wb[pick]);
      }
      continue;
    }

    const auto bounds = detail::internal_bounds(d);
    auto centers_of = [&](const std::vector<Trial> &group) {
      std::vector<double> xs;
      for (const auto &t : group) {
        auto it = t.params.find(name);
        if (it != t.params.end()) xs.push_back(detail::to_internal(d, it->second));
      }
      return xs;
    };
    const double scale = sample_std(centers_of(complete));
    const TruncatedParzen good_model(centers_of(good), bounds.low, bounds.high, scale, config_.bandwidth_floor);
    const TruncatedParzen bad_model(centers_of(bad), bounds.low, bounds.high, scale, config_.bandwidth_floor);
    for (std::size_t c = 0; c < n_cand; ++c) {
      const double x = good_model.sample(rng);
      candidates[c].emplace(name, detail::from_internal(d, x));
      score[c] += good_model.log_pdf(x) - bad_model.log_pdf(x);
    }
  }

  const auto best = std::max_element(score.begin(), score.end()) - score.begin();
  return candidates[static_cast<std::size_t>(best)];
}

}  // namespace bbohub::samplers
