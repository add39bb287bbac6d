#include "bbohub/samplers/nelder_mead.hpp"

#include <algorithm>
#include <limits>

#include "bbohub/core/error.hpp"
#include "bbohub/samplers/random.hpp"
#include "numeric_coding.hpp"

namespace bbohub::samplers {

namespace {

constexpr std::uint64_t kStartSalt = 0x6e6d5f7374617274ULL;
constexpr std::uint64_t kFallbackSalt = 0x6e6d5f66616c6cULL;
constexpr double kInitialStep = 0.05;

std::vector<double> affine(const std::vector<double> &origin, const std::vector<double> &toward, double t) {
  std::vector<double> out(origin.size());
  for (std::size_t i = 0; i < origin.size(); ++i) out[i] = origin[i] + t * (toward[i] - origin[i]);
  return out;
}

}  // namespace

NelderMeadState::NelderMeadState(std::vector<double> lower, std::vector<double> upper,
                                 std::vector<double> start, NelderMeadCoefficients coeffs)
    : lower_(std::move(lower)), upper_(std::move(upper)), coeffs_(coeffs) {
  start = clip(std::move(start));
  init_queue_.push_back(start);
  for (std::size_t i = 0; i < start.size(); ++i) {
    std::vector<double> v = start;
    const double step = kInitialStep * (upper_[i] - lower_[i]);
    v[i] = v[i] + step <= upper_[i] ? v[i] + step : v[i] - step;
    init_queue_.push_back(clip(std::move(v)));
  }
  std::reverse(init_queue_.begin(), init_queue_.end());
  pending_ = init_queue_.back();
}

NelderMeadState NelderMeadState::from_simplex(std::vector<double> lower, std::vector<double> upper,
                                              std::vector<Vertex> simplex, NelderMeadCoefficients coeffs) {
  if (simplex.size() != lower.size() + 1) {
    throw Error(Errc::validation, "simplex must have d+1 vertices");
  }
  NelderMeadState s;
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  s.coeffs_ = coeffs;
  s.simplex_ = std::move(simplex);
  s.start_iteration();
  return s;
}

std::vector<double> NelderMeadState::clip(std::vector<double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower_[i], upper_[i]);
  return x;
}

void NelderMeadState::start_iteration() {
  std::stable_sort(simplex_.begin(), simplex_.end(),
                   [](const Vertex &a, const Vertex &b) { return a.value < b.value; });
  const std::size_t d = dimension();
  centroid_.assign(d, 0.0);
  for (std::size_t v = 0; v < d; ++v) {
    for (std::size_t i = 0; i < d; ++i) centroid_[i] += simplex_[v].point[i] / static_cast<double>(d);
  }
  phase_ = NelderMeadPhase::reflect;
  pending_ = clip(affine(centroid_, simplex_.back().point, -coeffs_.reflection));
}

void NelderMeadState::replace_worst(Vertex v) {
  simplex_.back() = std::move(v);
  start_iteration();
}

void NelderMeadState::feed(const std::vector<double> &point, double value) {
  Vertex evaluated{clip(point), value};
  switch (phase_) {
    case NelderMeadPhase::init: {
      simplex_.push_back(std::move(evaluated));
      init_queue_.pop_back();
      if (init_queue_.empty()) {
        start_iteration();
      } else {
        pending_ = init_queue_.back();
      }
      return;
    }
    case NelderMeadPhase::reflect: {
      const double best = simplex_.front().value;
      const double second_worst = simplex_[simplex_.size() - 2].value;
      const double worst = simplex_.back().value;
      reflected_ = std::move(evaluated);
      if (reflected_.value < best) {
        phase_ = NelderMeadPhase::expand;
        pending_ = clip(affine(centroid_, reflected_.point, coeffs_.expansion));
      } else if (reflected_.value < second_worst) {
        replace_worst(reflected_);
      } else {
        phase_ = NelderMeadPhase::contract;
        inside_contraction_ = !(reflected_.value < worst);
        const auto &toward = inside_contraction_ ? simplex_.back().point : reflected_.point;
        pending_ = clip(affine(centroid_, toward, coeffs_.contraction));
      }
      return;
    }
    case NelderMeadPhase::expand: {
      replace_worst(evaluated.value < reflected_.value ? std::move(evaluated) : reflected_);
      return;
    }
    case NelderMeadPhase::contract: {
      const double threshold = inside_contraction_ ? simplex_.back().value : reflected_.value;
      if (evaluated.value < threshold) {
        replace_worst(std::move(evaluated));
        return;
      }
      phase_ = NelderMeadPhase::shrink;
      shrink_index_ = 1;
      pending_ = clip(affine(simplex_.front().point, simplex_[1].point, coeffs_.shrink));
      return;
    }
    case NelderMeadPhase::shrink: {
      simplex_[shrink_index_] = std::move(evaluated);
      if (++shrink_index_ < simplex_.size()) {
        pending_ = clip(affine(simplex_.front().point, simplex_[shrink_index_].point, coeffs_.shrink));
      } else {
        start_iteration();
      }
      return;
    }
  }
}

Params NelderMeadSampler::ask(const SamplingContext &ctx) {
  if (!ctx.space.all_float()) {
    throw Error(Errc::unsupported, "nelder_mead supports float parameters only");
  }
  if (ctx.directions.size() != 1) {
    throw Error(Errc::configuration, "nelder_mead is single-objective");
  }
  const auto &params = ctx.space.params();
  if (params.empty()) return {};
  std::vector<double> lower, upper;
  for (const auto &[name, d] : params) {
    const auto b = detail::internal_bounds(d);
    lower.push_back(b.low);
    upper.push_back(b.high);
  }
  Rng start_rng(derive_seed({ctx.seed, kStartSalt}));
  std::vector<double> start(params.size());
  for (std::size_t i = 0; i < start.size(); ++i) start[i] = start_rng.uniform(lower[i], upper[i]);

  NelderMeadState state(lower, upper, std::move(start), coeffs_);
  const Direction dir = ctx.directions.front();
  for (const Trial &t : ctx.trials) {
    if (t.id >= ctx.trial_id) break;
    if (t.state == TrialState::running) {
      // The simplex is blocked on an in-flight evaluation.
      Rng rng = trial_rng(ctx.seed, ctx.trial_id, kFallbackSalt);
      return random_sample(ctx.space, rng);
    }
    std::vector<double> x = state.propose();
    if (ctx.space.contains(t.params)) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        x[i] = detail::to_internal(params[i].second, t.params.at(params[i].first));
      }
    }
    const double value = t.state == TrialState::complete ? oriented(t.values.front(), dir)
                                                         : std::numeric_limits<double>::infinity();
    state.feed(x, value);
  }

  Params out;
  const auto &x = state.propose();
  for (std::size_t i = 0; i < params.size(); ++i) {
    out.emplace(params[i].first, detail::from_internal(params[i].second, x[i]));
  }
  return out;
}

}  // namespace bbohub::samplers
