#include "bbohub/samplers/auto.hpp"

#include "bbohub/samplers/nelder_mead.hpp"
#include "bbohub/samplers/nsga2.hpp"
#include "bbohub/samplers/random.hpp"
#include "bbohub/samplers/tpe.hpp"

namespace bbohub::samplers {

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::random: return "random";
    case SamplerKind::nelder_mead: return "nelder_mead";
    case SamplerKind::tpe: return "tpe";
    case SamplerKind::nsga2: return "nsga2";
  }
  return "?";
}

SamplerKind auto_select(const SearchSpace &space, std::size_t n_objectives) {
  if (n_objectives >= 2) return SamplerKind::nsga2;
  if (space.has_categorical()) return SamplerKind::tpe;
  // nelder_mead is float-only; int params go to tpe as well.
  if (!space.all_float()) return SamplerKind::tpe;
  return SamplerKind::nelder_mead;
}

std::shared_ptr<Sampler> make_sampler(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::random: return std::make_shared<RandomSampler>();
    case SamplerKind::nelder_mead: return std::make_shared<NelderMeadSampler>();
    case SamplerKind::tpe: return std::make_shared<TpeSampler>();
    case SamplerKind::nsga2: return std::make_shared<Nsga2Sampler>();
  }
  return nullptr;
}

Params AutoSampler::ask(const SamplingContext &ctx) {
  const SamplerKind kind = auto_select(ctx.space, ctx.directions.size());
  auto &delegate = delegates_[kind];
  if (!delegate) delegate = make_sampler(kind);
  last_ = kind;
  return delegate->ask(ctx);
}

}  // namespace bbohub::samplers
