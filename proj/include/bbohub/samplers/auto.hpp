#pragma once

#include <map>
#include <optional>
#include <memory>

#include "bbohub/core/sampler.hpp"

namespace bbohub::samplers {

enum class SamplerKind : std::uint8_t { random, nelder_mead, tpe, nsga2 };

std::string to_string(SamplerKind kind);

/// Static routing table: >= 2 objectives -> nsga2; any categorical or int
/// parameter -> tpe; otherwise nelder_mead.
SamplerKind auto_select(const SearchSpace &space, std::size_t n_objectives);

std::shared_ptr<Sampler> make_sampler(SamplerKind kind);

class AutoSampler final : public Sampler {
 public:
  std::string identity() const override { return "samplers/auto_sampler"; }
  Params ask(const SamplingContext &ctx) override;

  /// Kind chosen on the most recent ask, if any.
  std::optional<SamplerKind> last_choice() const noexcept { return last_; }

 private:
  std::map<SamplerKind, std::shared_ptr<Sampler>> delegates_;
  std::optional<SamplerKind> last_;
};

}  // namespace bbohub::samplers
