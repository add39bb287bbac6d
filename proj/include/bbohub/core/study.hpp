#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "bbohub/core/journal.hpp"
#include "bbohub/core/problem.hpp"
#include "bbohub/core/sampler.hpp"
#include "bbohub/core/trial.hpp"

namespace bbohub {

struct StudyConfig {
  std::vector<Direction> directions;
  SearchSpace search_space;
  std::uint64_t seed = 0;
  std::shared_ptr<Sampler> sampler;

  void validate() const;
};

struct Failure {};
using Outcome = std::variant<std::vector<double>, Failure>;

/// One optimization run. All mutations go through a single mutex, so ask/tell
/// may be called from several workers; the sampler is only ever invoked while
/// that mutex is held. Every mutation is journaled before it returns.
class Study {
 public:
  /// Use create_study() / journal_replay().
  Study(StudyConfig config, std::optional<std::filesystem::path> journal_file);

  Study(const Study &) = delete;
  Study &operator=(const Study &) = delete;

  const std::vector<Direction> &directions() const noexcept { return config_.directions; }
  const SearchSpace &search_space() const noexcept { return config_.search_space; }
  std::uint64_t seed() const noexcept { return config_.seed; }
  std::shared_ptr<Sampler> sampler() const;
  /// Binds a sampler to a study reconstructed from a journal.
  void set_sampler(std::shared_ptr<Sampler> sampler);

  Trial ask();
  Trial tell(std::int64_t trial_id, const Outcome &outcome);

  std::vector<Trial> trials() const;
  Trial trial(std::int64_t trial_id) const;
  std::size_t size() const;

  Trial best_trial() const;
  std::vector<Trial> pareto_front() const;

  /// Runs exactly n_trials ask/evaluate/tell rounds. Evaluation errors and
  /// non-finite values become failed trials; sampler errors propagate, as do
  /// timeout/protocol/state/startup errors from the problem (after the trial
  /// is told as failed).
  /// With workers > 1 and a reentrant problem, evaluations overlap.
  void optimize(Problem &problem, std::int64_t n_trials, int workers = 1);

  std::vector<JournalRecord> journal() const;

 private:
  struct ReplayTag {};

 public:
  /// Backs journal_replay().
  static std::unique_ptr<Study> replay(std::span<const JournalRecord> records,
                                       std::shared_ptr<Sampler> sampler,
                                       std::optional<std::filesystem::path> journal_file);

 private:
  Study(ReplayTag, StudyConfig config, std::optional<std::filesystem::path> journal_file);

  void append_locked(RecordKind kind, json payload);
  void apply_asked_locked(const json &payload);
  void apply_told_locked(const json &payload);
  Trial tell_locked(std::int64_t trial_id, const Outcome &outcome);

  StudyConfig config_;
  mutable std::mutex mutex_;
  std::vector<Trial> trials_;
  std::vector<JournalRecord> records_;
  std::optional<JournalWriter> writer_;
};

/// Creates an empty study and journals its study_created record.
std::unique_ptr<Study> create_study(StudyConfig config,
                                    std::optional<std::filesystem::path> journal_file = std::nullopt);

/// Rebuilds a study from its records. Throws Errc::corruption naming the
/// offending seq on checksum mismatch or a gap, Errc::empty when the first
/// record is missing. When journal_file is given new records are appended to it.
std::unique_ptr<Study> journal_replay(std::span<const JournalRecord> records,
                                      std::shared_ptr<Sampler> sampler = nullptr,
                                      std::optional<std::filesystem::path> journal_file = std::nullopt);

/// Complete trials not dominated by any other complete trial, ordered by id.
std::vector<Trial> pareto_front(std::span<const Trial> trials, std::span<const Direction> directions);

}  // namespace bbohub
