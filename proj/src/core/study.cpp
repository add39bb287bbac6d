#include "bbohub/core/study.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "bbohub/core/error.hpp"

namespace bbohub {

void StudyConfig::validate() const {
  if (directions.empty()) throw Error(Errc::validation, "a study needs at least one direction");
  search_space.validate();
}

Study::Study(StudyConfig config, std::optional<std::filesystem::path> journal_file)
    : config_(std::move(config)) {
  config_.validate();
  if (journal_file) writer_.emplace(*journal_file, /*truncate=*/true);
  json payload = json::object();
  payload["directions"] = to_json(config_.directions);
  payload["search_space"] = to_json(config_.search_space);
  payload["seed"] = config_.seed;
  payload["sampler"] = config_.sampler ? json(config_.sampler->identity()) : json(nullptr);
  std::lock_guard lock(mutex_);
  append_locked(RecordKind::study_created, std::move(payload));
}

Study::Study(ReplayTag, StudyConfig config, std::optional<std::filesystem::path> journal_file)
    : config_(std::move(config)) {
  if (journal_file) writer_.emplace(*journal_file, /*truncate=*/false);
}

std::shared_ptr<Sampler> Study::sampler() const {
  std::lock_guard lock(mutex_);
  return config_.sampler;
}

void Study::set_sampler(std::shared_ptr<Sampler> sampler) {
  std::lock_guard lock(mutex_);
  config_.sampler = std::move(sampler);
}

void Study::append_locked(RecordKind kind, json payload) {
  auto record = JournalRecord::make(records_.size(), kind, std::move(payload));
  if (writer_) writer_->append(record);
  records_.push_back(std::move(record));
}

Trial Study::ask() {
  std::lock_guard lock(mutex_);
  if (!config_.sampler) throw Error(Errc::configuration, "study has no sampler bound");

  const auto id = static_cast<std::int64_t>(trials_.size());
  const SamplingContext ctx{config_.search_space, config_.directions, trials_, id, config_.seed};

  // A sampler that hands back out-of-domain params costs one failed trial;
  // any other sampler error is fatal to the caller.
  auto record_violation = [&](const std::string &why) -> Error {
    Trial t;
    t.id = id;
    t.state = TrialState::running;
    trials_.push_back(t);
    json asked = json::object();
    asked["trial_id"] = id;
    asked["params"] = json::object();
    append_locked(RecordKind::trial_asked, std::move(asked));
    tell_locked(id, Failure{});
    return Error(Errc::contract_violation, config_.sampler->identity() + ": " + why);
  };

  Params params;
  try {
    params = config_.sampler->ask(ctx);
  } catch (const Error &e) {
    if (e.code() == Errc::contract_violation) throw record_violation(e.what());
    // A sampler that cannot handle this study at all keeps its code.
    const bool setup = e.code() == Errc::configuration || e.code() == Errc::unsupported;
    throw Error(setup ? e.code() : Errc::sampler, config_.sampler->identity() + ": " + e.what());
  } catch (const std::exception &e) {
    throw Error(Errc::sampler, config_.sampler->identity() + ": " + e.what());
  }
  try {
    config_.search_space.check(params);
  } catch (const Error &e) {
    throw record_violation(e.what());
  }

  Trial t;
  t.id = id;
  t.params = std::move(params);
  trials_.push_back(t);
  json payload = json::object();
  payload["trial_id"] = id;
  payload["params"] = to_json(t.params);
  append_locked(RecordKind::trial_asked, std::move(payload));
  return t;
}

Trial Study::tell_locked(std::int64_t trial_id, const Outcome &outcome) {
  if (trial_id < 0 || trial_id >= static_cast<std::int64_t>(trials_.size())) {
    throw Error(Errc::not_found, "no trial with id " + std::to_string(trial_id));
  }
  Trial &t = trials_[static_cast<std::size_t>(trial_id)];
  if (t.state != TrialState::running) {
    throw Error(Errc::state, "trial " + std::to_string(trial_id) + " is already " + to_string(t.state));
  }
  if (const auto *values = std::get_if<std::vector<double>>(&outcome)) {
    if (values->size() != config_.directions.size()) {
      throw Error(Errc::arity, "trial " + std::to_string(trial_id) + ": expected " +
                                   std::to_string(config_.directions.size()) + " values, got " +
                                   std::to_string(values->size()));
    }
    for (double v : *values) {
      if (!std::isfinite(v)) {
        throw Error(Errc::validation, "trial " + std::to_string(trial_id) + ": non-finite value");
      }
    }
    t.state = TrialState::complete;
    t.values = *values;
  } else {
    t.state = TrialState::failed;
    t.values.clear();
  }
  json payload = json::object();
  payload["trial_id"] = trial_id;
  payload["state"] = to_string(t.state);
  payload["values"] = t.values;
  append_locked(RecordKind::trial_told, std::move(payload));
  return t;
}

Trial Study::tell(std::int64_t trial_id, const Outcome &outcome) {
  std::lock_guard lock(mutex_);
  Trial t = tell_locked(trial_id, outcome);
  if (config_.sampler) {
    try {
      config_.sampler->after_tell(t);
    } catch (const Error &e) {
      throw Error(e.code() == Errc::contract_violation ? e.code() : Errc::sampler,
                  config_.sampler->identity() + ": " + e.what());
    } catch (const std::exception &e) {
      throw Error(Errc::sampler, config_.sampler->identity() + ": " + e.what());
    }
  }
  return t;
}

std::vector<Trial> Study::trials() const {
  std::lock_guard lock(mutex_);
  return trials_;
}

Trial Study::trial(std::int64_t trial_id) const {
  std::lock_guard lock(mutex_);
  if (trial_id < 0 || trial_id >= static_cast<std::int64_t>(trials_.size())) {
    throw Error(Errc::not_found, "no trial with id " + std::to_string(trial_id));
  }
  return trials_[static_cast<std::size_t>(trial_id)];
}

std::size_t Study::size() const {
  std::lock_guard lock(mutex_);
  return trials_.size();
}

Trial Study::best_trial() const {
  std::lock_guard lock(mutex_);
  if (config_.directions.size() != 1) {
    throw Error(Errc::configuration, "best_trial is single-objective; use pareto_front");
  }
  const Direction dir = config_.directions.front();
  const Trial *best = nullptr;
  for (const auto &t : trials_) {
    if (t.state != TrialState::complete) continue;
    if (best == nullptr || oriented(t.values[0], dir) < oriented(best->values[0], dir)) best = &t;
  }
  if (best == nullptr) throw Error(Errc::empty, "study has no complete trials");
  return *best;
}

std::vector<Trial> pareto_front(std::span<const Trial> trials, std::span<const Direction> directions) {
  std::vector<const Trial *> complete;
  for (const auto &t : trials) {
    if (t.state == TrialState::complete) complete.push_back(&t);
  }
  if (complete.empty()) throw Error(Errc::empty, "study has no complete trials");
  std::vector<Trial> front;
  for (const Trial *a : complete) {
    bool dominated = false;
    for (const Trial *b : complete) {
      if (b != a && dominates(b->values, a->values, directions)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(*a);
  }
  return front;
}

std::vector<Trial> Study::pareto_front() const {
  std::lock_guard lock(mutex_);
  return bbohub::pareto_front(trials_, config_.directions);
}

namespace {

// The problem itself is unusable (plugin gone or hung), as opposed to one
// bad evaluation.
bool transport_failure(Errc code) {
  return code == Errc::timeout || code == Errc::protocol || code == Errc::state || code == Errc::startup;
}

Outcome evaluate_outcome(Problem &problem, const Trial &trial, std::size_t n_objectives) {
  try {
    auto values = problem.evaluate(trial.params);
    if (values.size() != n_objectives) return Failure{};
    for (double v : values) {
      if (!std::isfinite(v)) return Failure{};
    }
    return values;
  } catch (const Error &e) {
    if (transport_failure(e.code())) throw;
    return Failure{};
  } catch (const std::exception &) {
    return Failure{};
  }
}

}  // namespace

void Study::optimize(Problem &problem, std::int64_t n_trials, int workers) {
  if (n_trials < 0) throw Error(Errc::validation, "n_trials must be non-negative");
  const auto dirs = problem.directions();
  if (!std::equal(dirs.begin(), dirs.end(), config_.directions.begin(), config_.directions.end())) {
    throw Error(Errc::configuration, "problem directions do not match the study");
  }
  if (!(problem.search_space() == config_.search_space)) {
    throw Error(Errc::configuration, "problem search space does not match the study");
  }
  const std::size_t n_objectives = config_.directions.size();

  auto one_round = [&] {
    Trial t;
    try {
      t = ask();
    } catch (const Error &e) {
      if (e.code() == Errc::contract_violation) return;  // already recorded as failed
      throw;
    }
    Outcome outcome;
    try {
      outcome = evaluate_outcome(problem, t, n_objectives);
    } catch (...) {
      tell(t.id, Failure{});
      throw;
    }
    tell(t.id, outcome);
  };

  if (workers <= 1 || !problem.reentrant()) {
    for (std::int64_t i = 0; i < n_trials; ++i) one_round();
    return;
  }

  std::atomic<std::int64_t> claimed{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (!stop.load() && claimed.fetch_add(1) < n_trials) {
          try {
            one_round();
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            stop.store(true);
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<JournalRecord> Study::journal() const {
  std::lock_guard lock(mutex_);
  return records_;
}

void Study::apply_asked_locked(const json &payload) {
  const auto id = payload.at("trial_id").get<std::int64_t>();
  if (id != static_cast<std::int64_t>(trials_.size())) {
    throw Error(Errc::corruption, "trial_asked out of order for trial " + std::to_string(id));
  }
  Trial t;
  t.id = id;
  t.params = params_from_json(payload.at("params"), config_.search_space);
  trials_.push_back(std::move(t));
}

void Study::apply_told_locked(const json &payload) {
  const auto id = payload.at("trial_id").get<std::int64_t>();
  if (id < 0 || id >= static_cast<std::int64_t>(trials_.size())) {
    throw Error(Errc::corruption, "trial_told for unknown trial " + std::to_string(id));
  }
  Trial &t = trials_[static_cast<std::size_t>(id)];
  if (t.state != TrialState::running) {
    throw Error(Errc::corruption, "trial_told for finished trial " + std::to_string(id));
  }
  t.state = trial_state_from_string(payload.at("state").get<std::string>());
  t.values = payload.at("values").get<std::vector<double>>();
}

std::unique_ptr<Study> Study::replay(std::span<const JournalRecord> records,
                                     std::shared_ptr<Sampler> sampler,
                                     std::optional<std::filesystem::path> journal_file) {
  if (records.empty()) throw Error(Errc::empty, "journal is empty: missing study_created record");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto &r = records[i];
    if (r.seq != i) {
      throw Error(Errc::corruption, "journal seq gap at seq " + std::to_string(r.seq) +
                                        " (expected " + std::to_string(i) + ")");
    }
    if (!r.verify()) throw Error(Errc::corruption, "checksum mismatch at seq " + std::to_string(r.seq));
  }
  const auto &head = records.front();
  if (head.kind != RecordKind::study_created) {
    throw Error(Errc::corruption, "journal seq 0 is not study_created");
  }

  StudyConfig config;
  try {
    config.directions = directions_from_json(head.payload.at("directions"));
    config.search_space = search_space_from_json(head.payload.at("search_space"));
    config.seed = head.payload.at("seed").get<std::uint64_t>();
    config.validate();
  } catch (const Error &e) {
    throw Error(Errc::corruption, std::string("seq 0: ") + e.what());
  } catch (const json::exception &e) {
    throw Error(Errc::corruption, std::string("seq 0: ") + e.what());
  }
  config.sampler = std::move(sampler);

  std::unique_ptr<Study> study(new Study(ReplayTag{}, std::move(config), std::move(journal_file)));
  std::lock_guard lock(study->mutex_);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto &r = records[i];
    try {
      switch (r.kind) {
        case RecordKind::trial_asked: study->apply_asked_locked(r.payload); break;
        case RecordKind::trial_told: study->apply_told_locked(r.payload); break;
        case RecordKind::study_created:
          throw Error(Errc::corruption, "duplicate study_created");
      }
    } catch (const Error &e) {
      throw Error(Errc::corruption, "seq " + std::to_string(r.seq) + ": " + e.what());
    } catch (const json::exception &e) {
      throw Error(Errc::corruption, "seq " + std::to_string(r.seq) + ": " + e.what());
    }
  }
  study->records_.assign(records.begin(), records.end());
  return study;
}

std::unique_ptr<Study> create_study(StudyConfig config, std::optional<std::filesystem::path> journal_file) {
  return std::make_unique<Study>(std::move(config), std::move(journal_file));
}

std::unique_ptr<Study> journal_replay(std::span<const JournalRecord> records, std::shared_ptr<Sampler> sampler,
                                      std::optional<std::filesystem::path> journal_file) {
  return Study::replay(records, std::move(sampler), std::move(journal_file));
}

}  // namespace bbohub
