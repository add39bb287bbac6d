// bbohub: run studies, manage the package cache, build and search the catalog.
//
// Exit codes: 0 success, 1 validation findings, 2 usage or configuration,
// 3 run interrupted at runtime.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bbohub/catalog/catalog.hpp"
#include "bbohub/core/error.hpp"
#include "bbohub/core/serialize.hpp"
#include "bbohub/core/study.hpp"
#include "bbohub/registry/registry.hpp"

namespace fs = std::filesystem;
using bbohub::Errc;
using bbohub::Error;
using bbohub::json;

namespace {

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;
constexpr int kInterrupted = 3;

// int, then float, then string.
json parse_set_value(const std::string &text) {
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
      ec == std::errc() && p == text.data() + text.size()) {
    return i;
  }
  if (!text.empty()) {
    char *end = nullptr;
    const double d = std::strtod(text.c_str(), &end);
    if (end == text.c_str() + text.size() && std::isfinite(d)) return d;
  }
  return text;
}

json parse_assignments(const std::vector<std::string> &items) {
  json out = json::object();
  for (const auto &item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::parse, "expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = parse_set_value(item.substr(eq + 1));
  }
  return out;
}

struct RegistryFlags {
  std::string root;
  std::string cache_dir;
  bool no_network = false;

  void add_to(CLI::App *cmd) {
    cmd->add_option("--registry", root, "Registry root (directory, file:// or http:// URL)");
    cmd->add_option("--cache-dir", cache_dir, "Package cache directory");
    cmd->add_flag("--no-network", no_network, "Resolve packages from the cache only");
  }

  bbohub::registry::RegistryOptions options() const {
    auto o = bbohub::registry::RegistryOptions::from_environment();
    if (!root.empty()) o.root = root;
    if (!cache_dir.empty()) o.cache_dir = cache_dir;
    o.no_network = no_network;
    return o;
  }
};

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
}

json package_info(const bbohub::registry::LoadedPackage &pkg) {
  return json{{"ref", pkg.ref().str()},
              {"version", pkg.manifest().version},
              {"content_digest", pkg.cache_entry().content_digest}};
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  std::string sampler;
  std::string problem;
  std::vector<std::string> problem_set;
  std::vector<std::string> sampler_set;
  std::int64_t trials = 100;
  std::uint64_t seed = 0;
  std::string out = "bbohub-run";
  int workers = 1;
  double handshake_timeout = 10.0;
  double request_timeout = 30.0;
  RegistryFlags registry;
};

json result_document(const RunArgs &args, const json &sampler_info, const json &problem_info,
                     const bbohub::Study &study, const std::string &status) {
  const auto trials = study.trials();
  json rows = json::array();
  std::size_t complete = 0;
  for (const auto &t : trials) {
    rows.push_back(bbohub::to_json(t));
    if (t.state == bbohub::TrialState::complete) ++complete;
  }
  json doc{{"sampler", sampler_info},
           {"problem", problem_info},
           {"seed", args.seed},
           {"n_trials", trials.size()},
           {"n_complete", complete},
           {"status", status},
           {"directions", bbohub::to_json(study.directions())},
           {"trials", std::move(rows)}};
  if (study.directions().size() == 1) {
    doc["best"] = complete > 0 ? bbohub::to_json(study.best_trial()) : json(nullptr);
  } else {
    json front = json::array();
    for (const auto &t : study.pareto_front()) front.push_back(bbohub::to_json(t));
    doc["pareto_front"] = std::move(front);
  }
  return doc;
}

std::string summary_line(const bbohub::Study &study, const fs::path &out) {
  const auto trials = study.trials();
  std::size_t complete = 0, failed = 0;
  for (const auto &t : trials) {
    if (t.state == bbohub::TrialState::complete) ++complete;
    if (t.state == bbohub::TrialState::failed) ++failed;
  }
  std::string line = std::to_string(trials.size()) + " trials (" + std::to_string(complete) + " complete, " +
                     std::to_string(failed) + " failed)";
  if (complete > 0 && study.directions().size() == 1) {
    const auto best = study.best_trial();
    line += ", best " + format_value(best.values.at(0)) + " at trial " + std::to_string(best.id);
  } else if (complete > 0) {
    line += ", pareto front of " + std::to_string(study.pareto_front().size());
  }
  return line + " -> " + out.string();
}

int cmd_run(const RunArgs &args) {
  namespace reg = bbohub::registry;
  auto options = args.registry.options();
  options.plugin.handshake_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(args.handshake_timeout * 1000));
  options.plugin.request_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(args.request_timeout * 1000));

  if (args.trials < 0) throw Error(Errc::validation, "--trials must be non-negative");
  const json problem_params = parse_assignments(args.problem_set);
  const json sampler_params = parse_assignments(args.sampler_set);

  const auto sampler_pkg = reg::load_module(args.sampler, options);
  const auto problem_pkg = reg::load_module(args.problem, options);
  auto problem = problem_pkg.make_problem(problem_params);
  auto sampler = sampler_pkg.make_sampler(sampler_params);

  const fs::path out(args.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(Errc::io, "cannot create " + out.string() + ": " + ec.message());

  const auto dirs = problem->directions();
  bbohub::StudyConfig config{{dirs.begin(), dirs.end()}, problem->search_space(), args.seed, sampler};
  auto study = bbohub::create_study(std::move(config), out / "journal.ndjson");

  const json sampler_info = package_info(sampler_pkg);
  json problem_info = package_info(problem_pkg);
  problem_info["parameters"] = reg::merge_parameters(problem_pkg.manifest().defaults, problem_params);

  try {
    study->optimize(*problem, args.trials, args.workers);
  } catch (const Error &e) {
    if (e.code() == Errc::configuration || e.code() == Errc::unsupported) throw;
    write_text(out / "result.json", result_document(args, sampler_info, problem_info, *study, "interrupted").dump(2) + "\n");
    std::cerr << "bbohub: run interrupted: " << e.what() << "\n" << summary_line(*study, out) << "\n";
    return kInterrupted;
  }
  write_text(out / "result.json", result_document(args, sampler_info, problem_info, *study, "complete").dump(2) + "\n");
  std::cout << summary_line(*study, out) << "\n";
  return kOk;
}

// ---- registry --------------------------------------------------------------

int cmd_fetch(const std::string &ref, const std::string &version, const RegistryFlags &flags) {
  auto options = flags.options();
  if (!version.empty()) options.version = version;
  const auto entry = bbohub::registry::fetch_package(bbohub::registry::parse_ref(ref), options);
  std::cout << entry.ref.str() << "\t" << entry.version << "\t" << entry.content_digest << "\t"
            << entry.directory.string() << "\n";
  return kOk;
}

int cmd_validate(const std::string &path) {
  const auto report = bbohub::registry::validate_package(path);
  for (const auto &e : report.errors) std::cout << "error: " << e << "\n";
  for (const auto &w : report.warnings) std::cout << "warning: " << w << "\n";
  std::cout << (report.publishable() ? "publishable" : "not publishable") << "\n";
  return report.publishable() ? kOk : kFindings;
}

int cmd_list(const RegistryFlags &flags) {
  const bbohub::registry::Cache cache(flags.options().cache_dir);
  for (const auto &entry : cache.list()) {
    std::cout << entry.ref.str() << "\t" << entry.version << "\t" << entry.content_digest << "\n";
  }
  return kOk;
}

// ---- catalog ---------------------------------------------------------------

int cmd_catalog_build(const std::string &root, const std::string &out) {
  const auto build = bbohub::catalog::build_catalog(root);
  const auto index = bbohub::catalog::build_index(build.docs);
  const auto written = bbohub::catalog::emit_site(build.docs, index, out);
  for (const auto &[dir, report] : build.rejected) {
    for (const auto &e : report.errors) std::cerr << dir << ": error: " << e << "\n";
  }
  std::cout << build.docs.size() << " packages, " << written.size() << " files -> " << out << "\n";
  if (!build.rejected.empty()) {
    std::cout << build.rejected.size() << " package(s) rejected\n";
    return kFindings;
  }
  return kOk;
}

int cmd_search(const std::string &index_dir, const std::string &query, const std::vector<std::string> &tags,
               bool scores) {
  const auto index = bbohub::catalog::load_index(index_dir);
  for (const auto &hit : bbohub::catalog::search(index, query, tags)) {
    std::cout << hit.ref;
    if (scores) std::cout << "\t" << format_value(hit.score);
    std::cout << "\n";
  }
  return kOk;
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::timeout:
    case Errc::protocol:
    case Errc::state:
    case Errc::remote:
    case Errc::sampler:
      return kInterrupted;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Black-box optimization hub: run studies, fetch packages, build the catalog"};
  app.require_subcommand(1);

  RunArgs run;
  auto *run_cmd = app.add_subcommand("run", "Optimize a problem package with a sampler package");
  run_cmd->add_option("--sampler", run.sampler, "Sampler ref, e.g. samplers/tpe")->required();
  run_cmd->add_option("--problem", run.problem, "Problem ref, e.g. benchmarks/bbob")->required();
  run_cmd->add_option("--set", run.problem_set, "Problem parameter key=value (repeatable)");
  run_cmd->add_option("--sampler-set", run.sampler_set, "Sampler parameter key=value (repeatable)");
  run_cmd->add_option("--trials", run.trials, "Number of trials")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Study seed")->capture_default_str();
  run_cmd->add_option("--out", run.out, "Output directory for journal.ndjson and result.json")->capture_default_str();
  run_cmd->add_option("--workers", run.workers, "Concurrent evaluations")->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--handshake-timeout", run.handshake_timeout, "Plugin handshake timeout, seconds")
      ->capture_default_str();
  run_cmd->add_option("--plugin-timeout", run.request_timeout, "Plugin request timeout, seconds")->capture_default_str();
  run.registry.add_to(run_cmd);

  auto *registry_cmd = app.add_subcommand("registry", "Package cache operations");
  registry_cmd->require_subcommand(1);
  std::string fetch_ref, fetch_version;
  RegistryFlags fetch_flags;
  auto *fetch_cmd = registry_cmd->add_subcommand("fetch", "Download a package into the cache");
  fetch_cmd->add_option("ref", fetch_ref, "category/name")->required();
  fetch_cmd->add_option("--version", fetch_version, "Pin a version");
  fetch_flags.add_to(fetch_cmd);
  std::string validate_path;
  auto *validate_cmd = registry_cmd->add_subcommand("validate", "Check a package directory for publication");
  validate_cmd->add_option("path", validate_path, "Package directory")->required();
  RegistryFlags list_flags;
  auto *list_cmd = registry_cmd->add_subcommand("list", "List cached packages");
  list_cmd->add_option("--cache-dir", list_flags.cache_dir, "Package cache directory");

  auto *catalog_cmd = app.add_subcommand("catalog", "Static catalog site");
  catalog_cmd->require_subcommand(1);
  std::string catalog_root, catalog_out = "site";
  auto *build_cmd = catalog_cmd->add_subcommand("build", "Build pages and the search index");
  build_cmd->add_option("--registry", catalog_root, "Registry root holding package/");
  build_cmd->add_option("--out", catalog_out, "Output directory")->capture_default_str();

  std::string index_dir = "site", query;
  std::vector<std::string> tags;
  bool scores = false;
  auto add_search = [&](CLI::App *cmd) {
    cmd->add_option("--index", index_dir, "Directory holding search_index.json")->capture_default_str();
    cmd->add_option("--query", query, "Full-text query (all tokens must match)");
    cmd->add_option("--tag", tags, "Required tag (repeatable)");
    cmd->add_flag("--scores", scores, "Print the relevance score next to each ref");
  };
  auto *search_cmd = app.add_subcommand("search", "Search a built catalog");
  add_search(search_cmd);
  auto *catalog_search_cmd = catalog_cmd->add_subcommand("search", "Search a built catalog");
  add_search(catalog_search_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*fetch_cmd) return cmd_fetch(fetch_ref, fetch_version, fetch_flags);
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*list_cmd) return cmd_list(list_flags);
    if (*build_cmd) {
      if (catalog_root.empty()) catalog_root = bbohub::registry::RegistryOptions::from_environment().root;
      return cmd_catalog_build(catalog_root, catalog_out);
    }
    if (*search_cmd || *catalog_search_cmd) return cmd_search(index_dir, query, tags, scores);
  } catch (const Error &e) {
    std::cerr << "bbohub: " << bbohub::to_string(e.code()) << ": " << e.what() << "\n";
    // Failures before the study started are configuration problems.
    return *run_cmd ? kUsage : exit_code_for(e.code());
  } catch (const std::exception &e) {
    std::cerr << "bbohub: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
