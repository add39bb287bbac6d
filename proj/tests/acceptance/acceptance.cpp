// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "../support/catalog_fixture.hpp"
#include "../support/fuzz.hpp"
#include "../support/oracles.hpp"
#include "../support/support.hpp"
#include "bbohub/benchmarks/bbob.hpp"
#include "bbohub/benchmarks/bi_sphere.hpp"
#include "bbohub/catalog/catalog.hpp"
#include "bbohub/core/error.hpp"
#include "bbohub/core/journal.hpp"
#include "bbohub/core/study.hpp"
#include "bbohub/registry/cache.hpp"
#include "bbohub/registry/registry.hpp"
#include "bbohub/samplers/pareto.hpp"

using namespace bbohub;
using bbohub::testing::TempDir;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool ok;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t count_lines(const fs::path &p) {
  std::ifstream in(p);
  return static_cast<std::size_t>(std::count(std::istreambuf_iterator<char>(in), {}, '\n'));
}

registry::RegistryOptions shipped(const fs::path &cache) {
  registry::RegistryOptions o;
  o.root = testing::shipped_registry().string();
  o.cache_dir = cache;
  return o;
}

double best_value(registry::LoadedPackage &sampler, Problem &problem, std::uint64_t seed, int trials) {
  auto study = create_study({{Direction::minimize}, problem.search_space(), seed, sampler.make_sampler()});
  study->optimize(problem, trials);
  return study->best_trial().values[0];
}

// 1. The quickstart run through the CLI.
Verdict quickstart() {
  TempDir cache, out;
  const auto t0 = Clock::now();
  const auto r = testing::run_command(
      {testing::cli_path().string(), "run", "--sampler", "samplers/auto_sampler", "--problem", "benchmarks/bbob", "--set",
       "function_id=1", "--set", "dimension=2", "--trials", "100", "--seed", "0", "--out", out.path().string()},
      {{"BBOHUB_CACHE_DIR", cache.path().string()}, {"BBOHUB_REGISTRY_ROOT", testing::shipped_registry().string()}});
  const double secs = seconds_since(t0);
  if (r.exit_code != 0) return {false, "exit " + std::to_string(r.exit_code) + ": " + r.err};
  const auto result = json::parse(testing::read_file(out.path() / "result.json"));
  const auto n = result.at("n_trials").get<int>();
  const double best = result.at("best").at("values").at(0).get<double>();
  return {n == 100 && best < 1.0 && secs < 5.0,
          std::to_string(n) + " trials, best " + fmt(best) + ", " + fmt(secs) + " s"};
}

// 2. Nelder-Mead on the sphere.
Verdict nelder_mead_sphere() {
  TempDir cache;
  auto nm = registry::load_module("samplers/nelder_mead", shipped(cache.path()));
  auto problem = benchmarks::make_bbob({1, 2, 0});
  const auto t0 = Clock::now();
  auto study = create_study({{Direction::minimize}, problem->search_space(), 0, nm.make_sampler()});
  study->optimize(*problem, 200);
  const double secs = seconds_since(t0);
  std::int64_t first = -1;
  for (const auto &t : study->trials()) {
    if (t.state == TrialState::complete && t.values[0] <= 1e-8) {
      first = t.id;
      break;
    }
  }
  const double best = study->best_trial().values[0];
  return {first >= 0 && best <= 1e-8 && secs < 1.0,
          "best " + fmt(best) + ", first <= 1e-8 at eval " + std::to_string(first + 1) + ", " + fmt(secs) + " s"};
}

// 3. Sampler ordering on f1 in five dimensions.
Verdict sampler_ordering() {
  TempDir cache;
  const auto opts = shipped(cache.path());
  auto nm = registry::load_module("samplers/nelder_mead", opts);
  auto tpe = registry::load_module("samplers/tpe", opts);
  auto rnd = registry::load_module("samplers/random", opts);
  auto problem = benchmarks::make_bbob({1, 5, 0});
  std::vector<double> a, b, c;
  int tpe_wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    a.push_back(best_value(nm, *problem, seed, 100));
    b.push_back(best_value(tpe, *problem, seed, 100));
    c.push_back(best_value(rnd, *problem, seed, 100));
    tpe_wins += b.back() < c.back();
  }
  const double mn = median(a), mt = median(b), mr = median(c);
  return {mn < mt && mt < mr && tpe_wins >= 15, "medians nm " + fmt(mn) + " < tpe " + fmt(mt) + " < random " + fmt(mr) +
                                                     ", tpe beats random " + std::to_string(tpe_wins) + "/20"};
}

// 4. Non-dominated sorting against brute force.
Verdict nds_oracle() {
  Rng rng(2024);
  const std::vector<Direction> dirs(3, Direction::minimize);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::vector<double>> pts(200, std::vector<double>(3));
    for (auto &p : pts) {
      // Coarse grid values force ties and duplicates.
      for (auto &v : p) v = rep % 2 ? std::floor(rng.uniform(0, 6)) : rng.uniform(-1, 1);
    }
    const auto got = samplers::non_dominated_sort(pts, dirs);
    const auto want = testing::oracle_fronts(pts, dirs);
    if (got.size() != want.size()) return {false, "rep " + std::to_string(rep) + ": front count differs"};
    for (std::size_t f = 0; f < got.size(); ++f) {
      if (std::vector<std::size_t>(got[f].begin(), got[f].end()) != want[f]) {
        return {false, "rep " + std::to_string(rep) + ": front " + std::to_string(f) + " differs"};
      }
    }
  }
  return {true, "100 repetitions of 200 points x 3 objectives"};
}

// 5. NSGA-II hypervolume against random search.
Verdict nsga2_hypervolume() {
  TempDir cache;
  const auto opts = shipped(cache.path());
  auto nsga = registry::load_module("samplers/nsga2", opts);
  auto rnd = registry::load_module("samplers/random", opts);
  auto problem_pkg = registry::load_module("benchmarks/bi_sphere", opts);
  auto problem = problem_pkg.make_problem({{"dimension", 2}, {"offset", 1.0}});
  auto hv = [&](registry::LoadedPackage &pkg, std::uint64_t seed) {
    auto study = create_study({{Direction::minimize, Direction::minimize}, problem->search_space(), seed, pkg.make_sampler()});
    study->optimize(*problem, 200);
    std::vector<std::vector<double>> pts;
    for (const auto &t : study->pareto_front()) pts.push_back(t.values);
    return testing::hypervolume_2d(pts, 10, 10);
  };
  int wins = 0;
  double sum_n = 0, sum_r = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double hn = hv(nsga, seed), hr = hv(rnd, seed);
    wins += hn > hr;
    sum_n += hn;
    sum_r += hr;
  }
  return {wins >= 8, "nsga2 wins " + std::to_string(wins) + "/10, mean hv " + fmt(sum_n / 10) + " vs " + fmt(sum_r / 10)};
}

// 6. Known optima of the benchmark functions.
Verdict bbob_optima() {
  Rng rng(6);
  int cases = 0;
  for (int fid : benchmarks::kSupportedFunctions) {
    for (int dim = 1; dim <= 10; ++dim) {
      for (int inst = 0; inst <= 5; ++inst) {
        const benchmarks::BbobFunction f({fid, dim, inst});
        const double at_opt = f(f.optimum());
        if (std::abs(at_opt - f.optimal_value()) > 1e-9) {
          return {false, "f" + std::to_string(fid) + " d" + std::to_string(dim) + " i" + std::to_string(inst) +
                             ": f(x*) = " + fmt(at_opt)};
        }
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (int k = 0; k < 1000; ++k) {
          for (auto &v : x) v = rng.uniform(-5, 5);
          if (f(x) < f.optimal_value()) return {false, "random point beat f* on f" + std::to_string(fid)};
        }
        ++cases;
      }
    }
  }
  return {true, std::to_string(cases) + " (function, dimension, instance) cases"};
}

// 7. Offline reload from the cache.
Verdict offline_cache() {
  TempDir cache;
  auto opts = shipped(cache.path());
  const auto fetched = registry::fetch_package(registry::parse_ref("samplers/tpe"), opts);
  const auto online = registry::Cache(cache.path()).verify(fetched);
  opts.root = "http://127.0.0.1:1/unreachable";
  const auto pkg = registry::load_module("samplers/tpe", opts);
  const auto offline = registry::read_tree(pkg.cache_entry().directory);
  const bool same = offline == online && pkg.cache_entry().content_digest == fetched.content_digest;
  return {same && pkg.make_sampler() != nullptr, std::to_string(online.size()) + " files, digest " +
                                                     fetched.content_digest.substr(0, 12)};
}

pid_t find_child(pid_t parent, const std::string &needle) {
  for (const auto &e : fs::directory_iterator("/proc")) {
    const auto name = e.path().filename().string();
    if (!std::all_of(name.begin(), name.end(), ::isdigit)) continue;
    std::ifstream stat(e.path() / "stat");
    std::string line;
    if (!std::getline(stat, line)) continue;
    const auto close = line.rfind(')');
    if (close == std::string::npos) continue;
    std::istringstream rest(line.substr(close + 2));
    char state;
    pid_t ppid;
    rest >> state >> ppid;
    if (ppid != parent) continue;
    std::ifstream cmd(e.path() / "cmdline");
    std::string cmdline((std::istreambuf_iterator<char>(cmd)), {});
    if (cmdline.find(needle) != std::string::npos) return static_cast<pid_t>(std::stoi(name));
  }
  return -1;
}

// 8. Plugin sampler: clean runs on random spaces, then a killed plugin.
Verdict plugin_sampler() {
  TempDir cache;
  registry::RegistryOptions opts;
  opts.root = testing::plugin_registry().string();
  opts.cache_dir = cache.path();
  auto pkg = registry::load_module("samplers/random_plugin", opts);
  Rng rng(88);
  int violations = 0;
  for (int rep = 0; rep < 3; ++rep) {
    const auto space = testing::random_space(rng, 6);
    auto study = create_study({{Direction::minimize}, space, static_cast<std::uint64_t>(rep), pkg.make_sampler({{"seed", rep}})});
    for (int i = 0; i < 100; ++i) {
      const auto t = study->ask();
      violations += !space.contains(t.params);
      study->tell(t.id, std::vector<double>{rng.uniform(0, 1)});
    }
  }
  if (violations) return {false, std::to_string(violations) + " out-of-space suggestions"};

  // Run through the CLI, stall the plugin after 40 asks and SIGKILL it. The
  // sampler comes from the fixture registry, the problem from the shipped one.
  TempDir out, merged;
  testing::copy_tree(testing::plugin_registry(), merged.path());
  testing::copy_tree(testing::shipped_registry() / "package/benchmarks/bbob", merged.path() / "package/benchmarks/bbob");
  std::vector<std::string> args{testing::cli_path().string(), "run", "--sampler", "samplers/random_plugin",
                                "--problem", "benchmarks/bbob", "--trials", "100", "--out", out.path().string(),
                                "--sampler-set", "stall-after=40", "--registry", merged.path().string(),
                                "--cache-dir", cache.path().string()};
  std::vector<char *> cargv;
  for (auto &a : args) cargv.push_back(a.data());
  cargv.push_back(nullptr);
  const pid_t cli = fork();
  if (cli == 0) {
    const int devnull = open("/dev/null", O_WRONLY);
    dup2(devnull, 1);
    dup2(devnull, 2);
    execv(cargv[0], cargv.data());
    _exit(127);
  }
  const auto journal = out.path() / "journal.ndjson";
  pid_t plugin = -1;
  const auto deadline = Clock::now() + std::chrono::seconds(20);
  while (Clock::now() < deadline) {
    if (plugin < 0) plugin = find_child(cli, "random_sampler.py");
    if (plugin > 0 && fs::exists(journal) && count_lines(journal) >= 1 + 2 * 40) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  if (plugin <= 0) {
    kill(cli, SIGKILL);
    waitpid(cli, nullptr, 0);
    return {false, "plugin process not found"};
  }
  kill(plugin, SIGKILL);
  int status = 0;
  waitpid(cli, &status, 0);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  const auto records = read_journal(journal);
  bool intact = !records.empty() && testing::read_file(journal).back() == '\n';
  for (std::size_t i = 0; i < records.size(); ++i) intact = intact && records[i].verify() && records[i].seq == i;
  std::unique_ptr<Study> replayed;
  try {
    replayed = journal_replay(records);
  } catch (const Error &) {
    intact = false;
  }
  const auto result = json::parse(testing::read_file(out.path() / "result.json"));
  const bool interrupted = result.at("status") == "interrupted";
  return {code == 3 && intact && interrupted,
          "300 clean asks; after kill: exit " + std::to_string(code) + ", " + std::to_string(records.size()) +
              " journal records " + (intact ? "intact" : "damaged")};
}

// 9. Journal file round trip on fuzzed studies.
Verdict journal_round_trip() {
  TempDir dir;
  for (std::uint64_t c = 0; c < 1000; ++c) {
    auto study = testing::random_study(c);
    const auto path = dir.path() / "j.ndjson";
    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      for (const auto &r : study->journal()) out << r.to_line() << '\n';
    }
    const auto records = read_journal(path);
    auto replayed = journal_replay(records);
    std::string why;
    if (!testing::same_study(*study, *replayed, &why)) return {false, "case " + std::to_string(c) + ": " + why};
    if (replayed->journal() != study->journal()) return {false, "case " + std::to_string(c) + ": records differ"};
  }
  return {true, "1000 fuzz cases"};
}

// 10. Catalog search and deterministic rebuild.
Verdict catalog_search() {
  TempDir reg, site1, site2;
  testing::write_catalog_fixture(reg.path(), 20, 1010);
  const auto build = catalog::build_catalog(reg.path());
  if (build.docs.size() != 20 || !build.rejected.empty()) return {false, "fixture did not build"};
  std::vector<testing::OracleDoc> odocs;
  for (const auto &d : build.docs) odocs.push_back({d.ref.str(), d.title, d.summary, d.tags, d.body_text});

  const auto cli = [&](const fs::path &out) {
    return testing::run_command({testing::cli_path().string(), "catalog", "build", "--registry", reg.path().string(),
                                 "--out", out.string()});
  };
  if (cli(site1.path()).exit_code != 0) return {false, "catalog build failed"};
  const auto index = catalog::load_index(site1.path());

  Rng rng(10);
  int nonempty = 0;
  for (int q = 0; q < 100; ++q) {
    const auto query = testing::random_query(rng);
    const auto tags = testing::random_tags(rng);
    std::set<std::string> got, want;
    for (const auto &h : catalog::search(index, query, tags)) got.insert(h.ref);
    for (const auto &h : testing::oracle_search(odocs, query, tags)) want.insert(h.ref);
    if (got != want) return {false, "query '" + query + "' differs from the oracle"};
    nonempty += !got.empty();
  }

  // Rebuild from scratch in another directory and byte-compare every file.
  if (cli(site2.path()).exit_code != 0) return {false, "second build failed"};
  std::size_t files = 0;
  for (const auto &e : fs::recursive_directory_iterator(site1.path())) {
    if (!e.is_regular_file()) continue;
    const auto other = site2.path() / fs::relative(e.path(), site1.path());
    if (!fs::exists(other) || testing::read_file(e.path()) != testing::read_file(other)) {
      return {false, "rebuild differs at " + fs::relative(e.path(), site1.path()).string()};
    }
    ++files;
  }
  return {true, "100 queries (" + std::to_string(nonempty) + " non-empty), " + std::to_string(files) +
                    " files byte-identical on rebuild"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"AC1 quickstart run", quickstart},
      {"AC2 nelder-mead sphere", nelder_mead_sphere},
      {"AC3 sampler ordering", sampler_ordering},
      {"AC4 non-dominated sort", nds_oracle},
      {"AC5 nsga2 hypervolume", nsga2_hypervolume},
      {"AC6 benchmark optima", bbob_optima},
      {"AC7 offline cache", offline_cache},
      {"AC8 plugin sampler", plugin_sampler},
      {"AC9 journal round trip", journal_round_trip},
      {"AC10 catalog search", catalog_search},
  };
  int failed = 0;
  for (const auto &[name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.ok;
    std::printf("%s %s: %s\n", v.ok ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
