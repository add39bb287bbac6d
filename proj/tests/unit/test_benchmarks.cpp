#include <doctest.h>

#include <cmath>

#include "bbohub/benchmarks/bbob.hpp"
#include "bbohub/benchmarks/bi_sphere.hpp"
#include "bbohub/core/error.hpp"
#include "bbohub/core/random.hpp"
#include "../support/oracles.hpp"

using namespace bbohub;
using namespace bbohub::benchmarks;

namespace {

template <class F>
Errc error_code_of(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected bbohub::Error");
  return Errc::io;
}

}  // namespace

TEST_CASE("hand-computed values at instance 0") {
  const std::vector<double> p12{1, 2};
  CHECK(BbobFunction({1, 2, 0})(p12) == doctest::Approx(5.0));
  const std::vector<double> ones{1, 1, 1};
  CHECK(BbobFunction({2, 3, 0})(ones) == doctest::Approx(1.0 + 1e3 + 1e6));
  const std::vector<double> half{0.5};
  CHECK(BbobFunction({3, 1, 0})(half) == doctest::Approx(20.25));
  // Rosenbrock is shifted so its optimum is the origin: x = -1 is z = 0.
  const std::vector<double> minus{-1, -1};
  CHECK(BbobFunction({8, 2, 0})(minus) == doctest::Approx(1.0));
  const std::vector<double> origin{0, 0};
  CHECK(BbobFunction({8, 2, 0})(origin) == 0.0);
}

TEST_CASE("optimum is attained and never beaten") {
  Rng rng(123);
  for (int fid : kSupportedFunctions) {
    for (int dim = 1; dim <= 10; ++dim) {
      for (int inst = 0; inst <= 5; ++inst) {
        const BbobFunction f({fid, dim, inst});
        CAPTURE(fid);
        CAPTURE(dim);
        CAPTURE(inst);
        if (inst == 0) {
          CHECK(f.optimal_value() == 0.0);
          for (double x : f.optimum()) CHECK(x == 0.0);
        }
        for (double x : f.optimum()) {
          CHECK(x >= -5.0);
          CHECK(x <= 5.0);
        }
        CHECK(std::abs(f(f.optimum()) - f.optimal_value()) <= 1e-9);
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (int k = 0; k < 1000; ++k) {
          for (auto &v : x) v = rng.uniform(-5.0, 5.0);
          REQUIRE(f(x) >= f.optimal_value());
        }
      }
    }
  }
}

TEST_CASE("instances are deterministic and distinct") {
  const BbobFunction a({3, 4, 2}), b({3, 4, 2}), c({3, 4, 3});
  CHECK(a.optimum() == b.optimum());
  CHECK(a.optimal_value() == b.optimal_value());
  CHECK(a.optimum() != c.optimum());
}

TEST_CASE("BenchmarkSpec validation") {
  try {
    make_bbob({5, 2, 0});
    FAIL("expected unsupported");
  } catch (const Error &e) {
    CHECK(e.code() == Errc::unsupported);
    CHECK(std::string(e.what()).find("1, 2, 3, 8") != std::string::npos);
  }
  CHECK(error_code_of([] { make_bbob({1, 0, 0}); }) == Errc::validation);
  CHECK(error_code_of([] { make_bbob({1, 2, -1}); }) == Errc::validation);
  CHECK(error_code_of([] { make_bi_sphere(0, 1.0); }) == Errc::validation);
  CHECK(error_code_of([] { make_bi_sphere(2, 0.0); }) == Errc::validation);
}

TEST_CASE("problem wrapper checks params") {
  auto p = make_bbob({1, 2, 0});
  CHECK(p->search_space().size() == 2);
  CHECK(p->evaluate(point_to_params(std::vector<double>{3, 4}))[0] == doctest::Approx(25.0));
  CHECK(error_code_of([&] { p->evaluate(point_to_params(std::vector<double>{6, 0})); }) == Errc::validation);
  CHECK(error_code_of([&] { p->evaluate(point_to_params(std::vector<double>{1})); }) == Errc::validation);
}

TEST_CASE("parallel batch evaluation equals the serial reference") {
  Rng rng(9);
  for (int fid : kSupportedFunctions) {
    const BbobFunction f({fid, 7, 3});
    std::vector<std::vector<double>> pts(5000, std::vector<double>(7));
    for (auto &p : pts) {
      for (auto &v : p) v = rng.uniform(-5, 5);
    }
    CHECK(evaluate_batch(f, pts) == evaluate_batch_serial(f, pts));
  }
  const BbobFunction f({1, 2, 0});
  CHECK(evaluate_batch(f, std::vector<std::vector<double>>{}).empty());
}

TEST_CASE("bi-sphere: points on the segment are never dominated") {
  Rng rng(10);
  for (int dim : {1, 2, 5}) {
    const BiSphereProblem p(dim, 1.0);
    const std::vector<Direction> dirs{Direction::minimize, Direction::minimize};
    for (int k = 0; k < 1000; ++k) {
      const double t = rng.uniform(-1.0, 1.0);
      const std::vector<double> on(static_cast<std::size_t>(dim), t);
      std::vector<double> off(static_cast<std::size_t>(dim));
      for (auto &v : off) v = rng.uniform(-5, 5);
      CHECK_FALSE(testing::oracle_dominates(p.values_at(off), p.values_at(on), dirs));
    }
    const std::vector<double> a(static_cast<std::size_t>(dim), 1.0);
    CHECK(p.values_at(a)[0] == 0.0);
    CHECK(p.values_at(a)[1] == doctest::Approx(4.0 * dim));
  }
}
