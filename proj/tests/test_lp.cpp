#include <doctest.h>

#include <random>
#include <stdexcept>

#include "phieq/lp.hpp"
#include "support/oracles.hpp"
#include "support/random_gen.hpp"

using namespace phieq;
using namespace phieq::testing;

TEST_CASE("one-variable basics") {
  LinearProgram lp = LinearProgram::make(1);
  lp.objective = {1.0};
  lp.lower = {0.0};
  lp.upper = {kInf};
  lp.add_row({1.0}, 1.0);
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.certificate_residual <= 1e-9);
}

TEST_CASE("contradictory constraints are infeasible") {
  LinearProgram lp = LinearProgram::make(1);
  lp.objective = {1.0};
  lp.lower = {1.0};
  lp.upper = {kInf};
  lp.add_row({1.0}, 0.0);  // x <= 0 against x >= 1
  CHECK(lp_solve(lp).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded rays are reported") {
  LinearProgram lp = LinearProgram::make(2);
  lp.objective = {1.0, 1.0};
  lp.lower = {0.0, 0.0};
  lp.upper = {kInf, kInf};
  lp.add_row({1.0, -1.0}, 1.0);
  CHECK(lp_solve(lp).status == LpStatus::Unbounded);
}

TEST_CASE("minimization and free variables") {
  // min x + y with x free, y in [2, 5], x >= y - 3.
  LinearProgram lp = LinearProgram::make(2, /*maximize=*/false);
  lp.objective = {1.0, 1.0};
  lp.lower = {-kInf, 2.0};
  lp.upper = {kInf, 5.0};
  lp.add_row({-1.0, 1.0}, 3.0);
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-9));  // x = -1, y = 2
  CHECK(sol.x[1] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("random boxed programs match vertex enumeration") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);  // 2..4 variables
    const int rows = 2 + static_cast<int>(rng() % 4);
    LinearProgram lp = LinearProgram::make(n, trial % 2 == 0);
    for (int j = 0; j < n; ++j) {
      lp.objective[j] = 2.0 * uniform01(rng) - 1.0;
      lp.lower[j] = 0.0;
      lp.upper[j] = 1.0 + uniform01(rng);
    }
    for (int r = 0; r < rows; ++r) {
      Vec row(n);
      for (double& v : row) v = 2.0 * uniform01(rng) - 1.0;
      lp.add_row(row, 2.0 * uniform01(rng) - 0.5);
    }
    const VertexOracle oracle = enumerate_lp_vertices(lp);
    const LpSolution sol = lp_solve(lp);
    if (!oracle.feasible) {
      CHECK(sol.status == LpStatus::Infeasible);
      continue;
    }
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(oracle.best_value).epsilon(1e-9).scale(1.0));
    CHECK(sol.certificate_residual <= 1e-9);
    ++checked;
  }
  CHECK(checked >= 30);  // most random programs should be feasible
}

TEST_CASE("identical inputs give identical pivots and output") {
  std::mt19937_64 rng(77);
  LinearProgram lp = LinearProgram::make(4);
  for (int j = 0; j < 4; ++j) {
    lp.objective[j] = uniform01(rng);
    lp.lower[j] = 0.0;
    lp.upper[j] = 2.0;
  }
  for (int r = 0; r < 5; ++r) {
    Vec row(4);
    for (double& v : row) v = 2.0 * uniform01(rng) - 1.0;
    lp.add_row(row, uniform01(rng) + 0.2);
  }
  const LpSolution a = lp_solve(lp);
  const LpSolution b = lp_solve(lp);
  REQUIRE(a.status == LpStatus::Optimal);
  CHECK(a.value == b.value);
  CHECK(a.x == b.x);
}

TEST_CASE("equality rows hold at the optimum") {
  LinearProgram lp = LinearProgram::make(3);
  lp.objective = {1.0, 2.0, 3.0};
  for (int j = 0; j < 3; ++j) {
    lp.lower[j] = 0.0;
    lp.upper[j] = 1.0;
  }
  lp.add_eq_row({1.0, 1.0, 1.0}, 1.0);
  const LpSolution sol = lp_solve(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.x[0] + sol.x[1] + sol.x[2] == doctest::Approx(1.0).epsilon(1e-12));
}
