#include <doctest.h>

#include <random>
#include <stdexcept>

#include "phieq/equilibrium.hpp"
#include "phieq/game_ops.hpp"
#include "phieq/reduction.hpp"
#include "support/random_gen.hpp"

using namespace phieq;
using namespace phieq::testing;

namespace {

FactoredGame dense_matching_pennies() {
  FactoredGame g;
  g.n_players = 2;
  g.n_actions = 2;
  g.dense_utilities = std::vector<Vec>{{1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 1.0, 0.0}};
  g.costs.assign(2, {});
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("deviation polytopes: canonical members") {
  std::mt19937_64 rng(67);
  for (int l = 2; l <= 4; ++l) {
    const DeviationPolytope ce = DeviationPolytope::ce(l);
    const DeviationPolytope cce = DeviationPolytope::cce(l);
    CHECK(ce.contains(Matrix::identity(l)));
    CHECK_FALSE(cce.contains(Matrix::identity(l)));
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix constant = Matrix::constant_rows(random_simplex(rng, l));
      CHECK(ce.contains(constant));
      CHECK(cce.contains(constant));
      const Matrix any = random_stochastic_matrix(rng, l);
      CHECK(ce.contains(any));
    }
  }
}

TEST_CASE("unconstrained CCE best response equals the pure best response") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 15; ++trial) {
    const FactoredGame g = random_dense_game(rng, 2, 3);
    const MixtureStrategy z = random_mixture(rng, 2, 3, 3);
    for (int i = 0; i < 2; ++i) {
      const SafeBestResponse sbr =
          safe_best_response(g, i, z, DeviationPolytope::cce(3));
      REQUIRE(sbr.status == SafeBestResponse::Status::Found);
      // Direct enumeration of pure deviations against the other marginal.
      double best = -kInf;
      for (int a = 0; a < 3; ++a) {
        Vec row(3, 0.0);
        row[a] = 1.0;
        const MixtureStrategy dev =
            apply_deviation(Matrix::constant_rows(row), i, z);
        best = std::max(best, expected_utility(g, i, dev));
      }
      CHECK(sbr.value == doctest::Approx(best).epsilon(1e-9));
    }
  }
}

TEST_CASE("left players in reduced instances can only mirror the right marginal") {
  std::mt19937_64 rng(73);
  const PolymatrixGame g = random_instance(2, 2, 1, 73);
  const ConstrainedInstance inst = reduce(g, 0.8);
  for (int trial = 0; trial < 10; ++trial) {
    const MixtureStrategy z = random_mixture(rng, 4, 2, 2);
    for (int v = 0; v < 2; ++v) {
      const int right[1] = {inst.right_index[v]};
      const Vec target = marginalize(z, right);
      const SafeBestResponse sbr =
          safe_best_response(inst.game, inst.left_index[v], z, inst.deviations);
      REQUIRE(sbr.status == SafeBestResponse::Status::Found);
      // The deviated marginal must equal the right copy's marginal exactly.
      const MixtureStrategy dev = apply_deviation(sbr.phi, inst.left_index[v], z);
      const int left[1] = {inst.left_index[v]};
      CHECK(linf_dist(marginalize(dev, left), target) <= 1e-8);
    }
  }
}

TEST_CASE("a cost forbidding an action forces zero probability on it") {
  // 2 players, 2 actions; player 0 pays +1 whenever it plays action 0.
  FactoredGame g;
  g.n_players = 2;
  g.n_actions = 2;
  g.dense_utilities = std::vector<Vec>{{1.0, 1.0, 0.0, 0.0}, {0.5, 0.5, 0.5, 0.5}};
  g.costs.assign(2, {});
  PairCost forbid{0, 1, Matrix(2, 2)};
  forbid.payoff(0, 0) = 1.0;
  forbid.payoff(0, 1) = 1.0;
  g.costs[0].push_back(forbid);
  g.validate();

  const MixtureStrategy z = MixtureStrategy::uniform_product(2, 2);
  const SafeBestResponse sbr = safe_best_response(g, 0, z, DeviationPolytope::cce(2));
  REQUIRE(sbr.status == SafeBestResponse::Status::Found);
  // Both candidate pure rows: action 0 is profitable but unsafe.
  CHECK(sbr.phi(0, 0) <= 1e-9);
  CHECK(sbr.phi(1, 0) <= 1e-9);
  CHECK(sbr.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("custom polytope rows constrain the best response") {
  // CE deviations with one extra row phi(0,0) <= 0.25.
  Matrix a(1, 4);
  a(0, 0) = 1.0;
  const DeviationPolytope capped = DeviationPolytope::custom(2, a, Vec{0.25});
  std::mt19937_64 rng(101);
  const FactoredGame g = random_dense_game(rng, 2, 2);
  const MixtureStrategy z = random_mixture(rng, 2, 2, 2);
  const SafeBestResponse sbr = safe_best_response(g, 0, z, capped);
  REQUIRE(sbr.status == SafeBestResponse::Status::Found);
  CHECK(sbr.phi(0, 0) <= 0.25 + 1e-9);
  // The cap can only lower the value relative to unconstrained CE.
  const SafeBestResponse free_sbr = safe_best_response(g, 0, z, DeviationPolytope::ce(2));
  REQUIRE(free_sbr.status == SafeBestResponse::Status::Found);
  CHECK(sbr.value <= free_sbr.value + 1e-9);
}

TEST_CASE("no safe deviation is surfaced as a promise violation") {
  // A constant positive cost can never be satisfied at zero slack.
  FactoredGame g;
  g.n_players = 2;
  g.n_actions = 2;
  g.dense_utilities = std::vector<Vec>{{0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5}};
  g.costs.assign(2, {});
  PairCost always{0, 1, Matrix(2, 2, 1.0)};
  g.costs[0].push_back(always);
  g.validate();
  const MixtureStrategy z = MixtureStrategy::uniform_product(2, 2);
  const SafeBestResponse sbr = safe_best_response(g, 0, z, DeviationPolytope::cce(2));
  CHECK(sbr.status == SafeBestResponse::Status::NoSafeDeviation);
  const EquilibriumReport report =
      verify_constrained_equilibrium(g, z, DeviationPolytope::cce(2), 1.0, 1.0);
  CHECK(report.verdict == Verdict::PromiseViolation);
}

TEST_CASE("verifier on constructed positives and negatives") {
  const FactoredGame mp = dense_matching_pennies();

  // Uniform correlated play in matching pennies has zero CCE regret.
  const MixtureStrategy uniform = MixtureStrategy::uniform_product(2, 2);
  const EquilibriumReport pass =
      verify_constrained_equilibrium(mp, uniform, DeviationPolytope::cce(2), 0.0, 0.0);
  CHECK(pass.verdict == Verdict::Pass);
  CHECK(pass.max_regret <= 1e-9);

  // A point mass where player 1 strictly improves by switching.
  const int prof[2] = {0, 0};  // player 1 would rather play 1 against 0
  const MixtureStrategy pm = MixtureStrategy::point_mass(prof, 2);
  const EquilibriumReport fail =
      verify_constrained_equilibrium(mp, pm, DeviationPolytope::cce(2), 0.5, 0.5);
  CHECK(fail.verdict == Verdict::Fail);
  CHECK(fail.players[1].regret == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("verdicts are monotone in eps and nu") {
  std::mt19937_64 rng(79);
  const FactoredGame g = random_dense_game(rng, 2, 2, 1);
  const MixtureStrategy z = random_mixture(rng, 2, 2, 2);
  const DeviationPolytope cce = DeviationPolytope::cce(2);
  bool previous = false;
  for (double level : {0.0, 0.25, 0.5, 1.0, 2.0}) {
    const EquilibriumReport r = verify_constrained_equilibrium(g, z, cce, level, level);
    if (r.verdict == Verdict::PromiseViolation) continue;
    if (previous) CHECK(r.ok());
    previous = r.ok();
  }
}

TEST_CASE("identity deviation bounds the safe best response from below") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    const FactoredGame g = random_dense_game(rng, 3, 2);  // no costs: identity safe
    const MixtureStrategy z = random_mixture(rng, 3, 2, 2);
    for (int i = 0; i < 3; ++i) {
      const SafeBestResponse sbr = safe_best_response(g, i, z, DeviationPolytope::ce(2));
      REQUIRE(sbr.status == SafeBestResponse::Status::Found);
      CHECK(sbr.value >= expected_utility(g, i, z) - 1e-9);
    }
  }
}

TEST_CASE("cce_feasibility_lp on matching pennies and dominance") {
  const FactoredGame mp = dense_matching_pennies();
  const MixtureStrategy z = cce_feasibility_lp(mp);
  const EquilibriumReport report =
      verify_constrained_equilibrium(mp, z, DeviationPolytope::cce(2), 0.0, kInf);
  CHECK(report.verdict == Verdict::Pass);
  CHECK(report.max_regret <= 1e-9);

  FactoredGame dom;
  dom.n_players = 2;
  dom.n_actions = 2;
  dom.dense_utilities =
      std::vector<Vec>{{1.0, 1.0, 0.0, 0.0}, {1.0, 0.0, 1.0, 0.0}};
  dom.costs.assign(2, {});
  dom.validate();
  const MixtureStrategy zd = cce_feasibility_lp(dom);
  const EquilibriumReport rd =
      verify_constrained_equilibrium(dom, zd, DeviationPolytope::cce(2), 0.0, kInf);
  CHECK(rd.verdict == Verdict::Pass);
  // The dominant profile carries all mass.
  double dominant_mass = 0.0;
  for (const MixtureComponent& c : zd.components) {
    if (c.marginals[0][0] > 0.99 && c.marginals[1][0] > 0.99) dominant_mass += c.weight;
  }
  CHECK(dominant_mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cce_feasibility_lp self-certifies on random bimatrix games") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 10; ++trial) {
    const FactoredGame g = random_dense_game(rng, 2, 3);
    const MixtureStrategy z = cce_feasibility_lp(g);
    CHECK(static_cast<int>(z.components.size()) <= 9);
    const EquilibriumReport report =
        verify_constrained_equilibrium(g, z, DeviationPolytope::cce(3), 1e-9, kInf);
    CHECK(report.verdict == Verdict::Pass);
  }
}
