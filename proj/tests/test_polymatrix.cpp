#include <doctest.h>

#include <random>
#include <stdexcept>

#include "phieq/polymatrix.hpp"
#include "support/random_gen.hpp"

using namespace phieq;
using namespace phieq::testing;

namespace {

PolymatrixGame matching_pennies() {
  PolymatrixGame g;
  g.n_players = 2;
  g.k = 2;
  Matrix a(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  Matrix b(2, 2);
  b(0, 1) = 1.0;
  b(1, 0) = 1.0;
  g.edges = {{0, 1, a}, {1, 0, b}};
  g.validate();
  return g;
}

StrategyProfile uniform_profile(int n, int k) {
  StrategyProfile x;
  x.x.assign(n, Vec(k, 1.0 / k));
  return x;
}

}  // namespace

TEST_CASE("matching pennies: uniform play has zero regret") {
  const PolymatrixGame g = matching_pennies();
  const StrategyProfile x = uniform_profile(2, 2);
  CHECK(player_regret(g, x, 0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(player_regret(g, x, 1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(verify_eps_nash(g, x, 0.0).ok);
}

TEST_CASE("pure best responses have zero regret") {
  std::mt19937_64 rng(5);
  const PolymatrixGame g = random_instance(3, 2, 2, 5);
  StrategyProfile x = uniform_profile(3, 2);
  // Player 0 best-responds purely against the fixed opponents.
  Vec value(g.k, 0.0);
  for (const PolymatrixEdge& e : g.edges) {
    if (e.from != 0) continue;
    const Vec v = mat_vec(e.payoff, x.x[e.to]);
    for (int a = 0; a < g.k; ++a) value[a] += v[a];
  }
  int best = 0;
  for (int a = 1; a < g.k; ++a)
    if (value[a] > value[best]) best = a;
  x.x[0].assign(g.k, 0.0);
  x.x[0][best] = 1.0;
  CHECK(player_regret(g, x, 0) == doctest::Approx(0.0).epsilon(1e-14));
  (void)rng;
}

TEST_CASE("regret matches direct enumeration of pure deviations") {
  std::mt19937_64 rng(7);
  // 3-node path graph.
  const PolymatrixGame g = random_instance(3, 2, 2, 7);
  for (int trial = 0; trial < 20; ++trial) {
    StrategyProfile x;
    for (int i = 0; i < 3; ++i) x.x.push_back(random_simplex(rng, 2));
    for (int i = 0; i < 3; ++i) {
      double best = -kInf;
      for (int a = 0; a < g.k; ++a) {
        StrategyProfile dev = x;
        dev.x[i].assign(g.k, 0.0);
        dev.x[i][a] = 1.0;
        best = std::max(best, player_utility(g, dev, i));
      }
      const double direct = best - player_utility(g, x, i);
      CHECK(player_regret(g, x, i) == doctest::Approx(direct).epsilon(1e-12));
      CHECK(player_regret(g, x, i) >= -1e-12);
    }
  }
}

TEST_CASE("verify_eps_nash is monotone in eps") {
  std::mt19937_64 rng(9);
  const PolymatrixGame g = random_instance(4, 2, 3, 9);
  StrategyProfile x;
  for (int i = 0; i < 4; ++i) x.x.push_back(random_simplex(rng, 2));
  const NashReport strict = verify_eps_nash(g, x, 0.0);
  const NashReport mid = verify_eps_nash(g, x, 0.1);
  const NashReport loose = verify_eps_nash(g, x, 0.5);
  CHECK(mid.max_regret == doctest::Approx(strict.max_regret));
  if (strict.ok) CHECK(mid.ok);
  if (mid.ok) CHECK(loose.ok);
  CHECK(verify_eps_nash(g, x, 2.0).ok);  // payoffs are bounded by deg <= 3
}

TEST_CASE("regret is invariant under constant shifts of a player's matrices") {
  std::mt19937_64 rng(13);
  PolymatrixGame g = random_instance(3, 3, 2, 13);
  // Squeeze entries into [0.2, 0.6] so a +0.3 shift stays in range.
  for (PolymatrixEdge& e : g.edges)
    for (double& v : e.payoff.data) v = 0.2 + 0.4 * v;
  StrategyProfile x;
  for (int i = 0; i < 3; ++i) x.x.push_back(random_simplex(rng, 3));
  const double before = player_regret(g, x, 1);
  for (PolymatrixEdge& e : g.edges)
    if (e.from == 1)
      for (double& v : e.payoff.data) v += 0.3;
  g.validate();
  CHECK(player_regret(g, x, 1) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("random_instance: forced topology, determinism, invariants") {
  const PolymatrixGame forced = random_instance(2, 2, 1, 0);
  CHECK(forced.edges.size() == 2);
  CHECK(forced.degree() == 1);

  const PolymatrixGame a = random_instance(4, 2, 3, 7);
  const PolymatrixGame b = random_instance(4, 2, 3, 7);
  REQUIRE(a.edges.size() == b.edges.size());
  for (size_t i = 0; i < a.edges.size(); ++i) {
    CHECK(a.edges[i].from == b.edges[i].from);
    CHECK(a.edges[i].to == b.edges[i].to);
    CHECK(a.edges[i].payoff.data == b.edges[i].payoff.data);
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PolymatrixGame g = random_instance(5, 3, 3, seed);
    CHECK_NOTHROW(g.validate());
    CHECK(g.degree() <= 3);
  }

  CHECK_THROWS_AS(random_instance(3, 2, 3, 0), std::invalid_argument);
}

TEST_CASE("brute_force_nash: matching pennies and dominance") {
  const PolymatrixGame mp = matching_pennies();
  const GridSearchResult res = brute_force_nash(mp, 10);
  CHECK(res.max_regret <= 0.1);
  CHECK(linf_dist(res.profile.x[0], Vec{0.5, 0.5}) < 1e-12);
  CHECK(linf_dist(res.profile.x[1], Vec{0.5, 0.5}) < 1e-12);

  // Action 0 strictly dominates for both players.
  PolymatrixGame dom;
  dom.n_players = 2;
  dom.k = 2;
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 1.0;
  m(1, 0) = 0.0;
  m(1, 1) = 0.0;
  dom.edges = {{0, 1, m}, {1, 0, m}};
  dom.validate();
  const GridSearchResult pure = brute_force_nash(dom, 10);
  CHECK(pure.max_regret == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(pure.profile.x[0][0] == doctest::Approx(1.0));
  CHECK(pure.profile.x[1][0] == doctest::Approx(1.0));
}

TEST_CASE("brute_force_nash: random 3-node game reaches the grid bound") {
  const PolymatrixGame g = random_instance(3, 2, 2, 21);
  const GridSearchResult res = brute_force_nash(g, 20);
  CHECK(res.max_regret <= 0.15);
  CHECK_NOTHROW(res.profile.validate(1e-12));
}

TEST_CASE("brute_force_nash enforces its budget") {
  const PolymatrixGame g = random_instance(5, 3, 3, 2);
  CHECK_THROWS_AS(brute_force_nash(g, 200, /*budget=*/1000), std::invalid_argument);
}
