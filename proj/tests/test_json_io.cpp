#include <doctest.h>

#include <random>

#include "phieq/json_io.hpp"
#include "phieq/reduction.hpp"
#include "support/random_gen.hpp"

using namespace phieq;
using namespace phieq::testing;

TEST_CASE("polymatrix games round trip and serialize deterministically") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const PolymatrixGame g = random_instance(4, 3, 2, seed);
    const std::string text = polymatrix_to_json(g);
    CHECK(text == polymatrix_to_json(g));
    // Parse-serialize fixpoint: the wire format is canonical.
    CHECK(polymatrix_to_json(polymatrix_from_json(text)) == text);
    const PolymatrixGame back = polymatrix_from_json(text);
    CHECK(back.n_players == g.n_players);
    CHECK(back.k == g.k);
    REQUIRE(back.edges.size() == g.edges.size());
    for (size_t i = 0; i < g.edges.size(); ++i)
      CHECK(back.edges[i].payoff.data == g.edges[i].payoff.data);
  }
}

TEST_CASE("factored games with costs round trip") {
  std::mt19937_64 rng(9);
  const FactoredGame g = random_dense_game(rng, 3, 2, 2);
  const FactoredGame back = game_from_json(game_to_json(g));
  CHECK(back.n_players == g.n_players);
  CHECK(*back.dense_utilities == *g.dense_utilities);
  REQUIRE(back.costs.size() == g.costs.size());
  for (int i = 0; i < 3; ++i) {
    REQUIRE(back.costs[i].size() == g.costs[i].size());
    for (size_t j = 0; j < g.costs[i].size(); ++j)
      CHECK(std::get<DenseCost>(back.costs[i][j]).values ==
            std::get<DenseCost>(g.costs[i][j]).values);
  }
}

TEST_CASE("mixtures round trip") {
  std::mt19937_64 rng(11);
  const MixtureStrategy z = random_mixture(rng, 3, 3, 4);
  const MixtureStrategy back = mixture_from_json(mixture_to_json(z));
  REQUIRE(back.components.size() == z.components.size());
  for (size_t c = 0; c < z.components.size(); ++c) {
    CHECK(back.components[c].weight == z.components[c].weight);
    CHECK(back.components[c].marginals == z.components[c].marginals);
  }
}

TEST_CASE("constrained instances round trip with edge utilities intact") {
  const PolymatrixGame g = random_instance(3, 2, 2, 5);
  const ConstrainedInstance inst = reduce(g, 0.9);
  const std::string text = instance_to_json(inst);
  CHECK(looks_like_instance(text));
  CHECK_FALSE(looks_like_instance(polymatrix_to_json(g)));
  const ConstrainedInstance back = instance_from_json(text);
  CHECK(back.eps_prime == inst.eps_prime);
  CHECK(back.nu == inst.nu);
  CHECK(back.left_index == inst.left_index);
  CHECK(back.right_index == inst.right_index);
  CHECK(back.game.n_players == inst.game.n_players);
  REQUIRE(back.game.has_edges());
  REQUIRE(back.game.edge_utilities->size() == inst.game.edge_utilities->size());
  for (size_t e = 0; e < inst.game.edge_utilities->size(); ++e)
    CHECK((*back.game.edge_utilities)[e].payoff.data ==
          (*inst.game.edge_utilities)[e].payoff.data);
  CHECK(back.source.edges.size() == inst.source.edges.size());
  // The declared utility range survives the round trip.
  CHECK(back.game.utility_lo == inst.game.utility_lo);
  CHECK(back.game.utility_hi == inst.game.utility_hi);
}

TEST_CASE("qvi instances serialize and rebuild with matching parameters") {
  const PolymatrixGame g = random_instance(2, 2, 1, 13);
  const ConstrainedInstance red = reduce(g, 0.8);
  const QviInstance inst = build_qvi(red.game, red.eps_prime, red.nu);
  const std::string text = qvi_instance_to_json(inst);
  const QviInstance back = qvi_instance_from_json(text);
  CHECK(back.d == inst.d);
  CHECK(back.eps_prime == inst.eps_prime);
  CHECK(back.nu_prime == inst.nu_prime);
  CHECK(back.lipschitz_g == inst.lipschitz_g);
  CHECK(qvi_instance_to_json(back) == text);

  QviSolution sol;
  sol.z = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  sol.gap = -0.001;
  sol.certified = true;
  sol.method = "start";
  sol.trace.push_back({0, -0.001, true});
  const std::string sol_text = qvi_solution_to_json(sol);
  CHECK(sol_text.find("\"certified\": true") != std::string::npos);
  CHECK(sol_text.find("\"trace\"") != std::string::npos);
}

TEST_CASE("parser rejects malformed documents") {
  CHECK_THROWS(polymatrix_from_json("{\"k\": 2}"));
  CHECK_THROWS(game_from_json("{\"players\": 1}"));
  CHECK_THROWS(mixture_from_json("{\"components\": [{\"w\": 1.0, \"marginals\": [[0.4, 0.4]]}]}"));
}
