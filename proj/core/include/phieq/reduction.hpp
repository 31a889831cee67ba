#pragma once

#include <span>
#include <utility>
#include <vector>

#include "phieq/deviation.hpp"
#include "phieq/game.hpp"
#include "phieq/mixture.hpp"
#include "phieq/polymatrix.hpp"

namespace phieq {

// The compiled constrained-equilibrium instance for a polymatrix game: a
// bipartite two-team zero-sum game over left/right copies of every source
// player, CCE deviations, and 2k coupling costs per left player that force
// its marginal to track the right copy's marginal.
struct ConstrainedInstance {
  FactoredGame game;  // 2n players, k actions each, edge-factored utilities
  DeviationPolytope deviations;
  double eps_prime = 0.0;
  double nu = 0.0;
  std::vector<int> left_index;   // source vertex v -> left player index
  std::vector<int> right_index;  // source vertex v -> right player index
  PolymatrixGame source;
  double source_eps = 0.0;

  int source_players() const { return source.n_players; }
};

// Builds the constrained instance for (g, eps): left player v gets utility
// -sum_{(v,j) in E} (A^{j,v})^T (a_vL, a_jR), right player v gets
// +sum_{(v,j) in E} A^{v,j} (a_vR, a_jL), eps_prime = eps/4n and
// nu = eps/(2 n k deg). Cost j of left player v (targets t = j mod k) pays +1
// on {a_vL = t, a_vR != t} and -1 on {a_vR = t, a_vL != t} for j < k, with
// signs flipped for j >= k.
ConstrainedInstance reduce(const PolymatrixGame& g, double eps);

// Team sums (u_L, u_R) for one action profile of the reduced game.
std::pair<double, double> team_utilities(const ConstrainedInstance& inst,
                                         std::span<const int> profile);

// Exact mode: error-free accumulation of u_L + u_R; true iff the sum is
// exactly zero.
bool team_zero_sum_exact(const ConstrainedInstance& inst, std::span<const int> profile);

// Recovers a source-game profile from a correlated strategy of the reduced
// instance by taking every right copy's marginal.
StrategyProfile extract_nash(const ConstrainedInstance& inst, const MixtureStrategy& z);

// Converse map for testing: the single product strategy with both copies of
// every player playing x_i. All coupling costs vanish, so it is 0-safe, and
// its safe-deviation regret equals the source regret of x.
MixtureStrategy witness_from_nash(const ConstrainedInstance& inst, const StrategyProfile& x);

}  // namespace phieq
