#pragma once

#include <cstdint>
#include <vector>

#include "phieq/linalg.hpp"

namespace phieq {

struct PolymatrixEdge {
  int from = 0;
  int to = 0;
  Matrix payoff;  // k x k, entries in [0, 1], rows indexed by a_from
};

// A polymatrix game on a graph: each player's utility is the sum of bimatrix
// payoffs over its outgoing edges. The directed edge list is closed under
// reversal, with an independent matrix per direction.
class PolymatrixGame {
 public:
  int n_players = 0;
  int k = 0;  // actions per player
  std::vector<PolymatrixEdge> edges;

  void validate() const;

  // Max undirected degree, cached after first call.
  int degree() const;

  // Indices into `edges` of player's outgoing edges.
  std::vector<int> outgoing(int player) const;

 private:
  mutable int cached_degree_ = -1;
};

struct StrategyProfile {
  std::vector<Vec> x;  // x[i] in the k-simplex

  int n_players() const { return static_cast<int>(x.size()); }
  void validate(double tol = 1e-12) const;
};

double player_utility(const PolymatrixGame& g, const StrategyProfile& x, int player);

// Best pure-action value minus the current value. Pure deviations suffice by
// linearity of the deviation payoff in the deviating strategy.
double player_regret(const PolymatrixGame& g, const StrategyProfile& x, int player);

struct NashReport {
  bool ok = false;
  Vec regrets;
  double max_regret = 0.0;
  double eps = 0.0;
  double tol = 0.0;
};

NashReport verify_eps_nash(const PolymatrixGame& g, const StrategyProfile& x,
                           double eps, double tol = 1e-9);

// Deterministic random instance: uniform [0,1] payoff entries, undirected
// degree bounded by max_degree, isolated vertices connected where the degree
// budget allows. Requires max_degree < n.
PolymatrixGame random_instance(int n, int k, int max_degree, std::uint64_t seed);

struct GridSearchResult {
  StrategyProfile profile;
  double max_regret = 0.0;
  std::int64_t evaluated = 0;
};

// Exhaustive search over per-player simplex grids with the given resolution,
// returning the profile minimizing the max player regret. The reported regret
// exceeds the best profile's by at most about k*n/resolution (each player's
// payoff moves by at most the l1 rounding error of each neighbor, so rounding
// a true equilibrium onto the grid costs O(k/resolution) per incident edge).
// Throws when the grid size exceeds `budget`.
GridSearchResult brute_force_nash(const PolymatrixGame& g, int resolution = 20,
                                  std::int64_t budget = 20'000'000);

}  // namespace phieq
