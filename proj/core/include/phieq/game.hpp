#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "phieq/linalg.hpp"
#include "phieq/profiles.hpp"

namespace phieq {

// Payoff matrix attached to a directed edge. The owner is `from`, and
// payoff(a_from, a_to) is added to the owner's utility.
struct EdgePayoff {
  int from = 0;
  int to = 0;
  Matrix payoff;
};

// One cost term of a player. Dense terms tabulate every action profile;
// pair terms depend only on the actions of the declared pair (p, q),
// with value payoff(a_p, a_q).
struct DenseCost {
  Vec values;
};
struct PairCost {
  int p = 0;
  int q = 0;
  Matrix payoff;
};
using CostTerm = std::variant<DenseCost, PairCost>;

// An n-player game with l actions per player. Utilities are stored either as
// per-player dense tables over all l^n profiles, or edge-factored as sums of
// pairwise payoff matrices over the player's outgoing edges (or both, in
// which case they must agree). Each player additionally carries a list of
// cost terms with values in [-1, 1].
//
// Utilities lie in the declared range [utility_lo, utility_hi]; the default
// is [0, 1]. Edge-factored games declare a range wide enough that every
// profile sum stays inside it.
class FactoredGame {
 public:
  int n_players = 0;
  int n_actions = 0;
  double utility_lo = 0.0;
  double utility_hi = 1.0;
  std::optional<std::vector<Vec>> dense_utilities;  // [player][profile index]
  std::optional<std::vector<EdgePayoff>> edge_utilities;
  std::vector<std::vector<CostTerm>> costs;  // [player][term]

  ProfileIndexer indexer() const { return ProfileIndexer(n_players, n_actions); }
  bool has_dense() const { return dense_utilities.has_value(); }
  bool has_edges() const { return edge_utilities.has_value(); }
  int n_costs(int player) const { return static_cast<int>(costs[player].size()); }
  int max_costs() const;
  bool has_costs() const;

  double utility_at(int player, std::span<const int> profile) const;
  double cost_at(int player, int j, std::span<const int> profile) const;

  // Throws std::invalid_argument when structure, ranges, or caps are violated.
  void validate(double tol = 1e-9) const;

  // Copy with dense utilities materialized from the edge representation.
  // Requires the profile space to fit under the dense cell cap.
  FactoredGame with_dense_utilities() const;
};

}  // namespace phieq
