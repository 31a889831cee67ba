#include "phieq/game_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace phieq {

namespace {

void check_blocks(const FactoredGame& g, std::span<const Vec> blocks) {
  if (static_cast<int>(blocks.size()) != g.n_players)
    throw std::invalid_argument("blocks do not match the player count");
  for (const Vec& b : blocks)
    if (static_cast<int>(b.size()) != g.n_actions)
      throw std::invalid_argument("block does not match the action count");
}

void check_mixture(const FactoredGame& g, const MixtureStrategy& z) {
  if (z.n_players() != g.n_players || z.n_actions() != g.n_actions)
    throw std::invalid_argument("mixture does not match the game dimensions");
}

// Product of the l1 masses of all blocks except the listed two (pass -1 to
// skip the exclusion).
double mass_except(std::span<const Vec> blocks, int skip1, int skip2) {
  double acc = 1.0;
  for (int k = 0; k < static_cast<int>(blocks.size()); ++k) {
    if (k == skip1 || k == skip2) continue;
    acc *= sum(blocks[k]);
  }
  return acc;
}

double dense_product_expectation(const FactoredGame& g, const Vec& table,
                                 std::span<const Vec> blocks) {
  const ProfileIndexer ix = g.indexer();
  std::vector<int> prof(g.n_players);
  double acc = 0.0;
  for (std::int64_t idx = 0; idx < ix.size(); ++idx) {
    const double v = table[idx];
    if (v == 0.0) continue;
    ix.decode(idx, prof);
    double w = 1.0;
    for (int kk = 0; kk < g.n_players; ++kk) w *= blocks[kk][prof[kk]];
    acc += v * w;
  }
  return acc;
}

Vec dense_action_gradient(const FactoredGame& g, int player, const Vec& table,
                          std::span<const Vec> blocks) {
  const ProfileIndexer ix = g.indexer();
  std::vector<int> prof(g.n_players);
  Vec grad(g.n_actions, 0.0);
  for (std::int64_t idx = 0; idx < ix.size(); ++idx) {
    const double v = table[idx];
    if (v == 0.0) continue;
    ix.decode(idx, prof);
    double w = 1.0;
    for (int kk = 0; kk < g.n_players; ++kk)
      if (kk != player) w *= blocks[kk][prof[kk]];
    grad[prof[player]] += v * w;
  }
  return grad;
}

}  // namespace

double product_expected_utility(const FactoredGame& g, int player,
                                std::span<const Vec> blocks) {
  if (player < 0 || player >= g.n_players)
    throw std::invalid_argument("player index out of range");
  check_blocks(g, blocks);
  if (g.has_edges()) {
    double acc = 0.0;
    for (const EdgePayoff& e : *g.edge_utilities) {
      if (e.from != player) continue;
      const Vec my = mat_vec(e.payoff, blocks[e.to]);
      acc += dot(blocks[player], my) * mass_except(blocks, e.from, e.to);
    }
    return acc;
  }
  return dense_product_expectation(g, (*g.dense_utilities)[player], blocks);
}

double product_expected_cost(const FactoredGame& g, int player, int j,
                             std::span<const Vec> blocks) {
  if (player < 0 || player >= g.n_players)
    throw std::invalid_argument("player index out of range");
  if (j < 0 || j >= g.n_costs(player))
    throw std::invalid_argument("cost index out of range");
  check_blocks(g, blocks);
  const CostTerm& term = g.costs[player][j];
  if (const auto* dense = std::get_if<DenseCost>(&term))
    return dense_product_expectation(g, dense->values, blocks);
  const auto& pair = std::get<PairCost>(term);
  const Vec my = mat_vec(pair.payoff, blocks[pair.q]);
  return dot(blocks[pair.p], my) * mass_except(blocks, pair.p, pair.q);
}

Vec utility_action_gradient(const FactoredGame& g, int player,
                            std::span<const Vec> blocks) {
  if (player < 0 || player >= g.n_players)
    throw std::invalid_argument("player index out of range");
  check_blocks(g, blocks);
  if (g.has_edges()) {
    Vec grad(g.n_actions, 0.0);
    for (const EdgePayoff& e : *g.edge_utilities) {
      if (e.from != player) continue;
      const Vec my = mat_vec(e.payoff, blocks[e.to]);
      const double scale = mass_except(blocks, e.from, e.to);
      for (int a = 0; a < g.n_actions; ++a) grad[a] += scale * my[a];
    }
    return grad;
  }
  return dense_action_gradient(g, player, (*g.dense_utilities)[player], blocks);
}

Vec cost_action_gradient(const FactoredGame& g, int player, int j,
                         std::span<const Vec> blocks) {
  if (player < 0 || player >= g.n_players)
    throw std::invalid_argument("player index out of range");
  if (j < 0 || j >= g.n_costs(player))
    throw std::invalid_argument("cost index out of range");
  check_blocks(g, blocks);
  const CostTerm& term = g.costs[player][j];
  if (const auto* dense = std::get_if<DenseCost>(&term))
    return dense_action_gradient(g, player, dense->values, blocks);

  const auto& pair = std::get<PairCost>(term);
  Vec grad(g.n_actions, 0.0);
  if (pair.p == player) {
    const Vec my = mat_vec(pair.payoff, blocks[pair.q]);
    const double scale = mass_except(blocks, pair.p, pair.q);
    for (int a = 0; a < g.n_actions; ++a) grad[a] = scale * my[a];
  } else if (pair.q == player) {
    const Vec my = mat_tvec(pair.payoff, blocks[pair.p]);
    const double scale = mass_except(blocks, pair.p, pair.q);
    for (int a = 0; a < g.n_actions; ++a) grad[a] = scale * my[a];
  } else {
    // The cost does not involve this player: the gradient is constant.
    const Vec my = mat_vec(pair.payoff, blocks[pair.q]);
    double c0 = dot(blocks[pair.p], my);
    double scale = 1.0;
    for (int k = 0; k < g.n_players; ++k)
      if (k != pair.p && k != pair.q && k != player) scale *= sum(blocks[k]);
    grad.assign(g.n_actions, c0 * scale);
  }
  return grad;
}

double expected_utility(const FactoredGame& g, int player, const MixtureStrategy& z) {
  check_mixture(g, z);
  double acc = 0.0;
  for (const MixtureComponent& c : z.components)
    acc += c.weight * product_expected_utility(g, player, c.marginals);
  return acc;
}

double expected_cost(const FactoredGame& g, int player, int j, const MixtureStrategy& z) {
  check_mixture(g, z);
  double acc = 0.0;
  for (const MixtureComponent& c : z.components)
    acc += c.weight * product_expected_cost(g, player, j, c.marginals);
  return acc;
}

MixtureStrategy apply_deviation(const Matrix& phi, int player, const MixtureStrategy& z) {
  const int l = z.n_actions();
  if (player < 0 || player >= z.n_players())
    throw std::invalid_argument("apply_deviation: player index out of range");
  if (phi.rows != l || phi.cols != l)
    throw std::invalid_argument("apply_deviation: deviation matrix has wrong shape");
  for (int r = 0; r < l; ++r) {
    double s = 0.0;
    for (int c = 0; c < l; ++c) {
      if (phi(r, c) < -1e-10)
        throw std::invalid_argument("apply_deviation: negative deviation entry");
      s += phi(r, c);
    }
    if (std::abs(s - 1.0) > 1e-10)
      throw std::invalid_argument("apply_deviation: deviation matrix is not row-stochastic");
  }
  MixtureStrategy out = z;
  for (MixtureComponent& c : out.components)
    c.marginals[player] = mat_tvec(phi, c.marginals[player]);
  out.prune();
  return out;
}

Vec marginalize(const MixtureStrategy& z, std::span<const int> players) {
  if (players.empty()) throw std::invalid_argument("marginalize: empty player tuple");
  const int n = z.n_players();
  const int l = z.n_actions();
  for (size_t i = 0; i < players.size(); ++i) {
    if (players[i] < 0 || players[i] >= n)
      throw std::invalid_argument("marginalize: player index out of range");
    for (size_t j = i + 1; j < players.size(); ++j)
      if (players[i] == players[j])
        throw std::invalid_argument("marginalize: repeated player index");
  }
  // The indexer enforces the materialization cap on l^|players|.
  const ProfileIndexer ix(static_cast<int>(players.size()), l);
  Vec out(ix.size(), 0.0);
  std::vector<int> tuple(players.size());
  for (const MixtureComponent& c : z.components) {
    for (std::int64_t idx = 0; idx < ix.size(); ++idx) {
      ix.decode(idx, tuple);
      double w = c.weight;
      for (size_t t = 0; t < players.size(); ++t) w *= c.marginals[players[t]][tuple[t]];
      out[idx] += w;
    }
  }
  return out;
}

}  // namespace phieq
