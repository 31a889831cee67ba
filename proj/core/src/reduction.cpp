#include "phieq/reduction.hpp"

#include <algorithm>
#include <stdexcept>

#include "phieq/exact_sum.hpp"
#include "phieq/game_ops.hpp"

namespace phieq {

ConstrainedInstance reduce(const PolymatrixGame& g, double eps) {
  g.validate();
  if (eps <= 0.0) throw std::invalid_argument("reduce: eps must be positive");
  const int n = g.n_players;
  const int k = g.k;
  const int deg = std::max(1, g.degree());

  ConstrainedInstance inst;
  inst.source = g;
  inst.source_eps = eps;
  inst.eps_prime = eps / (4.0 * n);
  inst.nu = eps / (2.0 * n * k * deg);
  inst.deviations = DeviationPolytope::cce(k);
  inst.left_index.resize(n);
  inst.right_index.resize(n);
  for (int v = 0; v < n; ++v) {
    inst.left_index[v] = v;
    inst.right_index[v] = n + v;
  }

  FactoredGame& game = inst.game;
  game.n_players = 2 * n;
  game.n_actions = k;
  game.utility_lo = -static_cast<double>(deg);
  game.utility_hi = static_cast<double>(deg);
  game.costs.assign(2 * n, {});

  std::vector<EdgePayoff> edges;
  for (const PolymatrixEdge& e : g.edges) {
    // Source edge (i, j) with matrix A^{i,j} yields the right copy's payoff
    // edge iR -> jL with A^{i,j} itself, and the left copy jL -> iR with the
    // negated transpose.
    EdgePayoff right{n + e.from, e.to, e.payoff};
    EdgePayoff left{e.to, n + e.from, Matrix(k, k)};
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) left.payoff(r, c) = -e.payoff(c, r);
    edges.push_back(std::move(right));
    edges.push_back(std::move(left));
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  game.edge_utilities = std::move(edges);

  // 2k coupling costs per left player, each on the pair (vL, vR). Cost j
  // targets action t = j mod k and pays +-1 exactly when the two copies
  // disagree on whether they play t.
  for (int v = 0; v < n; ++v) {
    for (int j = 0; j < 2 * k; ++j) {
      const int target = j % k;
      const double sign = j < k ? 1.0 : -1.0;
      PairCost cost{v, n + v, Matrix(k, k)};
      for (int al = 0; al < k; ++al) {
        for (int ar = 0; ar < k; ++ar) {
          if (al == target && ar != target)
            cost.payoff(al, ar) = sign;
          else if (ar == target && al != target)
            cost.payoff(al, ar) = -sign;
        }
      }
      game.costs[v].push_back(std::move(cost));
    }
  }

  game.validate();
  return inst;
}

std::pair<double, double> team_utilities(const ConstrainedInstance& inst,
                                         std::span<const int> profile) {
  const int n = inst.source_players();
  if (static_cast<int>(profile.size()) != 2 * n)
    throw std::invalid_argument("team_utilities: profile has wrong length");
  double left = 0.0, right = 0.0;
  for (int v = 0; v < n; ++v) {
    left += inst.game.utility_at(inst.left_index[v], profile);
    right += inst.game.utility_at(inst.right_index[v], profile);
  }
  return {left, right};
}

bool team_zero_sum_exact(const ConstrainedInstance& inst, std::span<const int> profile) {
  const int n = inst.source_players();
  if (static_cast<int>(profile.size()) != 2 * n)
    throw std::invalid_argument("team_zero_sum_exact: profile has wrong length");
  // Accumulate every edge term of u_L + u_R without rounding.
  ExactSum acc;
  for (const EdgePayoff& e : *inst.game.edge_utilities)
    acc.add(e.payoff(profile[e.from], profile[e.to]));
  return acc.is_zero();
}

StrategyProfile extract_nash(const ConstrainedInstance& inst, const MixtureStrategy& z) {
  const int n = inst.source_players();
  if (z.n_players() != 2 * n || z.n_actions() != inst.game.n_actions)
    throw std::invalid_argument("extract_nash: mixture does not match the instance");
  StrategyProfile h;
  h.x.reserve(n);
  for (int v = 0; v < n; ++v) {
    const int idx[1] = {inst.right_index[v]};
    h.x.push_back(marginalize(z, idx));
  }
  return h;
}

MixtureStrategy witness_from_nash(const ConstrainedInstance& inst, const StrategyProfile& x) {
  const int n = inst.source_players();
  if (x.n_players() != n)
    throw std::invalid_argument("witness_from_nash: profile does not match the source");
  x.validate(1e-9);
  std::vector<Vec> marginals(2 * n);
  for (int v = 0; v < n; ++v) {
    marginals[inst.left_index[v]] = x.x[v];
    marginals[inst.right_index[v]] = x.x[v];
  }
  return MixtureStrategy::product(std::move(marginals));
}

}  // namespace phieq
