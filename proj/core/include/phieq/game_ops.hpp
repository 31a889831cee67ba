#pragma once

#include <span>

#include "phieq/game.hpp"
#include "phieq/mixture.hpp"

namespace phieq {

// Expectation of player's utility / cost under a product of per-player
// blocks: sum_a f(a) * prod_k blocks[k][a_k]. Blocks need not be normalized;
// sub-stochastic blocks contribute their mass multiplicatively.
double product_expected_utility(const FactoredGame& g, int player,
                                std::span<const Vec> blocks);
double product_expected_cost(const FactoredGame& g, int player, int j,
                             std::span<const Vec> blocks);

// Gradient of the product expectation with respect to the player's own block:
// component a_bar is sum over profiles with a_player = a_bar of the payoff
// times the product of the other blocks.
Vec utility_action_gradient(const FactoredGame& g, int player,
                            std::span<const Vec> blocks);
Vec cost_action_gradient(const FactoredGame& g, int player, int j,
                         std::span<const Vec> blocks);

// Expected utility u_i(z) and expected cost C_i^j(z) of a mixture of
// products, computed component by component without materializing the
// profile space.
double expected_utility(const FactoredGame& g, int player, const MixtureStrategy& z);
double expected_cost(const FactoredGame& g, int player, int j, const MixtureStrategy& z);

// Applies a row-stochastic deviation matrix to player's recommendations:
// every component's marginal x becomes phi^T x; weights are unchanged and
// near-zero components are pruned. Throws when phi is not row-stochastic
// within 1e-10.
MixtureStrategy apply_deviation(const Matrix& phi, int player, const MixtureStrategy& z);

// Marginal distribution of z over the given player tuple, indexed with
// players.front() as the most significant digit. The tuple must be small
// enough that l^|players| stays under the dense cell cap.
Vec marginalize(const MixtureStrategy& z, std::span<const int> players);

}  // namespace phieq
