#pragma once

#include <span>
#include <vector>

#include "phieq/linalg.hpp"

namespace phieq {

// One product distribution with a mixing weight: marginals[i] is player i's
// distribution over actions.
struct MixtureComponent {
  double weight = 0.0;
  std::vector<Vec> marginals;
};

// A correlated strategy represented as a finite mixture of product
// distributions. Weights are nonnegative and sum to 1; every marginal lies in
// the simplex. This representation stays polynomial in the support size and
// is closed under single-player deviations.
class MixtureStrategy {
 public:
  std::vector<MixtureComponent> components;

  int n_players() const;
  int n_actions() const;
  void validate(double tol = 1e-12) const;

  // Drops components with weight below min_weight.
  void prune(double min_weight = 1e-15);

  static MixtureStrategy point_mass(std::span<const int> profile, int n_actions);
  static MixtureStrategy product(std::vector<Vec> marginals);
  static MixtureStrategy uniform_product(int n_players, int n_actions);
};

// Plain product strategy; marginals[i] is player i's mixed strategy.
using ProductStrategy = std::vector<Vec>;

}  // namespace phieq
