#include "phieq/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phieq {

int MixtureStrategy::n_players() const {
  return components.empty() ? 0 : static_cast<int>(components.front().marginals.size());
}

int MixtureStrategy::n_actions() const {
  if (components.empty() || components.front().marginals.empty()) return 0;
  return static_cast<int>(components.front().marginals.front().size());
}

void MixtureStrategy::validate(double tol) const {
  if (components.empty()) throw std::invalid_argument("MixtureStrategy: empty mixture");
  const int n = n_players();
  const int l = n_actions();
  double total = 0.0;
  for (const MixtureComponent& c : components) {
    if (c.weight < -tol)
      throw std::invalid_argument("MixtureStrategy: negative weight");
    total += c.weight;
    if (static_cast<int>(c.marginals.size()) != n)
      throw std::invalid_argument("MixtureStrategy: ragged component");
    for (const Vec& m : c.marginals) {
      if (static_cast<int>(m.size()) != l)
        throw std::invalid_argument("MixtureStrategy: ragged marginal");
      double s = 0.0;
      for (double v : m) {
        if (v < -tol) throw std::invalid_argument("MixtureStrategy: negative probability");
        s += v;
      }
      if (std::abs(s - 1.0) > tol)
        throw std::invalid_argument("MixtureStrategy: marginal does not sum to 1");
    }
  }
  if (std::abs(total - 1.0) > tol)
    throw std::invalid_argument("MixtureStrategy: weights do not sum to 1");
}

void MixtureStrategy::prune(double min_weight) {
  if (components.size() <= 1) return;
  std::vector<MixtureComponent> kept;
  kept.reserve(components.size());
  for (MixtureComponent& c : components)
    if (c.weight >= min_weight) kept.push_back(std::move(c));
  if (!kept.empty()) components = std::move(kept);
}

MixtureStrategy MixtureStrategy::point_mass(std::span<const int> profile, int n_actions) {
  MixtureComponent c;
  c.weight = 1.0;
  c.marginals.reserve(profile.size());
  for (int a : profile) {
    if (a < 0 || a >= n_actions)
      throw std::invalid_argument("point_mass: action out of range");
    Vec m(n_actions, 0.0);
    m[a] = 1.0;
    c.marginals.push_back(std::move(m));
  }
  MixtureStrategy z;
  z.components.push_back(std::move(c));
  return z;
}

MixtureStrategy MixtureStrategy::product(std::vector<Vec> marginals) {
  MixtureComponent c;
  c.weight = 1.0;
  c.marginals = std::move(marginals);
  MixtureStrategy z;
  z.components.push_back(std::move(c));
  return z;
}

MixtureStrategy MixtureStrategy::uniform_product(int n_players, int n_actions) {
  std::vector<Vec> marginals(n_players, Vec(n_actions, 1.0 / n_actions));
  return product(std::move(marginals));
}

}  // namespace phieq
