#include "phieq/game.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace phieq {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("FactoredGame: " + what);
}

}  // namespace

int FactoredGame::max_costs() const {
  int m = 0;
  for (const auto& list : costs) m = std::max(m, static_cast<int>(list.size()));
  return m;
}

bool FactoredGame::has_costs() const {
  for (const auto& list : costs)
    if (!list.empty()) return true;
  return false;
}

double FactoredGame::utility_at(int player, std::span<const int> profile) const {
  if (has_dense()) {
    const ProfileIndexer ix = indexer();
    return (*dense_utilities)[player][ix.index(profile)];
  }
  double acc = 0.0;
  for (const EdgePayoff& e : *edge_utilities) {
    if (e.from != player) continue;
    acc += e.payoff(profile[e.from], profile[e.to]);
  }
  return acc;
}

double FactoredGame::cost_at(int player, int j, std::span<const int> profile) const {
  const CostTerm& term = costs[player][j];
  if (const auto* dense = std::get_if<DenseCost>(&term)) {
    const ProfileIndexer ix = indexer();
    return dense->values[ix.index(profile)];
  }
  const auto& pair = std::get<PairCost>(term);
  return pair.payoff(profile[pair.p], profile[pair.q]);
}

void FactoredGame::validate(double tol) const {
  check(n_players >= 1, "need at least one player");
  check(n_actions >= 1, "need at least one action");
  check(utility_lo <= utility_hi, "declared utility range is empty");
  check(has_dense() || has_edges(), "no utility representation");
  check(static_cast<int>(costs.size()) == n_players, "costs must list every player");

  if (has_dense()) {
    check(ProfileIndexer::dense_ok(n_players, n_actions),
          "dense utilities exceed the cell cap");
    const ProfileIndexer ix = indexer();
    check(static_cast<int>(dense_utilities->size()) == n_players,
          "dense utilities must cover every player");
    for (const Vec& table : *dense_utilities) {
      check(static_cast<std::int64_t>(table.size()) == ix.size(),
            "dense utility table has wrong size");
      for (double v : table)
        check(v >= utility_lo - tol && v <= utility_hi + tol,
              "dense utility outside the declared range");
    }
  }
  if (has_edges()) {
    // Per-player sums of per-edge extremes must stay inside the declared range.
    Vec lo_sum(n_players, 0.0), hi_sum(n_players, 0.0);
    for (const EdgePayoff& e : *edge_utilities) {
      check(e.from >= 0 && e.from < n_players && e.to >= 0 && e.to < n_players,
            "edge endpoint out of range");
      check(e.from != e.to, "self-loop edge");
      check(e.payoff.rows == n_actions && e.payoff.cols == n_actions,
            "edge payoff has wrong shape");
      double lo = e.payoff.data.empty() ? 0.0 : e.payoff.data[0];
      double hi = lo;
      for (double v : e.payoff.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      lo_sum[e.from] += lo;
      hi_sum[e.from] += hi;
    }
    for (int i = 0; i < n_players; ++i) {
      check(lo_sum[i] >= utility_lo - tol, "edge utilities can fall below the range");
      check(hi_sum[i] <= utility_hi + tol, "edge utilities can exceed the range");
    }
  }

  for (int i = 0; i < n_players; ++i) {
    for (const CostTerm& term : costs[i]) {
      if (const auto* dense = std::get_if<DenseCost>(&term)) {
        check(ProfileIndexer::dense_ok(n_players, n_actions),
              "dense cost exceeds the cell cap");
        check(static_cast<std::int64_t>(dense->values.size()) == indexer().size(),
              "dense cost table has wrong size");
        for (double v : dense->values)
          check(v >= -1.0 - tol && v <= 1.0 + tol, "cost outside [-1, 1]");
      } else {
        const auto& pair = std::get<PairCost>(term);
        check(pair.p >= 0 && pair.p < n_players && pair.q >= 0 && pair.q < n_players,
              "pair cost player out of range");
        check(pair.p != pair.q, "pair cost needs two distinct players");
        check(pair.payoff.rows == n_actions && pair.payoff.cols == n_actions,
              "pair cost has wrong shape");
        for (double v : pair.payoff.data)
          check(v >= -1.0 - tol && v <= 1.0 + tol, "cost outside [-1, 1]");
      }
    }
  }
}

FactoredGame FactoredGame::with_dense_utilities() const {
  if (!has_edges()) throw std::invalid_argument("with_dense_utilities: no edge representation");
  if (!ProfileIndexer::dense_ok(n_players, n_actions))
    throw std::invalid_argument("with_dense_utilities: profile space exceeds dense cap");
  FactoredGame out = *this;
  const ProfileIndexer ix = indexer();
  std::vector<Vec> dense(n_players, Vec(ix.size(), 0.0));
  std::vector<int> prof(n_players);
  for (std::int64_t idx = 0; idx < ix.size(); ++idx) {
    ix.decode(idx, prof);
    for (const EdgePayoff& e : *edge_utilities)
      dense[e.from][idx] += e.payoff(prof[e.from], prof[e.to]);
  }
  out.dense_utilities = std::move(dense);
  return out;
}

}  // namespace phieq
