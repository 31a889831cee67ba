#include "phieq/polymatrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace phieq {

namespace {

double uniform01(std::mt19937_64& rng) {
  // Platform-stable uniform double in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// All grid points of the k-simplex with the given resolution, in
// lexicographic order of the underlying compositions.
std::vector<Vec> simplex_grid(int k, int resolution) {
  std::vector<Vec> points;
  std::vector<int> counts(k, 0);
  const auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == k - 1) {
      counts[pos] = remaining;
      Vec p(k);
      for (int i = 0; i < k; ++i) p[i] = static_cast<double>(counts[i]) / resolution;
      points.push_back(std::move(p));
      return;
    }
    for (int c = remaining; c >= 0; --c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  rec(rec, 0, resolution);
  return points;
}

}  // namespace

void PolymatrixGame::validate() const {
  if (n_players < 1) throw std::invalid_argument("PolymatrixGame: need players");
  if (k < 1) throw std::invalid_argument("PolymatrixGame: need actions");
  std::set<std::pair<int, int>> seen;
  for (const PolymatrixEdge& e : edges) {
    if (e.from < 0 || e.from >= n_players || e.to < 0 || e.to >= n_players)
      throw std::invalid_argument("PolymatrixGame: edge endpoint out of range");
    if (e.from == e.to) throw std::invalid_argument("PolymatrixGame: self-loop");
    if (e.payoff.rows != k || e.payoff.cols != k)
      throw std::invalid_argument("PolymatrixGame: payoff matrix has wrong shape");
    for (double v : e.payoff.data)
      if (v < -1e-12 || v > 1.0 + 1e-12)
        throw std::invalid_argument("PolymatrixGame: payoff entry outside [0, 1]");
    if (!seen.insert({e.from, e.to}).second)
      throw std::invalid_argument("PolymatrixGame: duplicate directed edge");
  }
  for (const auto& [from, to] : seen)
    if (!seen.count({to, from}))
      throw std::invalid_argument("PolymatrixGame: edge list not closed under reversal");
}

int PolymatrixGame::degree() const {
  if (cached_degree_ >= 0) return cached_degree_;
  std::vector<int> deg(n_players, 0);
  for (const PolymatrixEdge& e : edges)
    if (e.from < e.to) {  // count each undirected edge once
      ++deg[e.from];
      ++deg[e.to];
    }
  int d = 0;
  for (int v : deg) d = std::max(d, v);
  cached_degree_ = d;
  return d;
}

std::vector<int> PolymatrixGame::outgoing(int player) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i)
    if (edges[i].from == player) out.push_back(i);
  return out;
}

void StrategyProfile::validate(double tol) const {
  for (const Vec& xi : x) {
    double s = 0.0;
    for (double v : xi) {
      if (v < -tol) throw std::invalid_argument("StrategyProfile: negative probability");
      s += v;
    }
    if (std::abs(s - 1.0) > tol)
      throw std::invalid_argument("StrategyProfile: strategy does not sum to 1");
  }
}

double player_utility(const PolymatrixGame& g, const StrategyProfile& x, int player) {
  double acc = 0.0;
  for (const PolymatrixEdge& e : g.edges) {
    if (e.from != player) continue;
    acc += dot(x.x[e.from], mat_vec(e.payoff, x.x[e.to]));
  }
  return acc;
}

double player_regret(const PolymatrixGame& g, const StrategyProfile& x, int player) {
  if (x.n_players() != g.n_players)
    throw std::invalid_argument("player_regret: profile does not match the game");
  Vec action_value(g.k, 0.0);
  for (const PolymatrixEdge& e : g.edges) {
    if (e.from != player) continue;
    const Vec v = mat_vec(e.payoff, x.x[e.to]);
    for (int a = 0; a < g.k; ++a) action_value[a] += v[a];
  }
  const double current = dot(x.x[player], action_value);
  double best = action_value.empty() ? 0.0 : action_value[0];
  for (double v : action_value) best = std::max(best, v);
  return best - current;
}

NashReport verify_eps_nash(const PolymatrixGame& g, const StrategyProfile& x,
                           double eps, double tol) {
  NashReport report;
  report.eps = eps;
  report.tol = tol;
  report.regrets.resize(g.n_players);
  for (int i = 0; i < g.n_players; ++i) {
    report.regrets[i] = player_regret(g, x, i);
    report.max_regret = std::max(report.max_regret, report.regrets[i]);
  }
  report.ok = report.max_regret <= eps + tol;
  return report;
}

PolymatrixGame random_instance(int n, int k, int max_degree, std::uint64_t seed) {
  if (n < 1 || k < 1) throw std::invalid_argument("random_instance: bad dimensions");
  if (max_degree < 0 || max_degree >= n)
    throw std::invalid_argument("random_instance: infeasible degree request");
  std::mt19937_64 rng(seed);

  std::vector<std::pair<int, int>> candidates;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) candidates.push_back({i, j});
  for (int i = static_cast<int>(candidates.size()) - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % (i + 1));
    std::swap(candidates[i], candidates[j]);
  }

  std::vector<int> deg(n, 0);
  std::vector<std::pair<int, int>> chosen;
  for (const auto& [i, j] : candidates)
    if (deg[i] < max_degree && deg[j] < max_degree) {
      chosen.push_back({i, j});
      ++deg[i];
      ++deg[j];
    }
  // Give isolated vertices an edge when the degree budget allows.
  for (int v = 0; v < n && max_degree > 0; ++v) {
    if (deg[v] > 0) continue;
    for (int w = 0; w < n; ++w) {
      if (w == v || deg[w] >= max_degree) continue;
      chosen.push_back({std::min(v, w), std::max(v, w)});
      ++deg[v];
      ++deg[w];
      break;
    }
  }
  std::sort(chosen.begin(), chosen.end());

  PolymatrixGame g;
  g.n_players = n;
  g.k = k;
  for (const auto& [i, j] : chosen) {
    PolymatrixEdge fwd{i, j, Matrix(k, k)};
    PolymatrixEdge rev{j, i, Matrix(k, k)};
    for (double& v : fwd.payoff.data) v = uniform01(rng);
    for (double& v : rev.payoff.data) v = uniform01(rng);
    g.edges.push_back(std::move(fwd));
    g.edges.push_back(std::move(rev));
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) {
    return std::pair(a.from, a.to) < std::pair(b.from, b.to);
  });
  g.validate();
  return g;
}

GridSearchResult brute_force_nash(const PolymatrixGame& g, int resolution,
                                  std::int64_t budget) {
  if (resolution < 1) throw std::invalid_argument("brute_force_nash: bad resolution");
  const std::vector<Vec> points = simplex_grid(g.k, resolution);
  const std::int64_t per_player = static_cast<std::int64_t>(points.size());
  std::int64_t total = 1;
  for (int i = 0; i < g.n_players; ++i) {
    if (total > budget / per_player + 1)
      throw std::invalid_argument("brute_force_nash: grid budget exceeded");
    total *= per_player;
  }
  if (total > budget) throw std::invalid_argument("brute_force_nash: grid budget exceeded");

  StrategyProfile current;
  current.x.assign(g.n_players, points.front());
  GridSearchResult best;
  best.max_regret = kInf;

  std::vector<int> odo(g.n_players, 0);
  for (std::int64_t it = 0; it < total; ++it) {
    double worst = 0.0;
    for (int i = 0; i < g.n_players; ++i) {
      worst = std::max(worst, player_regret(g, current, i));
      if (worst >= best.max_regret) break;
    }
    if (worst < best.max_regret) {
      best.max_regret = worst;
      best.profile = current;
    }
    // Advance the odometer, last player fastest.
    for (int i = g.n_players - 1; i >= 0; --i) {
      if (++odo[i] < per_player) {
        current.x[i] = points[odo[i]];
        break;
      }
      odo[i] = 0;
      current.x[i] = points[0];
    }
  }
  best.evaluated = total;
  return best;
}

}  // namespace phieq
