#include "phieq/qvi.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "phieq/errors.hpp"
#include "phieq/game_ops.hpp"
#include "phieq/lp.hpp"

namespace phieq {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vec random_simplex_point(std::mt19937_64& rng, int l) {
  Vec p(l);
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - uniform01(rng));
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace

int QviInstance::correspondence_rows() const {
  int rows = 0;
  for (int i = 0; i < n; ++i) rows += active_costs(i) + 2;
  return rows;
}

int QviInstance::block_row_base(int player) const {
  int base = 0;
  for (int i = 0; i < player; ++i) base += active_costs(i) + 2;
  return base;
}

Vec flatten(const ProductStrategy& p) {
  Vec z;
  for (const Vec& block : p) z.insert(z.end(), block.begin(), block.end());
  return z;
}

ProductStrategy unflatten(const Vec& z, int n_players, int n_actions) {
  if (static_cast<int>(z.size()) != n_players * n_actions)
    throw std::invalid_argument("unflatten: wrong dimension");
  ProductStrategy p(n_players, Vec(n_actions));
  for (int i = 0; i < n_players; ++i)
    for (int a = 0; a < n_actions; ++a) p[i][a] = z[i * n_actions + a];
  return p;
}

std::span<const double> block(const Vec& z, int player, int l) {
  return std::span<const double>(z.data() + static_cast<size_t>(player) * l, l);
}

QviInstance build_qvi(const FactoredGame& game, double eps, double nu) {
  game.validate();
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("build_qvi: eps must be positive");
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("build_qvi: nu must be positive");

  QviInstance inst;
  inst.game = game;
  inst.n = game.n_players;
  inst.l = game.n_actions;
  inst.d = inst.n * inst.l;
  inst.eps = eps;
  inst.nu = nu;
  inst.costs_active = nu < 1.0 && game.has_costs();
  inst.nu_prime = std::min(eps / 2.0, nu * nu / (2.0 * inst.n));
  inst.eps_prime = (eps / 2.0) * (1.0 - inst.n * inst.nu_prime);
  if (inst.eps_prime <= 0.0)
    throw std::invalid_argument("build_qvi: relaxation leaves no approximation budget");

  const double u_bound =
      std::max({1.0, std::abs(game.utility_lo), std::abs(game.utility_hi)});
  inst.lipschitz_g = inst.n * std::pow(inst.l, inst.n + 1) * u_bound;
  const double m_bound = std::max(1, game.max_costs());
  inst.lipschitz_l =
      2.0 * std::pow(inst.l, inst.n + 2) * inst.n * inst.n * std::sqrt(m_bound);
  return inst;
}

Vec eval_F(const QviInstance& inst, const Vec& z) {
  const ProductStrategy blocks = unflatten(z, inst.n, inst.l);
  Vec f(inst.d, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    const Vec grad = utility_action_gradient(inst.game, i, blocks);
    for (int a = 0; a < inst.l; ++a) f[i * inst.l + a] = -grad[a];
  }
  return f;
}

Matrix qvi_cost_rows(const QviInstance& inst, const Vec& z_tilde, int player) {
  const ProductStrategy blocks = unflatten(z_tilde, inst.n, inst.l);
  const int m = inst.active_costs(player);
  Matrix rows(m, inst.l);
  for (int j = 0; j < m; ++j) {
    const Vec c = cost_action_gradient(inst.game, player, j, blocks);
    for (int a = 0; a < inst.l; ++a) rows(j, a) = c[a];
  }
  return rows;
}

Correspondence eval_correspondence(const QviInstance& inst, const Vec& z_tilde) {
  Correspondence corr;
  corr.a = Matrix(inst.correspondence_rows(), inst.d);
  corr.b.assign(inst.correspondence_rows(), 0.0);
  for (int i = 0; i < inst.n; ++i) {
    const int base = inst.block_row_base(i);
    const int m = inst.active_costs(i);
    const Matrix rows = qvi_cost_rows(inst, z_tilde, i);
    for (int j = 0; j < m; ++j)
      for (int a = 0; a < inst.l; ++a) corr.a(base + j, i * inst.l + a) = rows(j, a);
    for (int a = 0; a < inst.l; ++a) {
      corr.a(base + m, i * inst.l + a) = 1.0;
      corr.a(base + m + 1, i * inst.l + a) = -1.0;
    }
    corr.b[base + m] = 1.0;
    corr.b[base + m + 1] = -1.0;
  }
  return corr;
}

bool qvi_self_feasible(const QviInstance& inst, const Vec& z, double tol) {
  if (static_cast<int>(z.size()) != inst.d) return false;
  for (double v : z)
    if (v < -tol || v > 1.0 + tol) return false;
  const ProductStrategy blocks = unflatten(z, inst.n, inst.l);
  for (int i = 0; i < inst.n; ++i) {
    const double mass = sum(blocks[i]);
    if (std::abs(mass - 1.0) > inst.nu_prime + tol) return false;
    for (int j = 0; j < inst.active_costs(i); ++j) {
      const Vec c = cost_action_gradient(inst.game, i, j, blocks);
      if (dot(c, blocks[i]) > inst.nu_prime + tol) return false;
    }
  }
  return true;
}

double qvi_gap(const QviInstance& inst, const Vec& z) {
  if (!qvi_self_feasible(inst, z, 1e-9))
    throw std::invalid_argument("qvi_gap: z is not in its own correspondence");
  const Vec f = eval_F(inst, z);
  const Correspondence corr = eval_correspondence(inst, z);

  LinearProgram lp = LinearProgram::make(inst.d, /*maximize=*/false);
  lp.objective = f;
  for (int j = 0; j < inst.d; ++j) {
    lp.lower[j] = 0.0;  // hypercube bounds are never relaxed
    lp.upper[j] = 1.0;
  }
  for (int r = 0; r < corr.a.rows; ++r) {
    Vec row(inst.d, 0.0);
    for (int c = 0; c < inst.d; ++c) row[c] = corr.a(r, c);
    lp.add_row(row, corr.b[r] + inst.nu_prime);
  }
  const LpSolution sol = lp_solve(lp);
  if (sol.status == LpStatus::Infeasible)
    throw PromiseViolation("qvi_gap: correspondence is empty at z");
  if (sol.status != LpStatus::Optimal)
    throw SolverFailure("qvi_gap: certificate LP failed");
  return sol.value - dot(f, z);
}

namespace {

// One linear inequality g^T p <= h in block coordinates.
struct BlockRow {
  Vec g;
  double h;
};

std::vector<BlockRow> block_polytope(const QviInstance& inst, const Matrix& cost_rows,
                                     int l) {
  std::vector<BlockRow> rows;
  for (int j = 0; j < cost_rows.rows; ++j) {
    BlockRow r{Vec(l), inst.nu_prime};
    for (int a = 0; a < l; ++a) r.g[a] = cost_rows(j, a);
    rows.push_back(std::move(r));
  }
  rows.push_back({Vec(l, 1.0), 1.0 + inst.nu_prime});
  rows.push_back({Vec(l, -1.0), -(1.0 - inst.nu_prime)});
  for (int a = 0; a < l; ++a) {
    BlockRow up{Vec(l, 0.0), 1.0};
    up.g[a] = 1.0;
    rows.push_back(std::move(up));
    BlockRow lo{Vec(l, 0.0), 0.0};
    lo.g[a] = -1.0;
    rows.push_back(std::move(lo));
  }
  return rows;
}

bool block_feasible(const std::vector<BlockRow>& rows, const Vec& p, double tol) {
  for (const BlockRow& r : rows)
    if (dot(r.g, p) > r.h + tol) return false;
  return true;
}

// Euclidean projection onto the intersection of the rows by enumeration of
// candidate active sets in increasing size. The first KKT-consistent
// candidate (feasible, nonnegative multipliers) is the projection.
Vec project_block(const std::vector<BlockRow>& rows, const Vec& y) {
  constexpr double kTol = 1e-10;
  const int l = static_cast<int>(y.size());
  if (block_feasible(rows, y, kTol)) return y;

  const int n_rows = static_cast<int>(rows.size());
  std::vector<int> subset;
  Vec best;
  double best_dist = kInf;

  const auto try_subset = [&]() -> bool {
    const int s = static_cast<int>(subset.size());
    Matrix gram(s, s);
    Vec rhs(s);
    for (int a = 0; a < s; ++a) {
      const BlockRow& ra = rows[subset[a]];
      for (int b = 0; b < s; ++b) gram(a, b) = dot(ra.g, rows[subset[b]].g);
      rhs[a] = dot(ra.g, y) - ra.h;
    }
    Vec lambda;
    if (!solve_linear(gram, rhs, lambda)) return false;
    for (double v : lambda)
      if (v < -kTol) return false;
    Vec p = y;
    for (int a = 0; a < s; ++a)
      for (int c = 0; c < l; ++c) p[c] -= lambda[a] * rows[subset[a]].g[c];
    if (!block_feasible(rows, p, kTol)) return false;
    double dist = 0.0;
    for (int c = 0; c < l; ++c) dist += (p[c] - y[c]) * (p[c] - y[c]);
    if (dist < best_dist) {
      best_dist = dist;
      best = std::move(p);
    }
    return true;
  };

  const auto rec = [&](auto&& self, int start, int remaining) -> bool {
    if (remaining == 0) return try_subset();
    for (int r = start; r < n_rows; ++r) {
      subset.push_back(r);
      const bool found = self(self, r + 1, remaining - 1);
      subset.pop_back();
      if (found) return true;
    }
    return false;
  };

  for (int size = 1; size <= l && best.empty(); ++size) rec(rec, 0, size);
  if (best.empty()) {
    // Distinguish an empty block polytope (an instance promise violation)
    // from a numerical failure of the enumeration.
    LinearProgram lp = LinearProgram::make(l, false);
    for (int a = 0; a < l; ++a) {
      lp.lower[a] = 0.0;
      lp.upper[a] = 1.0;
    }
    for (const BlockRow& r : rows) lp.add_row(r.g, r.h);
    if (lp_solve(lp).status == LpStatus::Infeasible)
      throw PromiseViolation("correspondence block is empty");
    throw SolverFailure("project_block: no KKT-consistent active set found");
  }
  return best;
}

Vec project_onto_correspondence(const QviInstance& inst, const Vec& z_corr, const Vec& y) {
  Vec out(inst.d);
  for (int i = 0; i < inst.n; ++i) {
    const Matrix cost_rows = qvi_cost_rows(inst, z_corr, i);
    const std::vector<BlockRow> rows = block_polytope(inst, cost_rows, inst.l);
    Vec yi(y.begin() + i * inst.l, y.begin() + (i + 1) * inst.l);
    const Vec pi = project_block(rows, yi);
    for (int a = 0; a < inst.l; ++a) out[i * inst.l + a] = pi[a];
  }
  return out;
}

// Minimum of f^T p over one block of the relaxed correspondence. Closed form
// for cost-free blocks (fill mass greedily on the smallest components within
// the simplex band), small LP otherwise. Returns +inf when infeasible.
double block_linear_min(const QviInstance& inst, const Matrix& cost_rows, const Vec& f) {
  const int l = inst.l;
  if (cost_rows.rows == 0) {
    std::vector<int> order(l);
    for (int a = 0; a < l; ++a) order[a] = a;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
    const double s_min = std::max(0.0, 1.0 - inst.nu_prime);
    const double s_max = std::min(static_cast<double>(l), 1.0 + inst.nu_prime);
    double total = 0.0, value = 0.0;
    for (int a : order) {
      if (total >= s_max) break;
      const double cap = std::min(1.0, s_max - total);
      const double take = f[a] < 0.0 ? cap : std::max(0.0, std::min(cap, s_min - total));
      value += take * f[a];
      total += take;
      if (take < cap && f[a] >= 0.0 && total >= s_min) break;
    }
    return value;
  }
  LinearProgram lp = LinearProgram::make(l, /*maximize=*/false);
  lp.objective = f;
  for (int a = 0; a < l; ++a) {
    lp.lower[a] = 0.0;
    lp.upper[a] = 1.0;
  }
  for (int j = 0; j < cost_rows.rows; ++j) {
    Vec row(l);
    for (int a = 0; a < l; ++a) row[a] = cost_rows(j, a);
    lp.add_row(row, inst.nu_prime);
  }
  lp.add_row(Vec(l, 1.0), 1.0 + inst.nu_prime);
  lp.add_row(Vec(l, -1.0), -(1.0 - inst.nu_prime));
  const LpSolution sol = lp_solve(lp);
  if (sol.status == LpStatus::Infeasible) return kInf;
  if (sol.status != LpStatus::Optimal)
    throw SolverFailure("block_linear_min: LP failed");
  return sol.value;
}

// Sum of per-block gaps; equals the one-LP gap by block separability of the
// correspondence. Used only to rank grid candidates cheaply.
double quick_gap(const QviInstance& inst, const ProductStrategy& blocks) {
  double gap = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    Vec f(inst.l);
    const Vec grad = utility_action_gradient(inst.game, i, blocks);
    for (int a = 0; a < inst.l; ++a) f[a] = -grad[a];
    const Matrix cost_rows_i = [&] {
      const int m = inst.active_costs(i);
      Matrix rows(m, inst.l);
      for (int j = 0; j < m; ++j) {
        const Vec c = cost_action_gradient(inst.game, i, j, blocks);
        for (int a = 0; a < inst.l; ++a) rows(j, a) = c[a];
      }
      return rows;
    }();
    const double lo = block_linear_min(inst, cost_rows_i, f);
    if (lo == kInf) return -kInf;
    gap += lo - dot(f, blocks[i]);
  }
  return gap;
}

// Grid points of the l-simplex restricted to a per-coordinate box, with the
// last coordinate completing the sum. `extra` is always included.
std::vector<Vec> boxed_simplex_grid(const Vec& lo, const Vec& hi, int res,
                                    const Vec* extra) {
  const int l = static_cast<int>(lo.size());
  std::vector<Vec> points;
  Vec current(l, 0.0);
  const auto rec = [&](auto&& self, int pos, double used) -> void {
    if (pos == l - 1) {
      const double last = 1.0 - used;
      if (last < lo[l - 1] - 1e-12 || last > hi[l - 1] + 1e-12) return;
      current[l - 1] = std::max(0.0, last);
      points.push_back(current);
      return;
    }
    const double width = hi[pos] - lo[pos];
    for (int step = 0; step <= res; ++step) {
      const double v = lo[pos] + width * step / res;
      if (used + v > 1.0 + 1e-12) break;
      current[pos] = v;
      self(self, pos + 1, used + v);
    }
  };
  rec(rec, 0, 0.0);
  if (extra) points.push_back(*extra);
  return points;
}

// Placement order for the grid search: finish cost supports as early as
// possible so infeasible prefixes prune.
std::vector<int> grid_placement_order(const QviInstance& inst) {
  std::vector<std::set<int>> supports;
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.active_costs(i); ++j) {
      const CostTerm& term = inst.game.costs[i][j];
      std::set<int> s;
      if (const auto* pair = std::get_if<PairCost>(&term)) {
        s.insert(pair->p);
        s.insert(pair->q);
      } else {
        for (int p = 0; p < inst.n; ++p) s.insert(p);
      }
      supports.push_back(std::move(s));
    }
  }
  std::vector<int> order;
  std::set<int> placed;
  while (static_cast<int>(order.size()) < inst.n) {
    int best = -1, best_completed = -1;
    for (int cand = 0; cand < inst.n; ++cand) {
      if (placed.count(cand)) continue;
      int completed = 0;
      for (const auto& s : supports) {
        if (!s.count(cand)) continue;
        bool rest = true;
        for (int p : s)
          if (p != cand && !placed.count(p)) rest = false;
        if (rest) ++completed;
      }
      if (completed > best_completed) {
        best = cand;
        best_completed = completed;
      }
    }
    order.push_back(best);
    placed.insert(best);
  }
  return order;
}

struct GridLeaf {
  ProductStrategy blocks;
  double gap = -kInf;
};

// Enumerates the boxed product grid depth first, pruning prefixes whose
// completed cost terms already violate the relaxed bound, and keeps the
// leaves with the largest quick gap.
std::vector<GridLeaf> enumerate_grid(const QviInstance& inst,
                                     const std::vector<std::vector<Vec>>& candidates,
                                     const std::vector<int>& order, int keep,
                                     std::int64_t budget) {
  // (player, cost) pairs checkable once the given depth is placed.
  std::vector<std::vector<std::pair<int, int>>> ready(inst.n);
  {
    std::vector<int> depth_of(inst.n);
    for (int t = 0; t < inst.n; ++t) depth_of[order[t]] = t;
    for (int i = 0; i < inst.n; ++i) {
      for (int j = 0; j < inst.active_costs(i); ++j) {
        const CostTerm& term = inst.game.costs[i][j];
        int at = 0;
        if (const auto* pair = std::get_if<PairCost>(&term))
          at = std::max(depth_of[pair->p], depth_of[pair->q]);
        else
          at = inst.n - 1;
        ready[at].push_back({i, j});
      }
    }
  }

  ProductStrategy blocks(inst.n, Vec(inst.l, 1.0 / inst.l));
  std::vector<GridLeaf> best;
  std::int64_t visited = 0;

  const auto keep_leaf = [&](double gap) {
    GridLeaf leaf{blocks, gap};
    best.push_back(std::move(leaf));
    std::sort(best.begin(), best.end(),
              [](const GridLeaf& a, const GridLeaf& b) { return a.gap > b.gap; });
    if (static_cast<int>(best.size()) > keep) best.pop_back();
  };

  const auto rec = [&](auto&& self, int t) -> void {
    if (visited > budget) return;
    if (t == inst.n) {
      ++visited;
      const double gap = quick_gap(inst, blocks);
      if (gap > -kInf) keep_leaf(gap);
      return;
    }
    for (const Vec& cand : candidates[t]) {
      blocks[order[t]] = cand;
      bool ok = true;
      for (const auto& [i, j] : ready[t]) {
        // Unplaced blocks are uniform, so their mass factors are 1 and the
        // completed cost term evaluates to its final value.
        if (product_expected_cost(inst.game, i, j, blocks) > inst.nu_prime + 1e-12) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, t + 1);
      if (visited > budget) break;
    }
    blocks[order[t]] = Vec(inst.l, 1.0 / inst.l);
  };
  rec(rec, 0);
  return best;
}

int pick_resolution(const QviInstance& inst, std::int64_t budget) {
  for (int res : {16, 12, 8, 6, 4, 3, 2}) {
    // Candidate count per block is at most (res + 1)^(l - 1).
    double total = 1.0;
    for (int i = 0; i < inst.n; ++i) total *= std::pow(res + 1.0, inst.l - 1);
    if (total <= static_cast<double>(budget)) return res;
  }
  return 2;
}

}  // namespace

namespace {

struct Certifier {
  const QviInstance& inst;
  QviSolution& sol;
  double best_gap = -kInf;
  Vec best_z;

  // Returns true when cand certifies at gap >= -eps_prime.
  bool attempt(const Vec& cand, int iteration, const std::string& method) {
    if (!qvi_self_feasible(inst, cand, 1e-9)) return false;
    const double gap = qvi_gap(inst, cand);
    const bool certified = gap >= -inst.eps_prime - 1e-9;
    sol.trace.push_back({iteration, gap, certified});
    if (gap > best_gap) {
      best_gap = gap;
      best_z = cand;
    }
    if (certified) {
      sol.z = cand;
      sol.gap = gap;
      sol.certified = true;
      sol.iterations = iteration;
      sol.method = method;
    }
    return certified;
  }
};

}  // namespace

QviSolution solve_qvi(const QviInstance& inst, const QviConfig& config) {
  if (inst.d > config.dim_cap)
    throw std::invalid_argument("solve_qvi: instance dimension exceeds the cap");
  QviSolution sol;
  Certifier cert{inst, sol, -kInf, {}};
  const double step = config.step > 0.0 ? config.step : 1.0 / (2.0 * inst.lipschitz_g);
  std::mt19937_64 rng(config.seed);

  std::vector<ProductStrategy> starts;
  starts.push_back(ProductStrategy(inst.n, Vec(inst.l, 1.0 / inst.l)));
  for (int r = 1; r < std::max(1, config.restarts); ++r) {
    ProductStrategy s(inst.n);
    for (int i = 0; i < inst.n; ++i) s[i] = random_simplex_point(rng, inst.l);
    starts.push_back(std::move(s));
  }

  for (size_t s = 0; s < starts.size(); ++s) {
    // With the automatic step, later restarts take geometrically larger
    // steps; the gap certificate keeps aggressive dynamics sound.
    const double restart_step =
        config.step > 0.0 ? step : step * std::pow(8.0, static_cast<double>(s));
    Vec z = flatten(starts[s]);
    // Settle into the correspondence before iterating.
    for (int t = 0; t < 20; ++t) {
      const Vec settled = project_onto_correspondence(inst, z, z);
      const double moved = linf_dist(settled, z);
      z = settled;
      if (moved < 1e-13) break;
    }
    if (cert.attempt(z, 0, "start")) return sol;

    Vec avg = z;
    Vec tail = z;
    int tail_count = 0;
    for (int it = 1; it <= config.max_iter; ++it) {
      const Vec f = eval_F(inst, z);
      Vec y(inst.d);
      for (int c = 0; c < inst.d; ++c) y[c] = z[c] - restart_step * f[c];
      const Vec next = project_onto_correspondence(inst, z, y);
      const double moved = linf_dist(next, z);
      z = next;
      for (int c = 0; c < inst.d; ++c)
        avg[c] = (avg[c] * it + z[c]) / (it + 1.0);
      if (it > config.max_iter / 2) {
        ++tail_count;
        for (int c = 0; c < inst.d; ++c)
          tail[c] = (tail[c] * (tail_count - 1) + z[c]) / tail_count;
      }

      const bool last = it == config.max_iter || moved < 1e-13;
      if (it % config.certify_every == 0 || last) {
        if (cert.attempt(z, it, "fixed_point")) return sol;
        // Averaged iterates may sit slightly outside their own
        // correspondence; settle them first.
        const auto settle = [&](Vec cand) {
          for (int t = 0; t < 5; ++t)
            cand = project_onto_correspondence(inst, cand, cand);
          return cand;
        };
        if (cert.attempt(settle(avg), it, "average")) return sol;
        if (tail_count > 0 && cert.attempt(settle(tail), it, "average")) return sol;
      }
      if (last) break;
    }
  }

  if (inst.d <= config.grid_dim_cap) {
    const int keep = 4;
    const std::vector<int> order = grid_placement_order(inst);
    const int res0 = pick_resolution(inst, config.grid_budget);
    std::vector<std::vector<Vec>> level0(inst.n);
    for (int t = 0; t < inst.n; ++t)
      level0[t] = boxed_simplex_grid(Vec(inst.l, 0.0), Vec(inst.l, 1.0), res0, nullptr);
    std::vector<GridLeaf> seeds =
        enumerate_grid(inst, level0, order, keep, config.grid_budget);

    int certify_round = 0;
    for (const GridLeaf& seed : seeds) {
      if (cert.attempt(flatten(seed.blocks), ++certify_round, "grid")) return sol;
    }
    // Box refinement around the best seeds.
    for (const GridLeaf& seed : seeds) {
      ProductStrategy incumbent = seed.blocks;
      double width = 2.0 / std::max(2, res0);
      const int res_local = std::max(2, pick_resolution(inst, config.grid_budget) / 2);
      for (int level = 0; level < 14 && width > 1e-5; ++level, width *= 0.5) {
        std::vector<std::vector<Vec>> cands(inst.n);
        for (int t = 0; t < inst.n; ++t) {
          const Vec& c = incumbent[order[t]];
          Vec lo(inst.l), hi(inst.l);
          for (int a = 0; a < inst.l; ++a) {
            lo[a] = std::max(0.0, c[a] - width);
            hi[a] = std::min(1.0, c[a] + width);
          }
          cands[t] = boxed_simplex_grid(lo, hi, res_local, &c);
        }
        std::vector<GridLeaf> found =
            enumerate_grid(inst, cands, order, 1, config.grid_budget);
        if (found.empty()) break;
        incumbent = found.front().blocks;
        if (cert.attempt(flatten(incumbent), ++certify_round, "grid")) return sol;
      }
    }
  }

  sol.certified = false;
  sol.z = cert.best_z;
  sol.gap = cert.best_gap;
  sol.method = "none";
  sol.iterations = config.max_iter;
  return sol;
}

ProductStrategy renormalize(const QviInstance& inst, const Vec& z) {
  if (static_cast<int>(z.size()) != inst.d)
    throw std::invalid_argument("renormalize: wrong dimension");
  ProductStrategy blocks = unflatten(z, inst.n, inst.l);
  for (int i = 0; i < inst.n; ++i) {
    double mass = 0.0;
    for (double& v : blocks[i]) {
      if (v < 0.0) {
        if (v < -1e-12) throw std::invalid_argument("renormalize: negative block entry");
        v = 0.0;
      }
      mass += v;
    }
    if (std::abs(mass - 1.0) > inst.nu_prime + 1e-9)
      throw std::invalid_argument(
          "renormalize: block mass " + std::to_string(mass) + " of player " +
          std::to_string(i) + " is outside [1-nu', 1+nu'] with nu' = " +
          std::to_string(inst.nu_prime));
    for (double& v : blocks[i]) v /= mass;
  }
  return blocks;
}

LipschitzProbe lipschitz_probe(const QviInstance& inst, int n_samples,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LipschitzProbe probe;
  const auto random_point = [&] {
    Vec z(inst.d);
    for (double& v : z) v = uniform01(rng);
    return z;
  };
  for (int s = 0; s < n_samples; ++s) {
    const Vec z1 = random_point();
    const Vec z2 = random_point();
    Vec diff(inst.d);
    for (int c = 0; c < inst.d; ++c) diff[c] = z1[c] - z2[c];
    const double dist = l2_norm(diff);
    if (dist < 1e-12) continue;

    const Vec f1 = eval_F(inst, z1);
    const Vec f2 = eval_F(inst, z2);
    Vec fd(inst.d);
    for (int c = 0; c < inst.d; ++c) fd[c] = f1[c] - f2[c];
    probe.empirical_g = std::max(probe.empirical_g, l2_norm(fd) / dist);

    const Vec z_eval = random_point();
    const Correspondence c1 = eval_correspondence(inst, z1);
    const Correspondence c2 = eval_correspondence(inst, z2);
    Vec az(c1.a.rows, 0.0);
    for (int r = 0; r < c1.a.rows; ++r) {
      double acc = 0.0;
      for (int c = 0; c < inst.d; ++c) acc += (c1.a(r, c) - c2.a(r, c)) * z_eval[c];
      az[r] = acc;
    }
    probe.empirical_l = std::max(probe.empirical_l, l2_norm(az) / dist);
  }
  return probe;
}

}  // namespace phieq
