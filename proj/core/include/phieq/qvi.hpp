#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phieq/game.hpp"
#include "phieq/mixture.hpp"

namespace phieq {

// Quasi-variational inequality instance built from a game with CCE
// deviations: find z in Q(z) with F(z)^T (z~ - z) >= -eps_prime for all
// z~ in Q(z), where F stacks the negated utility gradients of the flattened
// product strategy and the moving polytope Q(z~) encodes the cost rows and
// the per-player simplex rows, all relaxed by nu_prime. Hypercube bounds
// 0 <= z <= 1 are never relaxed.
struct QviInstance {
  FactoredGame game;
  int n = 0;  // players
  int l = 0;  // actions
  int d = 0;  // flattened dimension n*l
  double eps = 0.0;  // equilibrium target of the source problem
  double nu = 0.0;   // safety target of the source problem
  double nu_prime = 0.0;
  double eps_prime = 0.0;
  double lipschitz_g = 0.0;  // declared bound for F
  double lipschitz_l = 0.0;  // declared bound for the correspondence
  bool costs_active = true;  // false when nu >= 1: cost rows bear no effect

  int active_costs(int player) const {
    return costs_active ? game.n_costs(player) : 0;
  }
  int correspondence_rows() const;
  int block_row_base(int player) const;  // first correspondence row of player
};

// Flattening between product strategies and vectors in [0,1]^(n*l): the
// blocks of z are the per-player marginals in player order. unflatten accepts
// sub-stochastic blocks, as produced by solver iterates.
Vec flatten(const ProductStrategy& p);
ProductStrategy unflatten(const Vec& z, int n_players, int n_actions);
std::span<const double> block(const Vec& z, int player, int l);

// nu_prime = min(eps/2, nu^2/2n) and eps_prime = (eps/2)(1 - n nu_prime).
// Cost rows are dropped when nu >= 1. Declared Lipschitz bounds are
// G = n l^(n+1) and L = 2 l^(n+2) n^2 sqrt(m), scaled by the utility range
// bound when it exceeds 1.
QviInstance build_qvi(const FactoredGame& game, double eps, double nu);

// F(z): component (i, a) is minus the expectation of u_i conditioned on
// player i choosing a, weighted by the other (possibly sub-stochastic) blocks.
Vec eval_F(const QviInstance& inst, const Vec& z);

struct Correspondence {
  Matrix a;  // block diagonal, sum_i (m_i + 2) rows by d columns
  Vec b;     // per player: m_i zeros, then +1 and -1 for the simplex rows
};

// The unrelaxed correspondence pieces at z~. Row j of player i's cost block
// is the cost gradient c_i^j evaluated at the other blocks of z~.
Correspondence eval_correspondence(const QviInstance& inst, const Vec& z_tilde);

// Player i's cost rows D_i(z~) alone (m_i x l, block coordinates).
Matrix qvi_cost_rows(const QviInstance& inst, const Vec& z_tilde, int player);

// Checks z in Q_{nu_prime}(z) within tol.
bool qvi_self_feasible(const QviInstance& inst, const Vec& z, double tol = 1e-9);

// Solution certificate: min over z~ in Q_{nu_prime}(z) of F(z)^T (z~ - z),
// computed as one LP. Requires z in Q_{nu_prime}(z); an infeasible
// correspondence at z violates the instance promise and throws.
double qvi_gap(const QviInstance& inst, const Vec& z);

struct QviConfig {
  double step = 0.0;  // projected fixed-point step; 0 selects 1/(2G)
  int max_iter = 2000;
  int restarts = 4;
  std::uint64_t seed = 0;
  int certify_every = 25;          // iterations between gap certifications
  int dim_cap = 64;                // refuse instances with d beyond this
  int grid_dim_cap = 12;           // grid fallback only up to this dimension
  std::int64_t grid_budget = 4'000'000;  // candidate cap per grid level
  double tol = 1e-9;
};

struct QviTracePoint {
  int iteration = 0;
  double gap = 0.0;
  bool certified = false;
};

struct QviSolution {
  Vec z;
  double gap = 0.0;
  bool certified = false;
  int iterations = 0;
  std::string method;  // "start", "fixed_point", "average", "grid"
  std::vector<QviTracePoint> trace;
};

// Projected fixed-point iteration z <- proj_{Q(z)}(z - step * F(z)) with
// multi-start, periodic gap certification of the iterate and its running
// average, and, for d <= grid_dim_cap, an exhaustive product-grid fallback
// with box refinement. Only gap-certified solutions are returned as
// certified; on failure the best gap found is reported. An empty
// correspondence encountered anywhere raises PromiseViolation.
QviSolution solve_qvi(const QviInstance& inst, const QviConfig& config = {});

// p_i = z^i / ||z^i||_1. Requires every block mass within
// [1 - nu_prime, 1 + nu_prime]; rejects otherwise with diagnostics.
ProductStrategy renormalize(const QviInstance& inst, const Vec& z);

struct LipschitzProbe {
  double empirical_g = 0.0;
  double empirical_l = 0.0;
};

// Empirical Lipschitz ratios over sampled pairs: ||F(z)-F(z')|| / ||z-z'||
// and ||(A(z~)-A(z~'))z|| / ||z~-z~'||. Both must stay below the declared
// constants.
LipschitzProbe lipschitz_probe(const QviInstance& inst, int n_samples,
                               std::uint64_t seed);

}  // namespace phieq
