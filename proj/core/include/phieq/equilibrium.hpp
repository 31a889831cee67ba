#pragma once

#include <optional>
#include <vector>

#include "phieq/deviation.hpp"
#include "phieq/game.hpp"
#include "phieq/lp.hpp"
#include "phieq/mixture.hpp"

namespace phieq {

// Best safe deviation of one player: maximizes u_i(phi o_i z) over phi in the
// deviation polytope subject to C_i^j(phi o_i z) <= safety_slack for every
// cost j. Both the objective and the safety rows are linear in the l^2
// entries of phi, with coefficients assembled from the mixture components.
struct SafeBestResponse {
  enum class Status { Found, NoSafeDeviation, Failure };
  Status status = Status::Failure;
  Matrix phi;          // argmax deviation (valid when Found)
  double value = 0.0;  // u_i(phi o_i z)
};

// safety_slack = 0 reproduces the zero-slack safe set; positive values
// support robustness experiments. NoSafeDeviation signals an empty safe
// deviation set, which violates the instance promise and is surfaced, never
// patched.
SafeBestResponse safe_best_response(const FactoredGame& g, int player,
                                    const MixtureStrategy& z,
                                    const DeviationPolytope& phi_set,
                                    double safety_slack = 0.0);

enum class Verdict { Pass, Fail, PromiseViolation };

struct PlayerReport {
  double expected_utility = 0.0;
  double best_safe_value = 0.0;
  double regret = 0.0;  // best_safe_value - expected_utility
  bool promise_violated = false;
  std::optional<Matrix> deviation;
  Vec cost_slacks;  // C_i^j(z) per cost term
};

struct EquilibriumReport {
  std::vector<PlayerReport> players;
  double max_regret = 0.0;
  double max_cost_violation = 0.0;  // max over all players and cost terms of C_i^j(z)
  double eps = 0.0;
  double nu = 0.0;
  double tol = 0.0;
  Verdict verdict = Verdict::Fail;

  bool ok() const { return verdict == Verdict::Pass; }
};

// Certifies z as a constrained (eps, nu)-equilibrium: z must be nu-safe for
// every player and no player may gain more than eps through any deviation
// that is safe at zero slack. Verdict is Pass iff max regret <= eps + tol and
// max cost violation <= nu + tol; an empty safe-deviation set yields
// PromiseViolation.
EquilibriumReport verify_constrained_equilibrium(const FactoredGame& g,
                                                 const MixtureStrategy& z,
                                                 const DeviationPolytope& phi_set,
                                                 double eps, double nu,
                                                 double tol = 1e-9);

// Feasibility LP for coarse-correlated equilibria of a two-player game given
// densely: finds z over all k^2 action pairs whose pure-deviation constraints
// hold, and returns it as a mixture of at most k^2 point masses. Infeasibility
// cannot happen on valid inputs and is reported as SolverFailure.
MixtureStrategy cce_feasibility_lp(const FactoredGame& two_player_game);

}  // namespace phieq
