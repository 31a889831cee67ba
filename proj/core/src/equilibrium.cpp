#include "phieq/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

#include "phieq/errors.hpp"
#include "phieq/game_ops.hpp"

namespace phieq {

namespace {

// Coefficients of a linear functional over the deviation entries phi(b, a):
// applying phi moves the component mass x(b) from recommendation b to action
// a, where it picks up the conditional payoff gradient g(a).
Matrix deviation_coefficients(const MixtureStrategy& z, int player,
                              const std::vector<Vec>& gradients) {
  const int l = z.n_actions();
  Matrix coeff(l, l, 0.0);
  for (size_t c = 0; c < z.components.size(); ++c) {
    const MixtureComponent& comp = z.components[c];
    const Vec& own = comp.marginals[player];
    const Vec& grad = gradients[c];
    for (int b = 0; b < l; ++b) {
      const double wb = comp.weight * own[b];
      if (wb == 0.0) continue;
      for (int a = 0; a < l; ++a) coeff(b, a) += wb * grad[a];
    }
  }
  return coeff;
}

}  // namespace

SafeBestResponse safe_best_response(const FactoredGame& g, int player,
                                    const MixtureStrategy& z,
                                    const DeviationPolytope& phi_set,
                                    double safety_slack) {
  if (player < 0 || player >= g.n_players)
    throw std::invalid_argument("safe_best_response: player index out of range");
  if (safety_slack < 0.0)
    throw std::invalid_argument("safe_best_response: negative safety slack");
  if (phi_set.side != g.n_actions)
    throw std::invalid_argument("safe_best_response: deviation polytope has wrong side");
  z.validate(1e-9);
  if (z.n_players() != g.n_players || z.n_actions() != g.n_actions)
    throw std::invalid_argument("safe_best_response: mixture does not match the game");

  const int l = g.n_actions;
  const size_t n_comp = z.components.size();

  std::vector<Vec> u_grad(n_comp);
  for (size_t c = 0; c < n_comp; ++c)
    u_grad[c] = utility_action_gradient(g, player, z.components[c].marginals);
  const Matrix objective = deviation_coefficients(z, player, u_grad);

  LinearProgram lp = LinearProgram::make(l * l, /*maximize=*/true);
  for (int i = 0; i < l * l; ++i) {
    lp.lower[i] = 0.0;
    lp.upper[i] = 1.0;
    lp.objective[i] = objective.data[i];
  }
  // Row-stochasticity.
  for (int r = 0; r < l; ++r) {
    Vec row(l * l, 0.0);
    for (int c = 0; c < l; ++c) row[r * l + c] = 1.0;
    lp.add_eq_row(row, 1.0);
  }
  // Polytope rows.
  for (int r = 0; r < phi_set.a.rows; ++r) {
    Vec row(l * l, 0.0);
    for (int c = 0; c < l * l; ++c) row[c] = phi_set.a(r, c);
    lp.add_row(row, phi_set.b[r]);
  }
  // Safety rows: one per cost term of the deviating player.
  for (int j = 0; j < g.n_costs(player); ++j) {
    std::vector<Vec> c_grad(n_comp);
    for (size_t c = 0; c < n_comp; ++c)
      c_grad[c] = cost_action_gradient(g, player, j, z.components[c].marginals);
    const Matrix safety = deviation_coefficients(z, player, c_grad);
    lp.add_row(safety.data, safety_slack);
  }

  const LpSolution lps = lp_solve(lp);
  SafeBestResponse out;
  if (lps.status == LpStatus::Infeasible) {
    out.status = SafeBestResponse::Status::NoSafeDeviation;
    return out;
  }
  if (lps.status != LpStatus::Optimal) {
    out.status = SafeBestResponse::Status::Failure;
    return out;
  }
  out.status = SafeBestResponse::Status::Found;
  out.value = lps.value;
  out.phi = Matrix(l, l);
  out.phi.data = lps.x;
  return out;
}

EquilibriumReport verify_constrained_equilibrium(const FactoredGame& g,
                                                 const MixtureStrategy& z,
                                                 const DeviationPolytope& phi_set,
                                                 double eps, double nu, double tol) {
  EquilibriumReport report;
  report.eps = eps;
  report.nu = nu;
  report.tol = tol;
  report.players.resize(g.n_players);
  report.max_regret = -kInf;
  report.max_cost_violation = -kInf;
  bool promise_violated = false;
  bool any_cost = false;

  for (int i = 0; i < g.n_players; ++i) {
    PlayerReport& pr = report.players[i];
    pr.expected_utility = expected_utility(g, i, z);
    pr.cost_slacks.resize(g.n_costs(i));
    for (int j = 0; j < g.n_costs(i); ++j) {
      pr.cost_slacks[j] = expected_cost(g, i, j, z);
      report.max_cost_violation = std::max(report.max_cost_violation, pr.cost_slacks[j]);
      any_cost = true;
    }
    const SafeBestResponse sbr = safe_best_response(g, i, z, phi_set, 0.0);
    if (sbr.status == SafeBestResponse::Status::NoSafeDeviation) {
      pr.promise_violated = true;
      promise_violated = true;
      continue;
    }
    if (sbr.status == SafeBestResponse::Status::Failure)
      throw SolverFailure("verify_constrained_equilibrium: deviation LP failed");
    pr.best_safe_value = sbr.value;
    pr.regret = sbr.value - pr.expected_utility;
    pr.deviation = sbr.phi;
    report.max_regret = std::max(report.max_regret, pr.regret);
  }
  if (!any_cost) report.max_cost_violation = 0.0;
  if (report.max_regret == -kInf) report.max_regret = 0.0;

  if (promise_violated)
    report.verdict = Verdict::PromiseViolation;
  else if (report.max_regret <= eps + tol && report.max_cost_violation <= nu + tol)
    report.verdict = Verdict::Pass;
  else
    report.verdict = Verdict::Fail;
  return report;
}

MixtureStrategy cce_feasibility_lp(const FactoredGame& game) {
  if (game.n_players != 2)
    throw std::invalid_argument("cce_feasibility_lp: exactly two players required");
  if (!game.has_dense())
    throw std::invalid_argument("cce_feasibility_lp: dense utilities required");
  if (game.has_costs())
    throw std::invalid_argument("cce_feasibility_lp: costs are not supported here");
  const int k = game.n_actions;
  const auto& u = *game.dense_utilities;
  const auto at = [&](int player, int a, int b) { return u[player][a * k + b]; };

  // Variables: z(a, b) over all action pairs, row-major in player 0's action.
  LinearProgram lp = LinearProgram::make(k * k, /*maximize=*/true);
  for (int i = 0; i < k * k; ++i) {
    lp.lower[i] = 0.0;
    lp.upper[i] = 1.0;
  }
  lp.add_eq_row(Vec(k * k, 1.0), 1.0);
  // Pure deviations suffice: u_0(z) >= sum_b z_{-0}(b) u_0(dev, b) for each
  // pure dev, and symmetrically for player 1.
  for (int dev = 0; dev < k; ++dev) {
    Vec row(k * k, 0.0);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) row[a * k + b] = at(0, dev, b) - at(0, a, b);
    lp.add_row(row, 0.0);
  }
  for (int dev = 0; dev < k; ++dev) {
    Vec row(k * k, 0.0);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) row[a * k + b] = at(1, a, dev) - at(1, a, b);
    lp.add_row(row, 0.0);
  }

  const LpSolution sol = lp_solve(lp);
  if (sol.status != LpStatus::Optimal)
    throw SolverFailure("cce_feasibility_lp: a CCE always exists; the LP failed numerically");

  MixtureStrategy z;
  double total = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double w = sol.x[a * k + b];
      if (w < 1e-15) continue;
      const int profile[2] = {a, b};
      MixtureStrategy pm = MixtureStrategy::point_mass(profile, k);
      pm.components.front().weight = w;
      z.components.push_back(std::move(pm.components.front()));
      total += w;
    }
  }
  if (z.components.empty() || total <= 0.0)
    throw SolverFailure("cce_feasibility_lp: degenerate LP output");
  for (MixtureComponent& c : z.components) c.weight /= total;
  return z;
}

}  // namespace phieq
