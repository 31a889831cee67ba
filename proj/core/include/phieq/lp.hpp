#pragma once

#include <vector>

#include "phieq/linalg.hpp"

namespace phieq {

// A linear program over x in R^n_vars:
//   optimize c^T x  subject to  a x <= b,  lower <= x <= upper.
// Use +-kInf for absent bounds.
struct LinearProgram {
  int n_vars = 0;
  bool maximize = true;
  Vec objective;
  Matrix a;  // rows x n_vars
  Vec b;
  Vec lower;
  Vec upper;

  static LinearProgram make(int n_vars, bool maximize = true);
  void add_row(const Vec& coeffs, double rhs);           // coeffs^T x <= rhs
  void add_eq_row(const Vec& coeffs, double rhs);        // as two inequalities
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  Vec x;
  double value = 0.0;
  // Max over primal feasibility, dual feasibility, complementary slackness
  // and duality gap residuals of the solved standard form. Only meaningful
  // for Optimal.
  double certificate_residual = 0.0;
};

// Dense two-phase simplex. Deterministic pivot rule: entering variable by
// most negative reduced cost with lowest-index tie break, leaving row by
// minimum ratio with lowest-basis-index tie break. Optimal solutions are
// certified by solving the dual and checking feasibility, complementary
// slackness, and the duality gap against `cert_tol`; a claimed optimum that
// fails certification is reported as NumericalFailure, distinct from
// Infeasible.
LpSolution lp_solve(const LinearProgram& lp, double cert_tol = 1e-9);

}  // namespace phieq
