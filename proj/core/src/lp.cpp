#include "phieq/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace phieq {

namespace {

constexpr double kPivotEps = 1e-11;

// Dense two-phase simplex for: maximize c^T x subject to A x <= b, x >= 0.
// Entering column: most negative reduced cost, lowest variable index on ties.
// Leaving row: minimum ratio, lowest basis index on ties. Both rules are
// deterministic, so identical inputs take identical pivot paths.
struct StandardSimplex {
  int m, n;
  std::vector<int> N, B;
  std::vector<Vec> D;

  StandardSimplex(const std::vector<Vec>& a, const Vec& b, const Vec& c)
      : m(static_cast<int>(b.size())),
        n(static_cast<int>(c.size())),
        N(n + 1),
        B(m),
        D(m + 2, Vec(n + 2, 0.0)) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) D[i][j] = a[i][j];
      B[i] = n + i;
      D[i][n] = -1.0;
      D[i][n + 1] = b[i];
    }
    for (int j = 0; j < n; ++j) {
      N[j] = j;
      D[m][j] = -c[j];
    }
    N[n] = -1;
    D[m + 1][n] = 1.0;
  }

  void pivot(int r, int s) {
    double* a = D[r].data();
    const double inv = 1.0 / a[s];
    for (int i = 0; i < m + 2; ++i) {
      if (i == r || std::abs(D[i][s]) <= kPivotEps) continue;
      double* row = D[i].data();
      const double inv2 = row[s] * inv;
      for (int j = 0; j < n + 2; ++j) row[j] -= a[j] * inv2;
      row[s] = a[s] * inv2;
    }
    for (int j = 0; j < n + 2; ++j)
      if (j != s) D[r][j] *= inv;
    for (int i = 0; i < m + 2; ++i)
      if (i != r) D[i][s] *= -inv;
    D[r][s] = inv;
    std::swap(B[r], N[s]);
  }

  bool run(int phase) {
    const int obj = m + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n; ++j) {
        if (N[j] == -phase) continue;
        if (s == -1 || std::pair(D[obj][j], N[j]) < std::pair(D[obj][s], N[s])) s = j;
      }
      if (D[obj][s] >= -kPivotEps) return true;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (D[i][s] <= kPivotEps) continue;
        if (r == -1 || std::pair(D[i][n + 1] / D[i][s], B[i]) <
                           std::pair(D[r][n + 1] / D[r][s], B[r]))
          r = i;
      }
      if (r == -1) return false;  // improving ray
      pivot(r, s);
    }
  }

  // 1 optimal, 0 unbounded, -1 infeasible.
  int solve(Vec& x, double& value) {
    if (m > 0) {
      int r = 0;
      for (int i = 1; i < m; ++i)
        if (D[i][n + 1] < D[r][n + 1]) r = i;
      if (D[r][n + 1] < -kPivotEps) {
        pivot(r, n);
        if (!run(2) || D[m + 1][n + 1] < -kPivotEps) return -1;
        for (int i = 0; i < m; ++i) {
          if (B[i] != -1) continue;
          int s = 0;
          for (int j = 1; j <= n; ++j)
            if (std::pair(D[i][j], N[j]) < std::pair(D[i][s], N[s])) s = j;
          pivot(i, s);
        }
      }
    }
    const bool ok = run(1);
    x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
      if (B[i] >= 0 && B[i] < n) x[B[i]] = D[i][n + 1];
    value = D[m][n + 1];
    return ok ? 1 : 0;
  }
};

struct VarMap {
  enum class Kind { Shift, Flip, Split } kind = Kind::Shift;
  int col = 0;       // first standard column
  double offset = 0.0;
};

struct StandardForm {
  std::vector<Vec> a;
  Vec b;
  Vec c;
  double constant = 0.0;
  std::vector<VarMap> vars;
  int cols = 0;
};

// Rewrites the general LP as maximize c^T y, A y <= b, y >= 0 via bound
// shifts, sign flips for upper-bounded-only variables, and splits for free
// variables. Finite upper bounds of shifted variables become extra rows.
StandardForm to_standard_form(const LinearProgram& lp) {
  StandardForm sf;
  sf.vars.resize(lp.n_vars);
  for (int j = 0; j < lp.n_vars; ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (lo > hi) throw std::invalid_argument("lp_solve: empty variable bound");
    VarMap& vm = sf.vars[j];
    if (lo > -kInf) {
      vm.kind = VarMap::Kind::Shift;
      vm.col = sf.cols++;
      vm.offset = lo;
    } else if (hi < kInf) {
      vm.kind = VarMap::Kind::Flip;
      vm.col = sf.cols++;
      vm.offset = hi;
    } else {
      vm.kind = VarMap::Kind::Split;
      vm.col = sf.cols;
      sf.cols += 2;
    }
  }

  const double sign = lp.maximize ? 1.0 : -1.0;
  sf.c.assign(sf.cols, 0.0);
  for (int j = 0; j < lp.n_vars; ++j) {
    const VarMap& vm = sf.vars[j];
    const double cj = sign * lp.objective[j];
    switch (vm.kind) {
      case VarMap::Kind::Shift:
        sf.c[vm.col] = cj;
        sf.constant += cj * vm.offset;
        break;
      case VarMap::Kind::Flip:
        sf.c[vm.col] = -cj;
        sf.constant += cj * vm.offset;
        break;
      case VarMap::Kind::Split:
        sf.c[vm.col] = cj;
        sf.c[vm.col + 1] = -cj;
        break;
    }
  }

  const auto add_row = [&](const auto& coeff_of, double rhs) {
    Vec row(sf.cols, 0.0);
    double adjusted = rhs;
    for (int j = 0; j < lp.n_vars; ++j) {
      const double aij = coeff_of(j);
      if (aij == 0.0) continue;
      const VarMap& vm = sf.vars[j];
      switch (vm.kind) {
        case VarMap::Kind::Shift:
          row[vm.col] += aij;
          adjusted -= aij * vm.offset;
          break;
        case VarMap::Kind::Flip:
          row[vm.col] -= aij;
          adjusted -= aij * vm.offset;
          break;
        case VarMap::Kind::Split:
          row[vm.col] += aij;
          row[vm.col + 1] -= aij;
          break;
      }
    }
    sf.a.push_back(std::move(row));
    sf.b.push_back(adjusted);
  };

  for (int r = 0; r < lp.a.rows; ++r)
    add_row([&](int j) { return lp.a(r, j); }, lp.b[r]);

  // Upper bounds of shifted variables become rows; flipped and split
  // variables have none left to add.
  for (int j = 0; j < lp.n_vars; ++j) {
    const VarMap& vm = sf.vars[j];
    if (vm.kind == VarMap::Kind::Shift && lp.upper[j] < kInf) {
      Vec row(sf.cols, 0.0);
      row[vm.col] = 1.0;
      sf.a.push_back(std::move(row));
      sf.b.push_back(lp.upper[j] - lp.lower[j]);
    }
  }
  return sf;
}

double standard_residuals(const StandardForm& sf, const Vec& y, const Vec& w,
                          double y_value, double w_value) {
  double res = 0.0;
  const int m = static_cast<int>(sf.b.size());
  const int n = sf.cols;
  Vec slack(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double ay = 0.0;
    for (int j = 0; j < n; ++j) ay += sf.a[i][j] * y[j];
    slack[i] = sf.b[i] - ay;
    res = std::max(res, -slack[i]);           // primal feasibility
    res = std::max(res, -w[i]);               // dual sign
    res = std::max(res, std::abs(w[i] * slack[i]));  // complementary slack
  }
  for (int j = 0; j < n; ++j) {
    double atw = 0.0;
    for (int i = 0; i < m; ++i) atw += sf.a[i][j] * w[i];
    const double reduced = atw - sf.c[j];
    res = std::max(res, -reduced);            // dual feasibility
    res = std::max(res, -y[j]);               // primal sign
    res = std::max(res, std::abs(y[j] * reduced));   // complementary slack
  }
  res = std::max(res, std::abs(y_value - w_value));  // duality gap
  return res;
}

}  // namespace

LinearProgram LinearProgram::make(int n_vars, bool maximize) {
  LinearProgram lp;
  lp.n_vars = n_vars;
  lp.maximize = maximize;
  lp.objective.assign(n_vars, 0.0);
  lp.a = Matrix(0, n_vars);
  lp.lower.assign(n_vars, -kInf);
  lp.upper.assign(n_vars, kInf);
  return lp;
}

void LinearProgram::add_row(const Vec& coeffs, double rhs) {
  if (static_cast<int>(coeffs.size()) != n_vars)
    throw std::invalid_argument("LinearProgram::add_row: wrong arity");
  a.data.insert(a.data.end(), coeffs.begin(), coeffs.end());
  ++a.rows;
  b.push_back(rhs);
}

void LinearProgram::add_eq_row(const Vec& coeffs, double rhs) {
  add_row(coeffs, rhs);
  Vec neg(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) neg[i] = -coeffs[i];
  add_row(neg, -rhs);
}

LpSolution lp_solve(const LinearProgram& lp, double cert_tol) {
  if (lp.n_vars <= 0) throw std::invalid_argument("lp_solve: no variables");
  if (static_cast<int>(lp.objective.size()) != lp.n_vars ||
      static_cast<int>(lp.lower.size()) != lp.n_vars ||
      static_cast<int>(lp.upper.size()) != lp.n_vars || lp.a.cols != lp.n_vars ||
      lp.a.rows != static_cast<int>(lp.b.size()))
    throw std::invalid_argument("lp_solve: inconsistent shapes");
  for (double v : lp.objective)
    if (!std::isfinite(v)) throw std::invalid_argument("lp_solve: nonfinite objective");
  for (double v : lp.a.data)
    if (!std::isfinite(v)) throw std::invalid_argument("lp_solve: nonfinite coefficient");
  for (double v : lp.b)
    if (!std::isfinite(v)) throw std::invalid_argument("lp_solve: nonfinite rhs");

  LpSolution sol;
  StandardForm sf;
  try {
    sf = to_standard_form(lp);
  } catch (const std::invalid_argument&) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }

  Vec y;
  double value = 0.0;
  StandardSimplex primal(sf.a, sf.b, sf.c);
  const int code = primal.solve(y, value);
  if (code == -1) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  if (code == 0) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  // Certify optimality through the dual program.
  const int m = static_cast<int>(sf.b.size());
  std::vector<Vec> dual_a(sf.cols, Vec(m, 0.0));
  Vec dual_b(sf.cols, 0.0), dual_c(m, 0.0);
  for (int j = 0; j < sf.cols; ++j) {
    for (int i = 0; i < m; ++i) dual_a[j][i] = -sf.a[i][j];
    dual_b[j] = -sf.c[j];
  }
  for (int i = 0; i < m; ++i) dual_c[i] = -sf.b[i];
  Vec w;
  double dual_value = 0.0;
  StandardSimplex dual(dual_a, dual_b, dual_c);
  const int dual_code = dual.solve(w, dual_value);

  sol.x.assign(lp.n_vars, 0.0);
  for (int j = 0; j < lp.n_vars; ++j) {
    const VarMap& vm = sf.vars[j];
    switch (vm.kind) {
      case VarMap::Kind::Shift:
        sol.x[j] = vm.offset + y[vm.col];
        break;
      case VarMap::Kind::Flip:
        sol.x[j] = vm.offset - y[vm.col];
        break;
      case VarMap::Kind::Split:
        sol.x[j] = y[vm.col] - y[vm.col + 1];
        break;
    }
  }
  const double sign = lp.maximize ? 1.0 : -1.0;
  sol.value = sign * (value + sf.constant);

  if (dual_code != 1) {
    sol.status = LpStatus::NumericalFailure;
    sol.certificate_residual = kInf;
    return sol;
  }
  sol.certificate_residual = standard_residuals(sf, y, w, value, -dual_value);
  sol.status = sol.certificate_residual <= cert_tol ? LpStatus::Optimal
                                                    : LpStatus::NumericalFailure;
  return sol;
}

}  // namespace phieq
