#pragma once

// Independent oracles used to freeze expected values: exhaustive sums over
// materialized profile spaces and vertex enumeration for linear programs.
// Everything here recomputes from definitions and stays off the library's
// factored evaluation paths.

#include <cstdint>
#include <optional>
#include <vector>

#include "phieq/game.hpp"
#include "phieq/linalg.hpp"
#include "phieq/lp.hpp"
#include "phieq/mixture.hpp"
#include "phieq/profiles.hpp"

namespace phieq::testing {

// Materializes a mixture into a dense joint distribution over profiles.
inline Vec dense_joint(const MixtureStrategy& z, int n, int l) {
  const ProfileIndexer ix(n, l);
  Vec joint(ix.size(), 0.0);
  std::vector<int> prof(n);
  for (const MixtureComponent& c : z.components) {
    for (std::int64_t idx = 0; idx < ix.size(); ++idx) {
      ix.decode(idx, prof);
      double w = c.weight;
      for (int i = 0; i < n; ++i) w *= c.marginals[i][prof[i]];
      joint[idx] += w;
    }
  }
  return joint;
}

// Exhaustive-sum expectation of a point-evaluable function against a joint.
template <typename PointFn>
double exhaustive_expectation(const Vec& joint, int n, int l, PointFn&& value_at) {
  const ProfileIndexer ix(n, l);
  std::vector<int> prof(n);
  double acc = 0.0;
  for (std::int64_t idx = 0; idx < ix.size(); ++idx) {
    if (joint[idx] == 0.0) continue;
    ix.decode(idx, prof);
    acc += joint[idx] * value_at(std::span<const int>(prof));
  }
  return acc;
}

// The deviation definition applied entrywise on a dense joint:
// (phi o_i z)(a) = sum_b phi(b, a_i) z(b, a_-i).
inline Vec apply_deviation_dense(const Matrix& phi, int player, const Vec& joint,
                                 int n, int l) {
  const ProfileIndexer ix(n, l);
  Vec out(ix.size(), 0.0);
  std::vector<int> prof(n);
  for (std::int64_t idx = 0; idx < ix.size(); ++idx) {
    ix.decode(idx, prof);
    const int target = prof[player];
    double acc = 0.0;
    for (int b = 0; b < l; ++b) {
      prof[player] = b;
      acc += phi(b, target) * joint[ix.index(prof)];
    }
    prof[player] = target;
    out[idx] = acc;
  }
  return out;
}

// Marginal of a dense joint over a player tuple.
inline Vec marginal_dense(const Vec& joint, int n, int l, std::span<const int> players) {
  const ProfileIndexer ix(n, l);
  const ProfileIndexer sub(static_cast<int>(players.size()), l);
  Vec out(sub.size(), 0.0);
  std::vector<int> prof(n);
  std::vector<int> tuple(players.size());
  for (std::int64_t idx = 0; idx < ix.size(); ++idx) {
    ix.decode(idx, prof);
    for (size_t t = 0; t < players.size(); ++t) tuple[t] = prof[players[t]];
    out[sub.index(tuple)] += joint[idx];
  }
  return out;
}

struct VertexOracle {
  bool feasible = false;
  double best_value = 0.0;  // in the LP's sense
  Vec argbest;
};

// Enumerates all basic points of {a x <= b} (bounds included as rows): every
// n-subset of rows solved as equalities, kept when feasible. Exact for
// bounded feasible regions, which all oracle-checked programs have.
inline VertexOracle enumerate_lp_vertices(const LinearProgram& lp, double tol = 1e-7) {
  const int n = lp.n_vars;
  std::vector<Vec> rows;
  Vec rhs;
  for (int r = 0; r < lp.a.rows; ++r) {
    Vec row(n);
    for (int c = 0; c < n; ++c) row[c] = lp.a(r, c);
    rows.push_back(std::move(row));
    rhs.push_back(lp.b[r]);
  }
  for (int j = 0; j < n; ++j) {
    if (lp.upper[j] < kInf) {
      Vec row(n, 0.0);
      row[j] = 1.0;
      rows.push_back(std::move(row));
      rhs.push_back(lp.upper[j]);
    }
    if (lp.lower[j] > -kInf) {
      Vec row(n, 0.0);
      row[j] = -1.0;
      rows.push_back(std::move(row));
      rhs.push_back(-lp.lower[j]);
    }
  }
  const int m = static_cast<int>(rows.size());

  VertexOracle oracle;
  std::vector<int> subset;
  const auto consider = [&]() {
    Matrix sys(n, n);
    Vec sys_rhs(n);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < n; ++c) sys(i, c) = rows[subset[i]][c];
      sys_rhs[i] = rhs[subset[i]];
    }
    Vec x;
    if (!solve_linear(sys, sys_rhs, x)) return;
    for (int r = 0; r < m; ++r) {
      double acc = 0.0;
      for (int c = 0; c < n; ++c) acc += rows[r][c] * x[c];
      if (acc > rhs[r] + tol) return;
    }
    double value = 0.0;
    for (int c = 0; c < n; ++c) value += lp.objective[c] * x[c];
    const bool better = lp.maximize ? value > oracle.best_value : value < oracle.best_value;
    if (!oracle.feasible || better) {
      oracle.best_value = value;
      oracle.argbest = x;
    }
    oracle.feasible = true;
  };
  const auto rec = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      consider();
      return;
    }
    for (int r = start; r <= m - remaining; ++r) {
      subset.push_back(r);
      self(self, r + 1, remaining - 1);
      subset.pop_back();
    }
  };
  rec(rec, 0, n);
  return oracle;
}

}  // namespace phieq::testing
