#pragma once

#include "phieq/linalg.hpp"

namespace phieq {

// A polytope of right-stochastic l x l deviation matrices phi, described by
// extra linear inequalities a * vec(phi) <= b over the row-major entries.
// Row-stochasticity (rows sum to 1, entries >= 0) is implicit and always
// enforced on top of the listed rows.
//
// The CE polytope has no extra rows. The CCE polytope ties all rows of phi to
// be equal, modeling deviations that cannot depend on the recommendation.
struct DeviationPolytope {
  enum class Tag { CE, CCE, Custom };

  Tag tag = Tag::CE;
  int side = 0;  // l
  Matrix a;      // extra rows over the l*l entries of phi (row-major)
  Vec b;

  static DeviationPolytope ce(int l);
  static DeviationPolytope cce(int l);
  static DeviationPolytope custom(int l, Matrix a, Vec b);

  // Membership test: row-stochastic within tol and all extra rows satisfied.
  bool contains(const Matrix& phi, double tol = 1e-9) const;
};

}  // namespace phieq
