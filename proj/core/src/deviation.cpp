#include "phieq/deviation.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace phieq {

DeviationPolytope DeviationPolytope::ce(int l) {
  if (l < 1) throw std::invalid_argument("DeviationPolytope: bad side");
  DeviationPolytope p;
  p.tag = Tag::CE;
  p.side = l;
  p.a = Matrix(0, l * l);
  return p;
}

DeviationPolytope DeviationPolytope::cce(int l) {
  DeviationPolytope p = ce(l);
  p.tag = Tag::CCE;
  // phi(r, c) = phi(0, c) for every row r, written as paired inequalities.
  const int rows = 2 * (l - 1) * l;
  p.a = Matrix(rows, l * l);
  p.b.assign(rows, 0.0);
  int row = 0;
  for (int r = 1; r < l; ++r) {
    for (int c = 0; c < l; ++c) {
      p.a(row, c) = 1.0;
      p.a(row, r * l + c) = -1.0;
      ++row;
      p.a(row, c) = -1.0;
      p.a(row, r * l + c) = 1.0;
      ++row;
    }
  }
  return p;
}

DeviationPolytope DeviationPolytope::custom(int l, Matrix a, Vec b) {
  if (a.cols != l * l || a.rows != static_cast<int>(b.size()))
    throw std::invalid_argument("DeviationPolytope: inconsistent inequality system");
  DeviationPolytope p;
  p.tag = Tag::Custom;
  p.side = l;
  p.a = std::move(a);
  p.b = std::move(b);
  return p;
}

bool DeviationPolytope::contains(const Matrix& phi, double tol) const {
  if (phi.rows != side || phi.cols != side) return false;
  for (int r = 0; r < side; ++r) {
    double s = 0.0;
    for (int c = 0; c < side; ++c) {
      if (phi(r, c) < -tol) return false;
      s += phi(r, c);
    }
    if (std::abs(s - 1.0) > tol) return false;
  }
  for (int r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (int c = 0; c < a.cols; ++c) acc += a(r, c) * phi.data[c];
    if (acc > b[r] + tol) return false;
  }
  return true;
}

}  // namespace phieq
