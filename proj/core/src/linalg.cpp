#include "phieq/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace phieq {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::constant_rows(const Vec& row) {
  const int n = static_cast<int>(row.size());
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = row[c];
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vec mat_vec(const Matrix& a, std::span<const double> x) {
  Vec out(a.rows, 0.0);
  for (int r = 0; r < a.rows; ++r) {
    double acc = 0.0;
    for (int c = 0; c < a.cols; ++c) acc += a(r, c) * x[c];
    out[r] = acc;
  }
  return out;
}

Vec mat_tvec(const Matrix& a, std::span<const double> x) {
  Vec out(a.cols, 0.0);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) out[c] += a(r, c) * x[r];
  return out;
}

double sum(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

double l1_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

double l2_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double linf_dist(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("linf_dist: size mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc = std::max(acc, std::abs(a[i] - b[i]));
  return acc;
}

bool solve_linear(Matrix a, Vec b, Vec& out, double pivot_tol) {
  const int n = a.rows;
  if (a.cols != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("solve_linear: square system required");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < pivot_tol) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  out.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a(r, c) * out[c];
    out[r] = acc / a(r, r);
  }
  return true;
}

}  // namespace phieq
