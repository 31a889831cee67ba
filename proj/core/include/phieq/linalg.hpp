#pragma once

#include <limits>
#include <span>
#include <vector>

namespace phieq {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense row-major matrix sized for desk-scale problems.
struct Matrix {
  int rows = 0;
  int cols = 0;
  Vec data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

  static Matrix identity(int n);
  // Square matrix whose every row equals `row`.
  static Matrix constant_rows(const Vec& row);
};

double dot(std::span<const double> a, std::span<const double> b);
Vec mat_vec(const Matrix& a, std::span<const double> x);   // A x
Vec mat_tvec(const Matrix& a, std::span<const double> x);  // A^T x
double sum(std::span<const double> v);
double l1_norm(std::span<const double> v);
double l2_norm(std::span<const double> v);
double linf_dist(std::span<const double> a, std::span<const double> b);

// Gaussian elimination with partial pivoting; false when numerically singular.
bool solve_linear(Matrix a, Vec b, Vec& out, double pivot_tol = 1e-12);

}  // namespace phieq
