#pragma once

#include <span>
#include <vector>

namespace chaoskit {

/// Dense row-major matrix, just enough for the kernel-operator work.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  static Matrix identity(int n);

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

std::vector<double> matvec(const Matrix& m, std::span<const double> v);
std::vector<double> matvec_transpose(const Matrix& m, std::span<const double> v);

/// Operator norm of A acting on the weighted l2 space <f,g> = sum w_i f_i g_i,
/// i.e. the spectral norm of W^{1/2} A W^{-1/2}. Power iteration on B^T B,
/// at most 200 iterations or relative change < 1e-10; deterministic start.
double weighted_operator_norm(const Matrix& m, std::span<const double> weights);

/// LU factorization with partial pivoting.
struct LuFactors {
  Matrix lu;
  std::vector<int> perm;
};
LuFactors lu_factor(Matrix m);
std::vector<double> lu_solve(const LuFactors& f, std::span<const double> rhs);

/// Eigenvalues of a small symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> symmetric_eigenvalues(Matrix m);

}  // namespace chaoskit
