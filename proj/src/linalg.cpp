#include "chaoskit/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "chaoskit/errors.hpp"

namespace chaoskit {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> v) {
  std::vector<double> out(static_cast<std::size_t>(m.rows), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    const double* row = &m.a[static_cast<std::size_t>(i) * m.cols];
    double sum = 0.0;
    for (int j = 0; j < m.cols; ++j) sum += row[j] * v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum;
  }
  return out;
}

std::vector<double> matvec_transpose(const Matrix& m, std::span<const double> v) {
  std::vector<double> out(static_cast<std::size_t>(m.cols), 0.0);
  for (int i = 0; i < m.rows; ++i) {
    const double* row = &m.a[static_cast<std::size_t>(i) * m.cols];
    const double vi = v[static_cast<std::size_t>(i)];
    for (int j = 0; j < m.cols; ++j) out[static_cast<std::size_t>(j)] += row[j] * vi;
  }
  return out;
}

double weighted_operator_norm(const Matrix& m, std::span<const double> weights) {
  const int n = m.rows;
  std::vector<double> sqrt_w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sqrt_w[static_cast<std::size_t>(i)] = std::sqrt(weights[static_cast<std::size_t>(i)]);

  // B = W^{1/2} A W^{-1/2}; iterate v <- B^T B v.
  auto apply_b = [&](std::span<const double> v) {
    std::vector<double> tmp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) tmp[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] / sqrt_w[static_cast<std::size_t>(i)];
    std::vector<double> out = matvec(m, tmp);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] *= sqrt_w[static_cast<std::size_t>(i)];
    return out;
  };
  auto apply_bt = [&](std::span<const double> v) {
    std::vector<double> tmp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) tmp[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] * sqrt_w[static_cast<std::size_t>(i)];
    std::vector<double> out = matvec_transpose(m, tmp);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] /= sqrt_w[static_cast<std::size_t>(i)];
    return out;
  };

  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = 1.0 + static_cast<double>(i) / n;
  double norm = 0.0;
  for (double& x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;

  double lambda = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> w = apply_bt(apply_b(v));
    double mag = 0.0;
    for (double x : w) mag += x * x;
    mag = std::sqrt(mag);
    if (mag == 0.0) return 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] /= mag;
    const double change = std::abs(mag - lambda);
    lambda = mag;
    v = std::move(w);
    if (iter > 2 && change < 1e-10 * std::max(1.0, lambda)) break;
  }
  return std::sqrt(lambda);
}

LuFactors lu_factor(Matrix m) {
  const int n = m.rows;
  LuFactors f{std::move(m), std::vector<int>(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(f.lu(i, k)) > best) {
        best = std::abs(f.lu(i, k));
        pivot = i;
      }
    }
    if (best == 0.0) throw Error("singular matrix in LU factorization");
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(pivot, j));
      std::swap(f.perm[static_cast<std::size_t>(k)], f.perm[static_cast<std::size_t>(pivot)]);
    }
    for (int i = k + 1; i < n; ++i) {
      f.lu(i, k) /= f.lu(k, k);
      const double factor = f.lu(i, k);
      for (int j = k + 1; j < n; ++j) f.lu(i, j) -= factor * f.lu(k, j);
    }
  }
  return f;
}

std::vector<double> lu_solve(const LuFactors& f, std::span<const double> rhs) {
  const int n = f.lu.rows;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = rhs[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(i)])];
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= f.lu(i, j) * x[static_cast<std::size_t>(j)];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[static_cast<std::size_t>(i)] -= f.lu(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] /= f.lu(i, i);
  }
  return x;
}

std::vector<double> symmetric_eigenvalues(Matrix m) {
  const int n = m.rows;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    }
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (m(p, q) == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {
          const double mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = m(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace chaoskit
