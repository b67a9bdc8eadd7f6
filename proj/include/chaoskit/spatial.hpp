#pragma once

#include <complex>
#include <vector>

#include "chaoskit/linalg.hpp"

namespace chaoskit {

/// Periodic spatial grid on [0, L): nodes x_j = j L / n.
struct SpatialGrid {
  double length = 1.0;
  int n = 2;

  double dx() const { return length / n; }
  double node(int j) const { return length * j / n; }
  /// Signed frequency of DFT mode m: y = 2 pi m~ / L with m~ in (-n/2, n/2].
  double frequency(int m) const {
    const int signed_m = m <= n / 2 ? m : m - n;
    return 2.0 * M_PI * signed_m / length;
  }
  bool operator==(const SpatialGrid& other) const {
    return length == other.length && n == other.n;
  }
};

/// Unnormalized forward DFT (FFTW layout): F_m = sum_j v_j e^{-2 pi i m j / n}.
std::vector<std::complex<double>> dft(const std::vector<double>& v);
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& v);
/// Inverse DFT with 1/n normalization; real part of the inverse.
std::vector<double> idft_real(const std::vector<std::complex<double>>& f);

/// ||v||^2 = sum_j v_j^2 dx.
double spatial_norm_sq(const std::vector<double>& v, const SpatialGrid& g);

/// u0 centered bump exp(-(x-c)^2 / (2 w^2)) with periodic wrapping.
std::vector<double> gaussian_bump(const SpatialGrid& g, double center, double width);

/// Linear operator on the periodic grid: a per-mode Fourier symbol
/// (constant-coefficient differential operators, diagonal in frequency) or a
/// dense matrix.
class SpatialOperator {
 public:
  enum class Kind { Symbol, Matrix };

  /// a d^2/dx^2 with the exact spectral symbol -a y^2.
  static SpatialOperator diffusion(double a, const SpatialGrid& g);
  /// c d/dx with the exact spectral symbol i c y (zero at the Nyquist mode
  /// to keep real fields real).
  static SpatialOperator convection(double c, const SpatialGrid& g);
  static SpatialOperator from_symbol(std::vector<std::complex<double>> symbol);
  /// Standard 3-point Laplacian / centered first difference, as matrices.
  static SpatialOperator fd_laplacian(double a, const SpatialGrid& g);
  static SpatialOperator fd_gradient(double c, const SpatialGrid& g);
  static SpatialOperator from_matrix(Matrix m);

  Kind kind() const { return kind_; }
  const std::vector<std::complex<double>>& symbol() const { return symbol_; }
  const Matrix& matrix() const { return matrix_; }

  std::vector<double> apply(const std::vector<double>& v) const;

 private:
  Kind kind_ = Kind::Symbol;
  std::vector<std::complex<double>> symbol_;
  Matrix matrix_;
};

}  // namespace chaoskit
