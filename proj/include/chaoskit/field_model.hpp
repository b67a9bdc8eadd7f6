#pragma once

#include <optional>
#include <vector>

#include "chaoskit/kernel.hpp"
#include "chaoskit/linalg.hpp"
#include "chaoskit/time_grid.hpp"

namespace chaoskit {

/// Fourier cosine basis on [0, T]: m_1 = 1/sqrt(T),
/// m_k(t) = sqrt(2/T) cos(pi (k-1) t / T) for k > 1. 1-based k.
std::vector<double> cosine_basis(int k, const TimeGrid& grid);

/// Piecewise-constant function: value levels[i] on (breakpoints[i],
/// breakpoints[i+1]], zero outside.
struct StepFunction {
  std::vector<double> breakpoints;  // ascending, size = levels.size() + 1
  std::vector<double> levels;
};

/// Exact action of the kernel operator K* on a step function, evaluated at
/// the grid nodes: K*f(s) = sum_k a_k (K(s_{k+1}, s) - K(s_k, s)) with the
/// non-anticipation K(t,s) = 0 for s > t built into the kernel evaluation.
std::vector<double> kstar_step(const KernelSpec& spec, const StepFunction& f,
                               const TimeGrid& grid);

/// Discretized operator K*: row i realizes
///   f -> K(s_i+, s_i) f(s_i) + int_{s_i}^T f(t) dK/dt(t, s_i) dt
/// with trapezoid weights for smooth kernels and exact power-moment cells for
/// the fBm singularity (t - s_i)^{H-3/2}. The fBm row at s = 0 uses the exact
/// half-cell average of the integrable s^{1/2-H} divergence.
Matrix kstar_build(const KernelSpec& spec, const TimeGrid& grid);

/// The computational form of a generalized Gaussian field over L2((0,T)):
/// kernel descriptor, grid, discretized K*, the cosine basis, the transformed
/// basis functions mtilde_k = K m_k (K recovered as the weighted adjoint of
/// K*), and their running integrals Mtilde_k(t) = int_0^t mtilde_k. Immutable
/// after construction.
class FieldModel {
 public:
  FieldModel(KernelSpec kernel, TimeGrid grid, int basis_dim);

  const KernelSpec& kernel() const { return kernel_; }
  const TimeGrid& grid() const { return grid_; }
  int basis_dim() const { return basis_dim_; }
  const Matrix& kstar() const { return kstar_; }

  /// m_k samples, 1-based k.
  const std::vector<double>& basis(int k) const { return basis_[static_cast<std::size_t>(k - 1)]; }
  /// mtilde_k = (K m_k) samples.
  const std::vector<double>& mtilde(int k) const { return mtilde_[static_cast<std::size_t>(k - 1)]; }
  /// Mtilde_k(t_i); exact antiderivatives for the Wiener kernel, running
  /// trapezoid otherwise.
  const std::vector<double>& integrated_mtilde(int k) const {
    return integrated_[static_cast<std::size_t>(k - 1)];
  }

  /// Power-iteration estimate of the weighted operator norm of K*.
  double op_norm() const { return op_norm_; }
  /// Closed-form (K0, K1) bound; empty for rho kernels without a flag.
  const std::optional<NormBound>& bound() const { return bound_; }

 private:
  KernelSpec kernel_;
  TimeGrid grid_;
  int basis_dim_;
  Matrix kstar_;
  std::vector<std::vector<double>> basis_;
  std::vector<std::vector<double>> mtilde_;
  std::vector<std::vector<double>> integrated_;
  double op_norm_ = 0.0;
  std::optional<NormBound> bound_;
};

}  // namespace chaoskit
