#pragma once

#include <string>
#include <vector>

#include "chaoskit/field_model.hpp"
#include "chaoskit/spatial.hpp"

namespace chaoskit {

/// Heat-type equation with convection noise,
///   du = a(t) u_xx dt + sigma(t) u_x d X(t),
/// on the periodic grid, driven by the field's associated process. The
/// coefficient vectors hold either a single constant or one sample per field
/// grid node.
struct HeatProblem {
  const FieldModel* field = nullptr;
  SpatialGrid xgrid;
  std::vector<double> u0;
  std::vector<double> a{1.0};
  std::vector<double> sigma{1.0};

  bool constant_coefficients() const { return a.size() == 1 && sigma.size() == 1; }
  double a_at(int i) const { return a.size() == 1 ? a[0] : a[static_cast<std::size_t>(i)]; }
  double sigma_at(int i) const {
    return sigma.size() == 1 ? sigma[0] : sigma[static_cast<std::size_t>(i)];
  }
  /// Running integral of the diffusion coefficient on the field grid.
  std::vector<double> integrated_a() const;
};

/// R_sigma(t_i, t_i): sigma^2 R(t_i, t_i) for constant sigma (kernel
/// quadrature), the weighted-indicator norm through the discrete K* matrix
/// otherwise.
std::vector<double> weighted_covariance_diagonal(const HeatProblem& p);

struct ParabolicityReport {
  bool holds = true;
  /// margin(t) = int_0^t a - R_sigma(t,t)/2 per node; non-negative iff the
  /// heat kernel variance stays meaningful.
  std::vector<double> margin;
  /// Interpolated zero crossing of the margin; NaN when it never turns
  /// negative on the grid.
  double first_violation_t = 0.0;
  /// Closed-form threshold for the built-in kernels (constant coefficients);
  /// NaN when no violation or no closed form.
  double analytic_violation_t = 0.0;
  std::string note;
};

ParabolicityReport check_parabolicity(const HeatProblem& p);

/// Closed-form pathwise solution u(t, x) = ubar(t, x - sigma X(t)): Gaussian
/// smoothing of u0 with variance 2 margin(t), shifted by the sampled path.
/// Requires constant sigma; throws NegativeVarianceError at the first node
/// where the margin is negative. x_path holds X(t) on the field grid; the
/// result is indexed [time node][space node].
std::vector<std::vector<double>> solve_heat_closed(const HeatProblem& p,
                                                   const std::vector<double>& x_path);

struct HeatMoments {
  /// E u(t, x): heat flow of u0 at diffusivity a (noise-independent).
  std::vector<std::vector<double>> mean;
  /// E ||u(t)||_{L2}^2 = sum_m |u0_m|^2 exp(-2 y_m^2 margin(t)) dx; the
  /// grid-truncated value of the chaos limit (finite even past a blow-up,
  /// where the continuum series diverges).
  std::vector<double> second_moment_l2;
};

HeatMoments solve_heat_moments(const HeatProblem& p);

}  // namespace chaoskit
