#include "chaoskit/field_model.hpp"

#include <cmath>

#include "chaoskit/errors.hpp"

namespace chaoskit {

std::vector<double> cosine_basis(int k, const TimeGrid& grid) {
  const double T = grid.horizon();
  std::vector<double> out(static_cast<std::size_t>(grid.size()));
  if (k == 1) {
    const double v = 1.0 / std::sqrt(T);
    for (double& x : out) x = v;
    return out;
  }
  const double amp = std::sqrt(2.0 / T);
  const double omega = M_PI * (k - 1) / T;
  for (int i = 0; i < grid.size(); ++i) {
    out[static_cast<std::size_t>(i)] = amp * std::cos(omega * grid.node(i));
  }
  return out;
}

std::vector<double> kstar_step(const KernelSpec& spec, const StepFunction& f,
                               const TimeGrid& grid) {
  if (f.breakpoints.size() != f.levels.size() + 1) {
    throw Error("step function needs one more breakpoint than levels");
  }
  std::vector<double> out(static_cast<std::size_t>(grid.size()), 0.0);
  // X(0) = 0, so the kernel slice at a breakpoint t = 0 acts as zero.
  auto eval_at = [&](double bp, double s) { return bp <= 0.0 ? 0.0 : spec.eval(bp, s); };
  for (int i = 0; i < grid.size(); ++i) {
    const double s = grid.node(i);
    double sum = 0.0;
    for (std::size_t k = 0; k < f.levels.size(); ++k) {
      sum += f.levels[k] * (eval_at(f.breakpoints[k + 1], s) - eval_at(f.breakpoints[k], s));
    }
    out[static_cast<std::size_t>(i)] = sum;
  }
  return out;
}

Matrix kstar_build(const KernelSpec& spec, const TimeGrid& grid) {
  const int n = grid.subintervals();
  const double dt = grid.dt();
  Matrix a(n + 1, n + 1);

  const bool singular = spec.singular_derivative();
  const bool is_fbm = spec.type() == KernelSpec::Type::FBm;
  const double hurst = spec.hurst();
  const double fbm_prefactor =
      is_fbm ? (hurst - 0.5) * std::sqrt(2.0 * hurst * std::tgamma(1.5 - hurst) /
                                         (std::tgamma(hurst + 0.5) * std::tgamma(2.0 - 2.0 * hurst)))
             : 0.0;

  for (int i = 0; i <= n; ++i) {
    const double s = grid.node(i);
    a(i, i) += spec.diag(s);
    if (i == n) continue;

    if (!singular) {
      for (int j = i; j <= n; ++j) {
        const double w = (j == i || j == n) ? 0.5 * dt : dt;
        a(i, j) += w * spec.dt(grid.node(j), s);
      }
      continue;
    }

    // Product-trapezoid with the power weight (t - s)^p integrated exactly
    // per cell; the remaining kernel factor is sampled at the nodes.
    const double p = spec.derivative_exponent();
    // dK/dt = C_H (H-1/2) s^{1/2-H} (t-s)^{H-3/2} t^{H-1/2}; the s = 0 row
    // carries the exact average of the integrable s^{1/2-H} divergence over
    // its half-cell [0, dt/2].
    const double fbm_origin = (i == 0) ? std::pow(0.5 * dt, 0.5 - hurst) / (1.5 - hurst)
                                       : std::pow(s, 0.5 - hurst);
    auto smooth_part = [&](int j) -> double {
      const double t = grid.node(j);
      if (is_fbm) return fbm_prefactor * fbm_origin * std::pow(t, hurst - 0.5);
      return spec.dt(t, s) * std::pow(t - s, -p);
    };

    for (int j = i; j < n; ++j) {
      const double d0 = dt * (j - i);
      const double d1 = dt * (j - i + 1);
      const double m0 = (std::pow(d1, p + 1.0) - std::pow(d0, p + 1.0)) / (p + 1.0);
      const double m1 = (std::pow(d1, p + 2.0) - std::pow(d0, p + 2.0)) / (p + 2.0);
      const double c1 = (m1 - d0 * m0) / dt;
      const double gl = smooth_part(j == i ? j + 1 : j);
      const double gr = smooth_part(j + 1);
      a(i, j) += gl * (m0 - c1);
      a(i, j + 1) += gr * c1;
    }
  }
  return a;
}

FieldModel::FieldModel(KernelSpec kernel, TimeGrid grid, int basis_dim)
    : kernel_(std::move(kernel)), grid_(grid), basis_dim_(basis_dim) {
  if (basis_dim < 1) throw Error("field model needs at least one basis function");
  kstar_ = kstar_build(kernel_, grid_);

  const int len = grid_.size();
  std::vector<double> weights(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) weights[static_cast<std::size_t>(i)] = grid_.weight(i);

  basis_.reserve(static_cast<std::size_t>(basis_dim));
  mtilde_.reserve(static_cast<std::size_t>(basis_dim));
  integrated_.reserve(static_cast<std::size_t>(basis_dim));
  const bool wiener = kernel_.type() == KernelSpec::Type::Wiener;

  for (int k = 1; k <= basis_dim; ++k) {
    basis_.push_back(cosine_basis(k, grid_));
    const std::vector<double>& mk = basis_.back();

    if (wiener) {
      // K* is the identity: keep mtilde exact and integrate in closed form.
      mtilde_.push_back(mk);
      std::vector<double> integral(static_cast<std::size_t>(len));
      const double T = grid_.horizon();
      for (int i = 0; i < len; ++i) {
        const double t = grid_.node(i);
        integral[static_cast<std::size_t>(i)] =
            (k == 1) ? t / std::sqrt(T)
                     : std::sqrt(2.0 * T) / (M_PI * (k - 1)) * std::sin(M_PI * (k - 1) * t / T);
      }
      integrated_.push_back(std::move(integral));
      continue;
    }

    // K as the adjoint of K* in the weighted inner product:
    // K = W^{-1} (K*)^T W.
    std::vector<double> tmp(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) tmp[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)] * mk[static_cast<std::size_t>(i)];
    std::vector<double> mt = matvec_transpose(kstar_, tmp);
    for (int i = 0; i < len; ++i) mt[static_cast<std::size_t>(i)] /= weights[static_cast<std::size_t>(i)];
    integrated_.push_back(cumtrap(mt, grid_));
    mtilde_.push_back(std::move(mt));
  }

  op_norm_ = weighted_operator_norm(kstar_, weights);
  try {
    bound_ = kernel_.norm_bound(grid_.horizon());
  } catch (const HypothesesUnverifiableError&) {
    bound_.reset();
  }
}

}  // namespace chaoskit
