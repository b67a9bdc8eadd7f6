#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "chaoskit/time_grid.hpp"

namespace chaoskit {

/// Constants (K0, K1) of the operator-norm bound ||K*|| <= K0 + K1.
struct NormBound {
  double k0 = 0.0;
  double k1 = 0.0;
  double norm() const { return k0 + k1; }
  double norm_sq() const { return (k0 + k1) * (k0 + k1); }
};

/// K1^2 for the fractional Brownian kernel: 2H 2^{1-2H} T^{2H-1}. Evaluates
/// for any H (equals 1 at H = 1/2, the Brownian case).
double fbm_k1_squared(double hurst, double horizon);

/// Symbolic descriptor of a non-anticipating Volterra kernel K(t,s), i.e.
/// K(t,s) = 0 for s > t. The associated Gaussian process is
/// X(t) = int_0^t K(t,s) dW(s).
///
/// Variants:
///   Wiener       K(t,s) = 1
///   FBm(H)       K(t,s) = C_H (H-1/2) s^{1/2-H} int_s^t (u-s)^{H-3/2} u^{H-1/2} du,
///                1/2 < H < 1, C_H = sqrt(2H Gamma(3/2-H) / (Gamma(H+1/2) Gamma(2-2H)))
///   OUStable(b)  K(t,s) = exp(-b(t-s)), b > 0
///   OUUnstable(b) K(t,s) = exp(+b(t-s)), b > 0
///   Rho          K(t,s) = rho((t-s)^a) with rho >= 0, monotone, C^1
class KernelSpec {
 public:
  enum class Type { Wiener, FBm, OUStable, OUUnstable, Rho };

  static KernelSpec wiener();
  static KernelSpec fbm(double hurst);
  static KernelSpec ou_stable(double b);
  static KernelSpec ou_unstable(double b);
  /// Monotonicity is declared by the caller, never inferred from samples;
  /// leave it empty and norm_bound() refuses with HypothesesUnverifiableError.
  static KernelSpec rho(std::function<double(double)> rho_fn,
                        std::function<double(double)> rho_derivative, double alpha_exp,
                        std::optional<bool> nonincreasing);

  Type type() const { return type_; }
  double hurst() const { return hurst_; }
  double mean_reversion() const { return b_; }
  std::string name() const;

  /// Pointwise kernel value; 0 for s > t. The fBm kernel diverges like
  /// s^{1/2-H} as s -> 0+.
  double eval(double t, double s) const;
  /// dK/dt. For fBm this is the closed form
  /// C_H (H-1/2) s^{1/2-H} (t-s)^{H-3/2} t^{H-1/2}; throws
  /// SingularDiagonalError at t == s (integrable singularity).
  double dt(double t, double s) const;
  /// Diagonal limit K(s+, s).
  double diag(double s) const;

  /// True when dK/dt has an integrable power singularity at t = s.
  bool singular_derivative() const {
    return type_ == Type::FBm || (type_ == Type::Rho && alpha_exp_ < 1.0);
  }
  /// Exponent p of the (t-s)^p factor of dK/dt (fBm: H - 3/2; rho: a - 1).
  double derivative_exponent() const {
    if (type_ == Type::FBm) return hurst_ - 1.5;
    if (type_ == Type::Rho) return alpha_exp_ - 1.0;
    return 0.0;
  }
  /// Exponent of the s^q divergence of K(t,s) at s = 0 (fBm: 1/2 - H, else 0).
  double origin_exponent() const { return type_ == Type::FBm ? 0.5 - hurst_ : 0.0; }

  /// (K0, K1) per the variant's closed form. K0 = sup K(t,t); for fBm
  /// K1^2 = 2H 2^{1-2H} T^{2H-1}; for rho((t-s)^a):
  ///   nonincreasing: K1^2 = rho(0)(rho(0) - rho(T^a))
  ///   nondecreasing: K1^2 = rho(T^a)(rho(T^a) - rho(0)).
  NormBound norm_bound(double horizon) const;

 private:
  Type type_ = Type::Wiener;
  double hurst_ = 0.0;
  double b_ = 0.0;
  double c_h_ = 0.0;  // fBm normalization constant
  std::function<double(double)> rho_;
  std::function<double(double)> rho_prime_;
  double alpha_exp_ = 1.0;
  std::optional<bool> nonincreasing_;
};

/// Covariance R(t,s) = int_0^{min(t,s)} K(t,u) K(s,u) du by quadrature on the
/// grid; end cells with power singularities (fBm) are integrated with exact
/// power moments.
double covariance(const KernelSpec& spec, const TimeGrid& grid, double t, double s);

/// R(t_i, t_i) for every node, one O(n) quadrature per node.
std::vector<double> covariance_diagonal(const KernelSpec& spec, const TimeGrid& grid);

/// sup_t [ K(t,t) + int_0^t |dK/dt(t,s)| ds ], the boundedness constant that
/// keeps the transformed basis functions essentially bounded. Finite for all
/// built-in kernels.
double sup_m_bound(const KernelSpec& spec, const TimeGrid& grid);

/// int_a^b g(u) (u-a)^p du for p > -1 with g sampled on uniform nodes
/// a = u_0 < ... < u_m = b, g piecewise linear (g at the singular node taken
/// from its neighbor). Exact power moments per cell.
double weighted_power_integral_left(std::span<const double> g, double du, double p);
/// Same with weight (b-u)^p singular at the right end.
double weighted_power_integral_right(std::span<const double> g, double du, double p);

}  // namespace chaoskit
