#include "chaoskit/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(k)] = x;
    rule.weights[static_cast<std::size_t>(k)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss16() {
  static const GaussRule rule = gauss_legendre(16);
  return rule;
}

// Composite Gauss-Legendre over [a, b] with `panels` panels.
template <typename F>
double composite_gauss(F&& f, double a, double b, int panels) {
  const GaussRule& rule = gauss16();
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      sum += rule.weights[q] * f(mid + 0.5 * h * rule.nodes[q]);
    }
  }
  return sum * 0.5 * h;
}

double fbm_c_h(double hurst) {
  return std::sqrt(2.0 * hurst * std::tgamma(1.5 - hurst) /
                   (std::tgamma(hurst + 0.5) * std::tgamma(2.0 - 2.0 * hurst)));
}

}  // namespace

double fbm_k1_squared(double hurst, double horizon) {
  return 2.0 * hurst * std::pow(2.0, 1.0 - 2.0 * hurst) * std::pow(horizon, 2.0 * hurst - 1.0);
}

KernelSpec KernelSpec::wiener() {
  KernelSpec k;
  k.type_ = Type::Wiener;
  return k;
}

KernelSpec KernelSpec::fbm(double hurst) {
  if (!(hurst > 0.5 && hurst < 1.0)) {
    throw Error("fBm kernel requires 1/2 < H < 1");
  }
  KernelSpec k;
  k.type_ = Type::FBm;
  k.hurst_ = hurst;
  k.c_h_ = fbm_c_h(hurst);
  return k;
}

KernelSpec KernelSpec::ou_stable(double b) {
  if (b <= 0.0) throw Error("Ornstein-Uhlenbeck kernel requires b > 0");
  KernelSpec k;
  k.type_ = Type::OUStable;
  k.b_ = b;
  return k;
}

KernelSpec KernelSpec::ou_unstable(double b) {
  if (b <= 0.0) throw Error("Ornstein-Uhlenbeck kernel requires b > 0");
  KernelSpec k;
  k.type_ = Type::OUUnstable;
  k.b_ = b;
  return k;
}

KernelSpec KernelSpec::rho(std::function<double(double)> rho_fn,
                           std::function<double(double)> rho_derivative, double alpha_exp,
                           std::optional<bool> nonincreasing) {
  if (alpha_exp <= 0.0) throw Error("rho kernel requires a positive exponent");
  KernelSpec k;
  k.type_ = Type::Rho;
  k.rho_ = std::move(rho_fn);
  k.rho_prime_ = std::move(rho_derivative);
  k.alpha_exp_ = alpha_exp;
  k.nonincreasing_ = nonincreasing;
  return k;
}

std::string KernelSpec::name() const {
  switch (type_) {
    case Type::Wiener:
      return "wiener";
    case Type::FBm:
      return "fbm(H=" + std::to_string(hurst_) + ")";
    case Type::OUStable:
      return "ou-stable(b=" + std::to_string(b_) + ")";
    case Type::OUUnstable:
      return "ou-unstable(b=" + std::to_string(b_) + ")";
    case Type::Rho:
      return "rho(alpha=" + std::to_string(alpha_exp_) + ")";
  }
  return "?";
}

double KernelSpec::eval(double t, double s) const {
  if (s > t) return 0.0;
  switch (type_) {
    case Type::Wiener:
      return 1.0;
    case Type::OUStable:
      return std::exp(-b_ * (t - s));
    case Type::OUUnstable:
      return std::exp(b_ * (t - s));
    case Type::Rho:
      return rho_(std::pow(t - s, alpha_exp_));
    case Type::FBm: {
      if (t == s) return 0.0;
      if (s <= 0.0) return std::numeric_limits<double>::infinity();
      // Substitution w = (u-s)^{H-1/2} removes the (u-s)^{H-3/2} singularity:
      // K = C_H s^{1/2-H} int_0^{(t-s)^{H-1/2}} (s + w^{2/(2H-1)})^{H-1/2} dw.
      const double ce = 2.0 / (2.0 * hurst_ - 1.0);
      const double upper = std::pow(t - s, hurst_ - 0.5);
      const double integral = composite_gauss(
          [&](double w) { return std::pow(s + std::pow(w, ce), hurst_ - 0.5); }, 0.0, upper, 4);
      return c_h_ * std::pow(s, 0.5 - hurst_) * integral;
    }
  }
  return 0.0;
}

double KernelSpec::dt(double t, double s) const {
  if (s > t) return 0.0;
  switch (type_) {
    case Type::Wiener:
      return 0.0;
    case Type::OUStable:
      return -b_ * std::exp(-b_ * (t - s));
    case Type::OUUnstable:
      return b_ * std::exp(b_ * (t - s));
    case Type::Rho: {
      if (t == s && alpha_exp_ < 1.0) {
        throw SingularDiagonalError("rho kernel derivative singular at t = s");
      }
      return rho_prime_(std::pow(t - s, alpha_exp_)) * alpha_exp_ *
             std::pow(t - s, alpha_exp_ - 1.0);
    }
    case Type::FBm: {
      if (t == s) {
        throw SingularDiagonalError("fBm kernel derivative singular at t = s");
      }
      return c_h_ * (hurst_ - 0.5) * std::pow(s, 0.5 - hurst_) *
             std::pow(t - s, hurst_ - 1.5) * std::pow(t, hurst_ - 0.5);
    }
  }
  return 0.0;
}

double KernelSpec::diag(double s) const {
  switch (type_) {
    case Type::Wiener:
      return 1.0;
    case Type::OUStable:
    case Type::OUUnstable:
      return 1.0;
    case Type::Rho:
      return rho_(0.0);
    case Type::FBm:
      (void)s;
      return 0.0;
  }
  return 0.0;
}

NormBound KernelSpec::norm_bound(double horizon) const {
  switch (type_) {
    case Type::Wiener:
      return {1.0, 0.0};
    case Type::FBm:
      return {0.0, std::sqrt(fbm_k1_squared(hurst_, horizon))};
    case Type::OUStable:
      return {1.0, std::sqrt(1.0 - std::exp(-b_ * horizon))};
    case Type::OUUnstable: {
      const double e = std::exp(b_ * horizon);
      return {1.0, std::sqrt(e * (e - 1.0))};
    }
    case Type::Rho: {
      if (!nonincreasing_.has_value()) {
        throw HypothesesUnverifiableError(
            "rho kernel has no declared monotonicity; norm bound unavailable");
      }
      const double r0 = rho_(0.0);
      const double rT = rho_(std::pow(horizon, alpha_exp_));
      const double k1sq = *nonincreasing_ ? r0 * (r0 - rT) : rT * (rT - r0);
      return {r0, std::sqrt(std::max(0.0, k1sq))};
    }
  }
  return {0.0, 0.0};
}

double weighted_power_integral_left(std::span<const double> g, double du, double p) {
  const std::size_t cells = g.size() - 1;
  double sum = 0.0;
  for (std::size_t j = 0; j < cells; ++j) {
    const double gl = (j == 0) ? g[1] : g[j];
    const double gr = g[j + 1];
    const double m0 = std::pow(du, p + 1.0) *
                      (std::pow(j + 1.0, p + 1.0) - std::pow(static_cast<double>(j), p + 1.0)) /
                      (p + 1.0);
    const double m1 = std::pow(du, p + 2.0) *
                      (std::pow(j + 1.0, p + 2.0) - std::pow(static_cast<double>(j), p + 2.0)) /
                      (p + 2.0);
    sum += gl * m0 + (gr - gl) * (m1 - j * du * m0) / du;
  }
  return sum;
}

double weighted_power_integral_right(std::span<const double> g, double du, double p) {
  std::vector<double> rev(g.rbegin(), g.rend());
  return weighted_power_integral_left(rev, du, p);
}

namespace {

// Gauss panels refined geometrically toward x = 0; absorbs residual mild
// power terms of the integrand.
template <typename F>
double graded_gauss01(F&& f) {
  double sum = 0.0;
  double hi = 1.0;
  for (int panel = 0; panel < 4; ++panel) {
    const double lo = panel == 3 ? 0.0 : hi * 0.25;
    sum += composite_gauss(f, lo, hi, 1);
    hi = lo;
  }
  return sum;
}

// Quadrature of prod(tau) = K(t,tau) K(s,tau) over tau in [0, m].
//
// Smooth kernels: composite trapezoid on a grid-resolution partition. fBm:
// the product behaves like tau^{1-2H} at the origin and (m-tau)^p at the
// upper limit (p = 2H-1 when t = s, else H-1/2); each half of the range is
// integrated after the substitution that absorbs its power weight exactly.
double covariance_impl(const KernelSpec& spec, const TimeGrid& grid, double t, double s) {
  const double m = std::min(t, s);
  if (m <= 0.0) return 0.0;

  if (spec.type() != KernelSpec::Type::FBm) {
    const int cells = std::max(2, static_cast<int>(std::lround(m / grid.dt())));
    const double du = m / cells;
    double sum = 0.5 * (spec.eval(t, 0.0) * spec.eval(s, 0.0) +
                        spec.eval(t, m) * spec.eval(s, m));
    for (int j = 1; j < cells; ++j) {
      const double tau = du * j;
      sum += spec.eval(t, tau) * spec.eval(s, tau);
    }
    return sum * du;
  }

  const double hurst = spec.hurst();
  const double half = 0.5 * m;
  auto prod = [&](double tau) { return spec.eval(t, tau) * spec.eval(s, tau); };

  // Left half: tau = half * x^{1/(2-2H)} absorbs the tau^{1-2H} divergence.
  const double ql = 1.0 - 2.0 * hurst;
  const double el = 1.0 / (ql + 1.0);
  const double left = std::pow(half, ql + 1.0) / (ql + 1.0) *
                      graded_gauss01([&](double x) {
                        const double tau = half * std::pow(x, el);
                        return prod(tau) * std::pow(tau, -ql);
                      });

  // Right half: m - tau = half * y^{1/(p+1)} absorbs the (m-tau)^p factor.
  const double pr = (t == s) ? 2.0 * hurst - 1.0 : hurst - 0.5;
  const double er = 1.0 / (pr + 1.0);
  const double right = std::pow(half, pr + 1.0) / (pr + 1.0) *
                       graded_gauss01([&](double y) {
                         const double tau = m - half * std::pow(y, er);
                         return prod(tau) * std::pow(m - tau, -pr);
                       });
  return left + right;
}

}  // namespace

double covariance(const KernelSpec& spec, const TimeGrid& grid, double t, double s) {
  return covariance_impl(spec, grid, t, s);
}

std::vector<double> covariance_diagonal(const KernelSpec& spec, const TimeGrid& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.size()), 0.0);
  for (int i = 1; i < grid.size(); ++i) {
    out[static_cast<std::size_t>(i)] = covariance_impl(spec, grid, grid.node(i), grid.node(i));
  }
  return out;
}

double sup_m_bound(const KernelSpec& spec, const TimeGrid& grid) {
  const double T = grid.horizon();
  switch (spec.type()) {
    case KernelSpec::Type::Wiener:
      return 1.0;
    case KernelSpec::Type::OUStable:
      return 1.0 + (1.0 - std::exp(-spec.mean_reversion() * T));
    case KernelSpec::Type::OUUnstable:
      return 1.0 + (std::exp(spec.mean_reversion() * T) - 1.0);
    case KernelSpec::Type::Rho:
      // int_0^t |rho'((t-s)^a)| a (t-s)^{a-1} ds = |rho(t^a) - rho(0)| for
      // monotone rho.
      return spec.diag(0.0) + std::abs(spec.eval(T, 0.0) - spec.diag(0.0));
    case KernelSpec::Type::FBm: {
      // K(t,t) = 0; int_0^t |dK/dt| ds has power singularities at both ends.
      const double hurst = spec.hurst();
      double best = 0.0;
      const int stride = std::max(1, grid.subintervals() / 64);
      for (int i = stride; i <= grid.subintervals(); i += stride) {
        const double t = grid.node(i);
        const int cells = std::max(4, 2 * ((i + 1) / 2));
        const double du = t / cells;
        const int half = cells / 2;
        // Left: weight s^{1/2-H}, smooth part (t-s)^{H-3/2} t^{H-1/2} c.
        std::vector<double> gl(static_cast<std::size_t>(half) + 1);
        for (int j = 0; j <= half; ++j) {
          const double s = du * j;
          gl[static_cast<std::size_t>(j)] =
              (j == 0) ? 0.0 : std::abs(spec.dt(t, s)) * std::pow(s, hurst - 0.5);
        }
        double integral = weighted_power_integral_left(gl, du, 0.5 - hurst);
        // Right: weight (t-s)^{H-3/2}.
        std::vector<double> gr(static_cast<std::size_t>(cells - half) + 1);
        for (int j = half; j <= cells; ++j) {
          const double s = du * j;
          gr[static_cast<std::size_t>(j - half)] =
              (j == cells) ? 0.0 : std::abs(spec.dt(t, s)) * std::pow(t - s, 1.5 - hurst);
        }
        integral += weighted_power_integral_right(gr, du, hurst - 1.5);
        best = std::max(best, integral);
      }
      return best;
    }
  }
  return 0.0;
}

}  // namespace chaoskit
