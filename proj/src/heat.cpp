#include "chaoskit/heat.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

constexpr double kMarginTolerance = 1e-12;

void validate(const HeatProblem& p) {
  if (p.field == nullptr) throw Error("heat problem has no driving field");
  if (static_cast<int>(p.u0.size()) != p.xgrid.n) {
    throw GridMismatchError("initial condition does not match the spatial grid");
  }
  const int len = p.field->grid().size();
  if (p.a.size() != 1 && static_cast<int>(p.a.size()) != len) {
    throw GridMismatchError("a(t) samples do not match the field grid");
  }
  if (p.sigma.size() != 1 && static_cast<int>(p.sigma.size()) != len) {
    throw GridMismatchError("sigma(t) samples do not match the field grid");
  }
}

std::vector<double> margin_curve(const HeatProblem& p) {
  const std::vector<double> a_int = p.integrated_a();
  const std::vector<double> r_sigma = weighted_covariance_diagonal(p);
  std::vector<double> margin(a_int.size());
  for (std::size_t i = 0; i < margin.size(); ++i) margin[i] = a_int[i] - 0.5 * r_sigma[i];
  return margin;
}

// Bisection for the closed-form margin root on [lo, hi].
double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> HeatProblem::integrated_a() const {
  const TimeGrid& grid = field->grid();
  if (a.size() == 1) {
    std::vector<double> out(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) out[static_cast<std::size_t>(i)] = a[0] * grid.node(i);
    return out;
  }
  return cumtrap(a, grid);
}

std::vector<double> weighted_covariance_diagonal(const HeatProblem& p) {
  validate(p);
  const TimeGrid& grid = p.field->grid();
  const int len = grid.size();
  if (p.sigma.size() == 1) {
    std::vector<double> diag = covariance_diagonal(p.field->kernel(), grid);
    const double s2 = p.sigma[0] * p.sigma[0];
    for (double& v : diag) v *= s2;
    return diag;
  }
  // Time-varying sigma: R_sigma(t_i, t_i) = || K*(sigma chi_{t_i}) ||^2 via
  // the discrete operator (the Volterra structure zeroes everything past t_i).
  std::vector<double> out(static_cast<std::size_t>(len), 0.0);
  std::vector<double> f(static_cast<std::size_t>(len), 0.0);
  for (int i = 1; i < len; ++i) {
    for (int j = 0; j <= i; ++j) f[static_cast<std::size_t>(j)] = p.sigma_at(j);
    for (int j = i + 1; j < len; ++j) f[static_cast<std::size_t>(j)] = 0.0;
    const std::vector<double> kf = matvec(p.field->kstar(), f);
    double sum = 0.0;
    for (int j = 0; j <= i; ++j) {
      const double w = (j == 0 || j == i) ? 0.5 * grid.dt() : grid.dt();
      sum += w * kf[static_cast<std::size_t>(j)] * kf[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = sum;
  }
  return out;
}

ParabolicityReport check_parabolicity(const HeatProblem& p) {
  validate(p);
  const TimeGrid& grid = p.field->grid();
  ParabolicityReport report;
  report.margin = margin_curve(p);
  report.first_violation_t = std::numeric_limits<double>::quiet_NaN();
  report.analytic_violation_t = std::numeric_limits<double>::quiet_NaN();

  for (int i = 0; i < grid.size(); ++i) {
    if (report.margin[static_cast<std::size_t>(i)] < -kMarginTolerance) {
      report.holds = false;
      // Interpolate the sign change inside the bracketing cell.
      const double m1 = report.margin[static_cast<std::size_t>(i)];
      if (i == 0) {
        report.first_violation_t = 0.0;
      } else {
        const double m0 = report.margin[static_cast<std::size_t>(i - 1)];
        const double frac = m0 <= 0.0 ? 0.0 : m0 / (m0 - m1);
        report.first_violation_t = grid.node(i - 1) + frac * grid.dt();
      }
      break;
    }
  }

  if (p.constant_coefficients()) {
    const double a = p.a[0];
    const double s2 = p.sigma[0] * p.sigma[0];
    const KernelSpec& kernel = p.field->kernel();
    switch (kernel.type()) {
      case KernelSpec::Type::Wiener:
        report.note = "wiener: parabolic iff 2a >= sigma^2";
        if (2.0 * a < s2) report.analytic_violation_t = 0.0;
        break;
      case KernelSpec::Type::OUStable:
        report.note = "ou-stable: equivalent to 2a >= sigma^2";
        if (2.0 * a < s2) {
          const double b = kernel.mean_reversion();
          report.analytic_violation_t = bisect_root(
              [&](double t) { return a * t - s2 * (1.0 - std::exp(-2.0 * b * t)) / (4.0 * b); },
              1e-12, grid.horizon());
        }
        break;
      case KernelSpec::Type::OUUnstable: {
        const double b = kernel.mean_reversion();
        report.note = "ou-unstable: 2a >= sigma^2 keeps small times parabolic only";
        if (2.0 * a < s2) {
          report.analytic_violation_t = 0.0;
        } else {
          // a t = sigma^2 (e^{2bt} - 1) / (4b) acquires a positive root.
          auto margin = [&](double t) {
            return a * t - s2 * (std::expm1(2.0 * b * t)) / (4.0 * b);
          };
          double hi = grid.horizon();
          while (margin(hi) > 0.0 && hi < 1e6) hi *= 2.0;
          if (margin(hi) <= 0.0) report.analytic_violation_t = bisect_root(margin, 1e-12, hi);
        }
        break;
      }
      case KernelSpec::Type::FBm: {
        const double hurst = kernel.hurst();
        report.note = "fbm: parabolic while t^{2H-1} <= 2a/sigma^2";
        report.analytic_violation_t =
            std::pow(2.0 * a / s2, 1.0 / (2.0 * hurst - 1.0));
        break;
      }
      default:
        break;
    }
  }
  return report;
}

std::vector<std::vector<double>> solve_heat_closed(const HeatProblem& p,
                                                   const std::vector<double>& x_path) {
  validate(p);
  if (p.sigma.size() != 1) {
    throw Error("pathwise heat solution requires a constant sigma");
  }
  const TimeGrid& grid = p.field->grid();
  if (static_cast<int>(x_path.size()) != grid.size()) {
    throw GridMismatchError("sampled path does not match the field grid");
  }
  const std::vector<double> margin = margin_curve(p);
  const std::vector<std::complex<double>> u0_hat = dft(p.u0);
  const int nx = p.xgrid.n;

  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(grid.size()));
  std::vector<std::complex<double>> mode(static_cast<std::size_t>(nx));
  for (int i = 0; i < grid.size(); ++i) {
    const double r = margin[static_cast<std::size_t>(i)];
    if (r < -kMarginTolerance) {
      throw NegativeVarianceError(grid.node(i), 2.0 * r);
    }
    const double shift = p.sigma[0] * x_path[static_cast<std::size_t>(i)];
    for (int m = 0; m < nx; ++m) {
      const double y = p.xgrid.frequency(m);
      const std::complex<double> phase(0.0, -y * shift);
      mode[static_cast<std::size_t>(m)] =
          u0_hat[static_cast<std::size_t>(m)] * std::exp(-y * y * std::max(0.0, r) + phase);
    }
    out.push_back(idft_real(mode));
  }
  return out;
}

HeatMoments solve_heat_moments(const HeatProblem& p) {
  validate(p);
  const TimeGrid& grid = p.field->grid();
  const std::vector<double> a_int = p.integrated_a();
  const std::vector<double> margin = margin_curve(p);
  const std::vector<std::complex<double>> u0_hat = dft(p.u0);
  const int nx = p.xgrid.n;

  HeatMoments moments;
  moments.mean.reserve(static_cast<std::size_t>(grid.size()));
  moments.second_moment_l2.resize(static_cast<std::size_t>(grid.size()));
  std::vector<std::complex<double>> mode(static_cast<std::size_t>(nx));
  for (int i = 0; i < grid.size(); ++i) {
    double norm_sq = 0.0;
    for (int m = 0; m < nx; ++m) {
      const double y = p.xgrid.frequency(m);
      mode[static_cast<std::size_t>(m)] =
          u0_hat[static_cast<std::size_t>(m)] * std::exp(-y * y * a_int[static_cast<std::size_t>(i)]);
      const double amp = std::abs(u0_hat[static_cast<std::size_t>(m)]);
      norm_sq += amp * amp * std::exp(-2.0 * y * y * margin[static_cast<std::size_t>(i)]);
    }
    moments.mean.push_back(idft_real(mode));
    moments.second_moment_l2[static_cast<std::size_t>(i)] =
        norm_sq * p.xgrid.dx() / static_cast<double>(nx);
  }
  return moments;
}

}  // namespace chaoskit
