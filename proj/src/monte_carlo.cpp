#include "chaoskit/monte_carlo.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <thread>

#include "chaoskit/errors.hpp"
#include "chaoskit/spatial.hpp"

namespace chaoskit {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
  const std::array<std::uint32_t, 4> next{
      static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0,
      static_cast<std::uint32_t>(p1),
      static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1,
      static_cast<std::uint32_t>(p0),
  };
  ctr = next;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t stream,
                                        std::uint64_t counter) {
  std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(counter),
      static_cast<std::uint32_t>(counter >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32),
  };
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    philox_round(ctr, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return ctr;
}

double NormalStream::next() {
  if (cached_ == 0) {
    const auto bits = philox4x32(key_, stream_, counter_++);
    const double u1 = (static_cast<double>(bits[0]) + 0.5) / 4294967296.0;
    const double u2 = (static_cast<double>(bits[1]) + 0.5) / 4294967296.0;
    const double u3 = (static_cast<double>(bits[2]) + 0.5) / 4294967296.0;
    const double u4 = (static_cast<double>(bits[3]) + 0.5) / 4294967296.0;
    const double r1 = std::sqrt(-2.0 * std::log(u1));
    const double r2 = std::sqrt(-2.0 * std::log(u3));
    cache_ = {r1 * std::cos(2.0 * M_PI * u2), r1 * std::sin(2.0 * M_PI * u2),
              r2 * std::cos(2.0 * M_PI * u4), r2 * std::sin(2.0 * M_PI * u4)};
    cached_ = 4;
  }
  return cache_[static_cast<std::size_t>(4 - cached_--)];
}

int worker_threads() {
  const char* env = std::getenv("CHAOSKIT_THREADS");
  if (env == nullptr) return 1;
  const int parsed = std::atoi(env);
  if (parsed < 1) return 1;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return hw > 0 ? std::min(parsed, hw) : parsed;
}

double PathEnsemble::mean_at(int node) const {
  double sum = 0.0;
  for (const auto& path : paths) sum += path[static_cast<std::size_t>(node)];
  return sum / static_cast<double>(paths.size());
}

double PathEnsemble::variance_at(int node) const { return covariance_at(node, node); }

double PathEnsemble::covariance_at(int node_a, int node_b) const {
  const double ma = mean_at(node_a);
  const double mb = mean_at(node_b);
  double sum = 0.0;
  for (const auto& path : paths) {
    sum += (path[static_cast<std::size_t>(node_a)] - ma) *
           (path[static_cast<std::size_t>(node_b)] - mb);
  }
  return sum / static_cast<double>(paths.size() - 1);
}

namespace {

// One path of X on the full grid, from the path's own substream.
void fill_path(const FieldModel& model, std::uint64_t seed, std::uint64_t stream,
               std::vector<double>& out) {
  const TimeGrid& grid = model.grid();
  const KernelSpec& kernel = model.kernel();
  const int n = grid.subintervals();
  const double dt = grid.dt();
  const double root_dt = std::sqrt(dt);
  NormalStream normals(seed, stream);

  out.assign(static_cast<std::size_t>(n) + 1, 0.0);
  switch (kernel.type()) {
    case KernelSpec::Type::Wiener: {
      double x = 0.0;
      for (int i = 0; i < n; ++i) {
        x += root_dt * normals.next();
        out[static_cast<std::size_t>(i) + 1] = x;
      }
      return;
    }
    case KernelSpec::Type::OUStable:
    case KernelSpec::Type::OUUnstable: {
      // Exponential kernels satisfy the exact left-point recursion
      // X_{i+1} = e^{+-b dt} (X_i + dW_i).
      const double b = kernel.mean_reversion();
      const double decay =
          kernel.type() == KernelSpec::Type::OUStable ? std::exp(-b * dt) : std::exp(b * dt);
      double x = 0.0;
      for (int i = 0; i < n; ++i) {
        x = decay * (x + root_dt * normals.next());
        out[static_cast<std::size_t>(i) + 1] = x;
      }
      return;
    }
    default: {
      // Left-point quadrature; only a kernel that diverges at s = 0 moves
      // its first column to the cell midpoint.
      const bool singular_origin = kernel.origin_exponent() < 0.0;
      std::vector<double> dw(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) dw[static_cast<std::size_t>(i)] = root_dt * normals.next();
      for (int i = 1; i <= n; ++i) {
        const double t = grid.node(i);
        double x = 0.0;
        for (int j = 0; j < i; ++j) {
          const double s = (j == 0 && singular_origin) ? 0.5 * dt : grid.node(j);
          x += kernel.eval(t, s) * dw[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = x;
      }
      return;
    }
  }
}

}  // namespace

PathEnsemble sample_paths(const FieldModel& model, int n_paths, std::uint64_t seed) {
  PathEnsemble ensemble;
  ensemble.seed = seed;
  ensemble.model = &model;
  ensemble.paths.resize(static_cast<std::size_t>(n_paths));

  const int workers = std::min(worker_threads(), n_paths);
  if (workers <= 1) {
    for (int p = 0; p < n_paths; ++p) {
      fill_path(model, seed, static_cast<std::uint64_t>(p), ensemble.paths[static_cast<std::size_t>(p)]);
    }
    return ensemble;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int p = w; p < n_paths; p += workers) {
        fill_path(model, seed, static_cast<std::uint64_t>(p), ensemble.paths[static_cast<std::size_t>(p)]);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return ensemble;
}

std::vector<double> sample_endpoint(const FieldModel& model, double t, int n_paths,
                                    std::uint64_t seed) {
  const TimeGrid& grid = model.grid();
  const KernelSpec& kernel = model.kernel();
  const int last = grid.index_of(t);
  const double dt = grid.dt();
  const double root_dt = std::sqrt(dt);

  // Left-point kernel column; a divergent origin is moved to its midpoint.
  const bool singular_origin = kernel.origin_exponent() < 0.0;
  std::vector<double> column(static_cast<std::size_t>(last), 0.0);
  for (int j = 0; j < last; ++j) {
    const double s = (j == 0 && singular_origin) ? 0.5 * dt : grid.node(j);
    column[static_cast<std::size_t>(j)] = kernel.eval(t, s);
  }

  std::vector<double> out(static_cast<std::size_t>(n_paths), 0.0);
  for (int p = 0; p < n_paths; ++p) {
    NormalStream normals(seed, static_cast<std::uint64_t>(p));
    double x = 0.0;
    for (int j = 0; j < last; ++j) x += column[static_cast<std::size_t>(j)] * root_dt * normals.next();
    out[static_cast<std::size_t>(p)] = x;
  }
  return out;
}

WickExpReport validate_wick_exponential(const FieldModel& model, double t, int n_paths,
                                        std::uint64_t seed) {
  const std::vector<double> x = sample_endpoint(model, t, n_paths, seed);
  const double r = covariance(model.kernel(), model.grid(), t, t);

  WickExpReport report;
  report.n_paths = n_paths;
  report.lognormal_reference = std::exp(r);

  double sum = 0.0, sum_sq = 0.0, sum_4 = 0.0;
  for (double xi : x) {
    const double u = std::exp(xi - 0.5 * r);
    sum += u;
    sum_sq += u * u;
    sum_4 += u * u * u * u;
  }
  const double n = static_cast<double>(n_paths);
  const double mean = sum / n;
  const double mean_sq = sum_sq / n;
  report.mean.estimate = mean;
  report.mean.reference = 1.0;
  report.mean.std_error = std::sqrt(std::max(0.0, mean_sq - mean * mean) / n);
  report.second_moment.estimate = mean_sq;
  // Truncated chaos prediction: sum_{m <= N} Rhat^m / m! with the
  // basis-truncated Rhat = sum_k Mtilde_k(t)^2.
  double r_hat = 0.0;
  const int node = model.grid().index_of(t);
  for (int k = 1; k <= model.basis_dim(); ++k) {
    const double v = model.integrated_mtilde(k)[static_cast<std::size_t>(node)];
    r_hat += v * v;
  }
  double chaos_second = 0.0, fact = 1.0;
  for (int m = 0; m <= 12; ++m) {
    if (m > 0) fact *= m;
    chaos_second += std::pow(r_hat, m) / fact;
  }
  report.second_moment.reference = chaos_second;
  report.second_moment.std_error =
      std::sqrt(std::max(0.0, sum_4 / n - mean_sq * mean_sq) / n);
  return report;
}

HeatValidationReport validate_heat_solution(const HeatProblem& p, int n_paths,
                                            std::uint64_t seed) {
  if (p.field == nullptr) throw Error("heat problem has no driving field");
  if (p.sigma.size() != 1 || p.a.size() != 1) {
    throw Error("heat validation requires constant coefficients");
  }
  const TimeGrid& grid = p.field->grid();
  const double horizon = grid.horizon();
  const auto parab = check_parabolicity(p);
  if (!parab.holds) {
    throw NegativeVarianceError(parab.first_violation_t, 0.0);
  }
  const double r_final = parab.margin.back();
  const std::vector<double> x = sample_endpoint(*p.field, horizon, n_paths, seed);

  // Per-path final slice: exp(-y^2 r(T)) smoothing plus the sampled shift.
  const std::vector<std::complex<double>> u0_hat = dft(p.u0);
  const int nx = p.xgrid.n;
  std::vector<double> sum(static_cast<std::size_t>(nx), 0.0);
  std::vector<double> sum_sq(static_cast<std::size_t>(nx), 0.0);
  std::vector<std::complex<double>> mode(static_cast<std::size_t>(nx));
  for (double xi : x) {
    const double shift = p.sigma[0] * xi;
    for (int m = 0; m < nx; ++m) {
      const double y = p.xgrid.frequency(m);
      mode[static_cast<std::size_t>(m)] =
          u0_hat[static_cast<std::size_t>(m)] *
          std::exp(std::complex<double>(-y * y * r_final, -y * shift));
    }
    const std::vector<double> slice = idft_real(mode);
    for (int j = 0; j < nx; ++j) {
      sum[static_cast<std::size_t>(j)] += slice[static_cast<std::size_t>(j)];
      sum_sq[static_cast<std::size_t>(j)] +=
          slice[static_cast<std::size_t>(j)] * slice[static_cast<std::size_t>(j)];
    }
  }

  const auto moments = solve_heat_moments(p);
  const std::vector<double>& reference = moments.mean.back();
  HeatValidationReport report;
  report.n_paths = n_paths;
  const double n = static_cast<double>(n_paths);
  for (int j = 0; j < nx; ++j) {
    const double mean = sum[static_cast<std::size_t>(j)] / n;
    const double var = std::max(0.0, sum_sq[static_cast<std::size_t>(j)] / n - mean * mean);
    const double se = std::sqrt(var / n);
    const double diff = std::abs(mean - reference[static_cast<std::size_t>(j)]);
    if (diff > report.max_abs_discrepancy) {
      report.max_abs_discrepancy = diff;
      report.se_at_max = se;
    }
    if (se > 0.0) report.max_z = std::max(report.max_z, diff / se);
  }
  return report;
}

NormalityReport check_normality(const std::vector<double>& samples) {
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  NormalityReport report;
  report.skewness = m3 / std::pow(m2, 1.5);
  report.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  report.se_skewness = std::sqrt(6.0 / n);
  report.se_kurtosis = std::sqrt(24.0 / n);
  return report;
}

}  // namespace chaoskit
