#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "chaoskit/monte_carlo.hpp"

using namespace chaoskit;

TEST_CASE("philox stream: deterministic and seed-sensitive") {
  const auto a = philox4x32(42, 7, 1000);
  const auto b = philox4x32(42, 7, 1000);
  CHECK(a == b);
  CHECK(philox4x32(42, 7, 1001) != a);
  CHECK(philox4x32(43, 7, 1000) != a);
  CHECK(philox4x32(42, 8, 1000) != a);

  NormalStream s1(11, 0), s2(11, 0);
  for (int i = 0; i < 100; ++i) CHECK(s1.next() == s2.next());
}

TEST_CASE("sample_paths: identical seeds give bitwise identical ensembles") {
  const TimeGrid grid(1.0, 64);
  const FieldModel model(KernelSpec::ou_stable(1.0), grid, 4);
  const auto e1 = sample_paths(model, 32, 99);
  const auto e2 = sample_paths(model, 32, 99);
  REQUIRE(e1.paths.size() == e2.paths.size());
  for (std::size_t p = 0; p < e1.paths.size(); ++p) {
    for (std::size_t i = 0; i < e1.paths[p].size(); ++i) {
      CHECK(e1.paths[p][i] == e2.paths[p][i]);
    }
  }
  const auto e3 = sample_paths(model, 32, 100);
  CHECK(e3.paths[0][32] != e1.paths[0][32]);
}

TEST_CASE("sample_paths: block-parallel sampling is schedule-independent") {
  const TimeGrid grid(1.0, 32);
  const FieldModel model(KernelSpec::wiener(), grid, 4);
  const auto serial = sample_paths(model, 64, 5);
  setenv("CHAOSKIT_THREADS", "4", 1);
  const auto parallel = sample_paths(model, 64, 5);
  unsetenv("CHAOSKIT_THREADS");
  for (std::size_t p = 0; p < serial.paths.size(); ++p) {
    for (std::size_t i = 0; i < serial.paths[p].size(); ++i) {
      CHECK(serial.paths[p][i] == parallel.paths[p][i]);
    }
  }
}

TEST_CASE("sample_paths: Wiener variance within three standard errors") {
  const TimeGrid grid(1.0, 128);
  const FieldModel model(KernelSpec::wiener(), grid, 4);
  const int n_paths = 20000;
  const auto ensemble = sample_paths(model, n_paths, 2024);
  const double var = ensemble.variance_at(grid.subintervals());
  const double se = 1.0 * std::sqrt(2.0 / (n_paths - 1.0));
  CHECK(std::abs(var - 1.0) <= 3.0 * se);
  CHECK(std::abs(ensemble.mean_at(grid.subintervals())) <= 3.0 / std::sqrt(n_paths * 1.0));
}

TEST_CASE("sample_endpoint: agrees with the full-path sampler") {
  const TimeGrid grid(1.0, 64);
  for (const KernelSpec& spec : {KernelSpec::wiener(), KernelSpec::fbm(0.75)}) {
    const FieldModel model(spec, grid, 4);
    const auto ensemble = sample_paths(model, 8, 77);
    const auto endpoint = sample_endpoint(model, 1.0, 8, 77);
    for (int p = 0; p < 8; ++p) {
      CHECK(endpoint[static_cast<std::size_t>(p)] ==
            doctest::Approx(ensemble.paths[static_cast<std::size_t>(p)].back()).epsilon(1e-12));
    }
  }
}

TEST_CASE("sample_paths: fBm variance follows t^{2H}") {
  const TimeGrid grid(1.0, 256);
  const double hurst = 0.75;
  const FieldModel model(KernelSpec::fbm(hurst), grid, 4);
  const int n_paths = 10000;
  for (double t : {0.5, 1.0}) {
    const auto x = sample_endpoint(model, t, n_paths, 31);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n_paths;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= (n_paths - 1.0);
    const double target = std::pow(t, 2.0 * hurst);
    const double se = target * std::sqrt(2.0 / (n_paths - 1.0));
    // 3 SE plus the documented O(dt) kernel-quadrature bias allowance.
    CHECK(std::abs(var - target) <= 3.0 * se + 0.01 * target);
  }
}

TEST_CASE("sample_paths: OU lag covariance matches the kernel quadrature") {
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::ou_stable(1.0), grid, 4);
  const int n_paths = 20000;
  const auto ensemble = sample_paths(model, n_paths, 8);
  const int node_a = grid.index_of(1.0);
  const int node_b = grid.index_of(0.5);
  const double est = ensemble.covariance_at(node_a, node_b);
  const double ref = covariance(model.kernel(), grid, 1.0, 0.5);
  const double se = std::sqrt(2.0 / (n_paths - 1.0)) *
                    std::sqrt(covariance(model.kernel(), grid, 1.0, 1.0) *
                              covariance(model.kernel(), grid, 0.5, 0.5));
  CHECK(std::abs(est - ref) <= 3.0 * se);
}

TEST_CASE("normality: standardized marginals pass the moment gates") {
  const TimeGrid grid(1.0, 128);
  const FieldModel model(KernelSpec::fbm(0.7), grid, 4);
  const auto x = sample_endpoint(model, 1.0, 20000, 12);
  const auto report = check_normality(x);
  CHECK(report.passes(3.0));
}

TEST_CASE("wick exponential validation gates") {
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::ou_stable(1.0), grid, 32);
  const auto report = validate_wick_exponential(model, 0.5, 20000, 7);
  CHECK(report.mean.within(3.0));
  CHECK(report.second_moment.within(3.0));
  CHECK(report.second_moment.reference ==
        doctest::Approx(report.lognormal_reference).epsilon(0.02));
}

TEST_CASE("wick exponential on the Wiener field is the geometric Brownian motion") {
  // Pathwise exp(W(t) - t/2): unit mean, second moment e^t.
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::wiener(), grid, 32);
  const auto report = validate_wick_exponential(model, 1.0, 20000, 9);
  CHECK(report.mean.within(3.0));
  CHECK(report.second_moment.within(3.0));
  CHECK(report.lognormal_reference == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
}

TEST_CASE("heat validation: zero noise gives zero discrepancy") {
  const TimeGrid grid(0.5, 64);
  const FieldModel field(KernelSpec::wiener(), grid, 4);
  HeatProblem p;
  p.field = &field;
  p.xgrid = {16.0, 64};
  p.u0 = gaussian_bump(p.xgrid, 8.0, 1.0);
  p.a = {0.5};
  p.sigma = {0.0};
  const auto report = validate_heat_solution(p, 100, 3);
  CHECK(report.max_abs_discrepancy <= 1e-12);
}

TEST_CASE("heat validation: Gaussian-shift averaging reproduces the heat flow") {
  const TimeGrid grid(0.5, 128);
  HeatProblem p;
  p.xgrid = {16.0, 64};
  p.u0 = gaussian_bump(p.xgrid, 8.0, 1.0);

  const FieldModel wiener(KernelSpec::wiener(), grid, 4);
  p.field = &wiener;
  p.a = {0.6};
  p.sigma = {0.9};
  const auto rw = validate_heat_solution(p, 10000, 21);
  CHECK(rw.max_z <= 3.0);

  const FieldModel fbm(KernelSpec::fbm(0.75), grid, 4);
  p.field = &fbm;
  p.a = {1.0};
  p.sigma = {1.0};  // inside the window: T^{2H-1} = 0.5^{0.5} < 2a/sigma^2 = 2
  const auto rf = validate_heat_solution(p, 10000, 22);
  CHECK(rf.max_z <= 3.0);
}
