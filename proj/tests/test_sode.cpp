#include <doctest.h>

#include <cmath>

#include "chaoskit/errors.hpp"
#include "chaoskit/skorokhod.hpp"
#include "chaoskit/sode.hpp"

using namespace chaoskit;

TEST_CASE("sode: zero diffusion reduces to the deterministic exponential") {
  const TimeGrid grid(1.0, 128);
  const FieldModel field(KernelSpec::wiener(), grid, 4);
  SodeProblem p = SodeProblem::single(field);
  p.initial = 2.0;
  p.sigmas[0] = std::vector<double>(grid.size(), 0.0);
  p.drift.resize(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    p.drift[static_cast<std::size_t>(i)] = std::sin(2.0 * M_PI * grid.node(i));
  }
  const auto u = solve_propagator(p, {3, 4});
  const auto factor = p.deterministic_factor();
  const auto mean = u.mean_path();
  for (int i = 0; i < grid.size(); ++i) {
    CHECK(mean[static_cast<std::size_t>(i)] ==
          doctest::Approx(factor[static_cast<std::size_t>(i)]).epsilon(1e-14));
  }
  for (const auto& [alpha, path] : u.coeffs) {
    if (alpha.order() == 0) continue;
    for (double v : path) CHECK(v == 0.0);
  }
}

TEST_CASE("sode: first-grade coefficients are the integrated basis") {
  const TimeGrid grid(1.0, 512);
  const FieldModel field(KernelSpec::wiener(), grid, 6);
  const auto u = solve_propagator(SodeProblem::single(field), {2, 6});
  for (int k = 1; k <= 6; ++k) {
    const auto& path = u.coeffs.at(MultiIndex::unit(k));
    const auto& expected = field.integrated_mtilde(k);
    for (int i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(path[static_cast<std::size_t>(i)] -
                     expected[static_cast<std::size_t>(i)]) <= 1e-4);
    }
  }
}

TEST_CASE("sode: propagator reproduces the product closed form at |alpha| <= 4") {
  const TimeGrid grid(1.0, 512);
  const FieldModel field(KernelSpec::wiener(), grid, 6);
  const auto u = solve_propagator(SodeProblem::single(field), {4, 6});
  const int last = grid.subintervals();
  for (const auto& [alpha, path] : u.coeffs) {
    double prod = 1.0;
    for (const auto& [slot, mult] : alpha.entries()) {
      for (int j = 0; j < mult; ++j) {
        prod *= field.integrated_mtilde(slot)[static_cast<std::size_t>(last)];
      }
    }
    const double expected = prod / std::sqrt(factorial(alpha));
    CHECK(std::abs(path[static_cast<std::size_t>(last)] - expected) <= 1e-4);
  }
}

TEST_CASE("sode: propagator vs closed form across kernels") {
  const TimeGrid grid(1.0, 512);
  for (const KernelSpec& kernel :
       {KernelSpec::wiener(), KernelSpec::fbm(0.75), KernelSpec::ou_stable(1.0)}) {
    const FieldModel field(kernel, grid, 8);
    const SodeProblem p = SodeProblem::single(field);
    const TruncationSpec trunc{4, 8};
    const auto swept = solve_propagator(p, trunc);
    const auto closed = closed_form(p, trunc);
    double max_diff = 0.0;
    for (const auto& [alpha, path] : swept.coeffs) {
      const auto& other = closed.coeffs.at(alpha);
      for (std::size_t i = 0; i < path.size(); ++i) {
        max_diff = std::max(max_diff, std::abs(path[i] - other[i]));
      }
    }
    CHECK(max_diff <= 5e-3);
  }
}

TEST_CASE("sode: propagator vs closed form at the full basis width") {
  // Same comparison at K = 32 and n = 512, one kernel (the dense field is
  // ~0.5 GB transient at this width).
  const TimeGrid grid(1.0, 512);
  const FieldModel field(KernelSpec::wiener(), grid, 32);
  const SodeProblem p = SodeProblem::single(field);
  const TruncationSpec trunc{4, 32};
  const auto swept = solve_propagator(p, trunc);
  const auto closed = closed_form(p, trunc);
  double max_diff = 0.0;
  for (const auto& [alpha, path] : swept.coeffs) {
    const auto& other = closed.coeffs.at(alpha);
    for (std::size_t i = 0; i < path.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(path[i] - other[i]));
    }
  }
  CHECK(max_diff <= 5e-3);
}

TEST_CASE("sode: residual of the propagator solution under the integral") {
  const TimeGrid grid(1.0, 128);
  const FieldModel field(KernelSpec::ou_stable(1.0), grid, 6);
  const SodeProblem p = SodeProblem::single(field);
  const TruncationSpec trunc{4, 6};
  const auto u = solve_propagator(p, trunc);
  const auto integral = skorokhod_running(u, field);
  for (const auto& [alpha, path] : u.coeffs) {
    const bool zero_index = alpha.order() == 0;
    const auto it = integral.coeffs.find(alpha);
    for (std::size_t i = 0; i < path.size(); ++i) {
      const double integ = it == integral.coeffs.end() ? 0.0 : it->second[i];
      const double residual = path[i] - (zero_index ? 1.0 : 0.0) - integ;
      CHECK(std::abs(residual) <= 1e-13);
    }
  }
}

TEST_CASE("sode: mean is preserved exactly and output is deterministic") {
  const TimeGrid grid(1.0, 128);
  const FieldModel field(KernelSpec::ou_unstable(0.5), grid, 4);
  SodeProblem p = SodeProblem::single(field);
  p.initial = 1.5;
  p.drift = std::vector<double>(grid.size(), -0.3);
  const TruncationSpec trunc{3, 4};
  const auto u1 = solve_propagator(p, trunc);
  const auto u2 = solve_propagator(p, trunc);
  const auto factor = p.deterministic_factor();
  const auto mean = u1.mean_path();
  for (int i = 0; i < grid.size(); ++i) {
    CHECK(mean[static_cast<std::size_t>(i)] == factor[static_cast<std::size_t>(i)]);
  }
  for (const auto& [alpha, path] : u1.coeffs) {
    const auto& other = u2.coeffs.at(alpha);
    for (std::size_t i = 0; i < path.size(); ++i) CHECK(path[i] == other[i]);
  }
}

TEST_CASE("sode: chains factorization agrees with the dense sweep") {
  const TimeGrid grid(1.0, 256);
  const FieldModel field(KernelSpec::ou_stable(1.0), grid, 4);
  const SodeProblem p = SodeProblem::single(field);
  const TruncationSpec trunc{4, 4};
  const auto dense = solve_propagator(p, trunc);
  const auto chains = solve_propagator_chains(p, trunc.max_order);

  const int node = grid.subintervals();
  double dense_moment = 0.0;
  for (const auto& [alpha, path] : dense.coeffs) {
    const double c = chains_coefficient(chains, alpha, node);
    CHECK(std::abs(path[static_cast<std::size_t>(node)] - c) <= 2e-5);
    dense_moment += path[static_cast<std::size_t>(node)] * path[static_cast<std::size_t>(node)];
  }
  CHECK(chains_second_moment(chains, node) == doctest::Approx(dense_moment).epsilon(1e-4));
  CHECK(chains_mean(chains, node) == doctest::Approx(1.0));

  // Grade sums from the generating polynomial equal brute-force sums.
  const auto grades = chains_grade_moments(chains, node);
  std::vector<double> brute(grades.size(), 0.0);
  for (const MultiIndex& alpha : enumerate(trunc)) {
    const double c = chains_coefficient(chains, alpha, node);
    brute[static_cast<std::size_t>(alpha.order())] += c * c;
  }
  for (std::size_t n = 0; n < grades.size(); ++n) {
    CHECK(grades[n] == doctest::Approx(brute[n]).epsilon(1e-12));
  }
}

TEST_CASE("sode: independent fields add their variances") {
  const TimeGrid grid(1.0, 256);
  const FieldModel f1(KernelSpec::wiener(), grid, 16);
  const FieldModel f2(KernelSpec::wiener(), grid, 16);
  const double s1 = 0.8, s2 = 0.6;

  SodeProblem two;
  two.fields = {&f1, &f2};
  two.sigmas = {std::vector<double>(grid.size(), s1), std::vector<double>(grid.size(), s2)};

  SodeProblem one = SodeProblem::single(f1);
  one.sigmas[0] = std::vector<double>(grid.size(), std::sqrt(s1 * s1 + s2 * s2));

  const int order = 8;
  const auto c2 = solve_propagator_chains(two, order);
  const auto c1 = solve_propagator_chains(one, order);
  const int node = grid.subintervals() / 2;
  CHECK(chains_second_moment(c2, node) ==
        doctest::Approx(chains_second_moment(c1, node)).epsilon(1e-6));
}

TEST_CASE("sode: closed-form second moment approaches exp(R(t,t))") {
  const TimeGrid grid(1.0, 512);
  const FieldModel field(KernelSpec::ou_stable(1.0), grid, 64);
  const auto chains = solve_propagator_chains(SodeProblem::single(field), 8);
  const int node = grid.subintervals() / 2;
  const double r = covariance(field.kernel(), grid, 0.5, 0.5);
  CHECK(chains_second_moment(chains, node) == doctest::Approx(std::exp(r)).epsilon(0.02));
}

TEST_CASE("sode: dolean comparison") {
  const TimeGrid grid(1.0, 64);

  const FieldModel wiener(KernelSpec::wiener(), grid, 4);
  const auto rw = dolean_comparison(SodeProblem::single(wiener));
  for (double d : rw.difference) CHECK(d == 0.0);

  const FieldModel ou(KernelSpec::ou_stable(1.0), grid, 4);
  const auto ro = dolean_comparison(SodeProblem::single(ou));
  const int last = grid.subintervals();
  CHECK(ro.dolean_correction[static_cast<std::size_t>(last)] == doctest::Approx(0.5));
  CHECK(ro.wick_correction[static_cast<std::size_t>(last)] ==
        doctest::Approx((1.0 - std::exp(-2.0)) / 4.0));

  const FieldModel fbm(KernelSpec::fbm(0.75), grid, 4);
  CHECK_THROWS_AS(dolean_comparison(SodeProblem::single(fbm)), UnsupportedFieldError);
}
