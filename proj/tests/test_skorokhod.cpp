#include <doctest.h>

#include <cmath>

#include "chaoskit/chaos_vector.hpp"
#include "chaoskit/errors.hpp"
#include "chaoskit/skorokhod.hpp"

using namespace chaoskit;

namespace {

ChaosVector field_at(const FieldModel& model, double t) {
  // X(t) as a scalar first-order chaos vector, with room for Wick squares.
  const int i = model.grid().index_of(t);
  ChaosVector v;
  v.truncation = {2, model.basis_dim()};
  for (int k = 1; k <= model.basis_dim(); ++k) {
    const double c = model.integrated_mtilde(k)[static_cast<std::size_t>(i)];
    if (c != 0.0) v.coeffs[MultiIndex::unit(k)] = c;
  }
  return v;
}

double coeff_distance(const ChaosVector& a, const ChaosVector& b) {
  double max_diff = 0.0;
  for (const auto& [alpha, c] : a.coeffs) max_diff = std::max(max_diff, std::abs(c - b.coeff(alpha)));
  for (const auto& [alpha, c] : b.coeffs) max_diff = std::max(max_diff, std::abs(c - a.coeff(alpha)));
  return max_diff;
}

}  // namespace

TEST_CASE("skorokhod: deterministic unit integrand gives the associated process") {
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::wiener(), grid, 16);
  const auto one = deterministic_process(std::vector<double>(grid.size(), 1.0), model);
  for (double t : {0.25, 1.0}) {
    const auto result = skorokhod_integral(one, model, t);
    const int i = grid.index_of(t);
    for (int k = 1; k <= model.basis_dim(); ++k) {
      const double expected = model.integrated_mtilde(k)[static_cast<std::size_t>(i)];
      CHECK(std::abs(result.coeff(MultiIndex::unit(k)) - expected) <= 1e-4);
    }
    // Nothing outside first order.
    for (const auto& [alpha, c] : result.coeffs) CHECK(alpha.order() == 1);
  }
}

TEST_CASE("skorokhod: integral of W is the second Wick power of W(1) over 2") {
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::wiener(), grid, 16);
  const auto w = associated_process(model);
  const auto result = skorokhod_integral(w, model, 1.0);

  const ChaosVector w1 = field_at(model, 1.0);
  auto target = wick_product(w1, w1).value;
  for (auto& [alpha, c] : target.coeffs) c *= 0.5;

  CHECK(coeff_distance(result, target) <= 1e-3);
  CHECK(result.mean() == 0.0);
}

TEST_CASE("skorokhod: isometry for deterministic integrands against the matrix oracle") {
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::ou_stable(1.0), grid, 64);
  std::vector<double> f(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.node(i);
    f[static_cast<std::size_t>(i)] = std::sin(2.0 * M_PI * t) + 0.3;
  }
  const auto result = skorokhod_integral(deterministic_process(f, model), model, 1.0);

  const auto kf = matvec(model.kstar(), f);
  double oracle = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    oracle += grid.weight(i) * kf[static_cast<std::size_t>(i)] * kf[static_cast<std::size_t>(i)];
  }
  CHECK(result.second_moment() == doctest::Approx(oracle).epsilon(2e-3));
}

TEST_CASE("skorokhod: linearity is exact on coefficients") {
  const TimeGrid grid(1.0, 64);
  const FieldModel model(KernelSpec::ou_stable(0.5), grid, 8);
  const auto w = associated_process(model);
  std::vector<double> ramp(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) ramp[static_cast<std::size_t>(i)] = grid.node(i);
  const auto f = deterministic_process(ramp, model);

  ChaosProcess combo;
  combo.truncation = {1, model.basis_dim()};
  combo.grid = grid;
  for (const auto& [alpha, path] : w.coeffs) {
    auto& target = combo.coeffs[alpha];
    target.assign(path.size(), 0.0);
    for (std::size_t i = 0; i < path.size(); ++i) target[i] += 2.0 * path[i];
  }
  for (const auto& [alpha, path] : f.coeffs) {
    auto& target = combo.coeffs[alpha];
    if (target.empty()) target.assign(path.size(), 0.0);
    for (std::size_t i = 0; i < path.size(); ++i) target[i] -= 3.0 * path[i];
  }

  const auto rc = skorokhod_integral(combo, model, 1.0);
  const auto rw = skorokhod_integral(w, model, 1.0);
  const auto rf = skorokhod_integral(f, model, 1.0);
  for (const auto& [alpha, c] : rc.coeffs) {
    CHECK(c == doctest::Approx(2.0 * rw.coeff(alpha) - 3.0 * rf.coeff(alpha)).epsilon(1e-12));
  }
}

TEST_CASE("skorokhod: first-order duality with the basis") {
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::wiener(), grid, 8);
  std::vector<double> f(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) f[static_cast<std::size_t>(i)] = std::exp(-grid.node(i));
  const auto result = skorokhod_integral(deterministic_process(f, model), model, 1.0);
  for (int k = 1; k <= model.basis_dim(); ++k) {
    std::vector<double> prod(f.size());
    const auto& mk = model.basis(k);
    for (std::size_t i = 0; i < f.size(); ++i) prod[i] = f[i] * mk[i];
    CHECK(result.coeff(MultiIndex::unit(k)) ==
          doctest::Approx(trapezoid(prod, grid)).epsilon(1e-12));
  }
}

TEST_CASE("skorokhod: running integral slices equal the fixed-time integral") {
  const TimeGrid grid(1.0, 64);
  const FieldModel model(KernelSpec::ou_stable(1.0), grid, 8);
  const auto w = associated_process(model);
  const auto running = skorokhod_running(w, model);
  for (int i : {0, 7, 32, 64}) {
    const auto fixed = skorokhod_integral(w, model, grid.node(i));
    const auto slice = running.at_node(i);
    for (const auto& [alpha, c] : fixed.coeffs) {
      CHECK(slice.coeff(alpha) == doctest::Approx(c).epsilon(1e-12));
    }
  }
}

TEST_CASE("skorokhod: Wick-Riemann sums converge partition-point independently") {
  const TimeGrid grid(1.0, 512);
  const FieldModel model(KernelSpec::wiener(), grid, 32);
  const auto w = associated_process(model);
  const auto exact = skorokhod_integral(w, model, 1.0);

  auto riemann = [&](int pieces, bool left) {
    ChaosVector sum;
    sum.truncation = {2, model.basis_dim()};
    const int stride = grid.subintervals() / pieces;
    for (int p = 0; p < pieces; ++p) {
      const ChaosVector star = field_at(model, grid.node(left ? p * stride : (p + 1) * stride));
      ChaosVector inc;
      inc.truncation = {2, model.basis_dim()};
      const ChaosVector lo = field_at(model, grid.node(p * stride));
      const ChaosVector hi = field_at(model, grid.node((p + 1) * stride));
      for (int k = 1; k <= model.basis_dim(); ++k) {
        const MultiIndex ek = MultiIndex::unit(k);
        const double d = hi.coeff(ek) - lo.coeff(ek);
        if (d != 0.0) inc.coeffs[ek] = d;
      }
      const auto term = wick_product(star, inc).value;
      for (const auto& [alpha, c] : term.coeffs) sum.coeffs[alpha] += c;
    }
    return sum;
  };

  double prev = -1.0;
  for (int pieces : {8, 16, 32, 64}) {
    const double d_left = coeff_distance(riemann(pieces, true), exact);
    const double d_right = coeff_distance(riemann(pieces, false), exact);
    // Partition-point independence in the limit: both endpoint choices head
    // to the same integral at first order in the partition width.
    if (prev >= 0.0) CHECK(d_left <= 0.75 * prev);
    if (pieces == 64) {
      CHECK(d_left <= 0.02);
      CHECK(d_right <= 0.04);
    }
    prev = d_left;
  }
}

TEST_CASE("stratonovich: deterministic integrands reduce to skorokhod") {
  const TimeGrid grid(1.0, 128);
  const FieldModel model(KernelSpec::ou_unstable(0.5), grid, 8);
  std::vector<double> f(static_cast<std::size_t>(grid.size()), 0.7);
  const auto d = deterministic_process(f, model);
  const auto strat = stratonovich_integral(d, model);
  const auto skor = skorokhod_integral(d, model, 1.0);
  CHECK(coeff_distance(strat.value, skor) == 0.0);
  CHECK(strat.top_grade_mass == 0.0);
}

TEST_CASE("stratonovich: running Wiener integrand") {
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::wiener(), grid, 16);
  auto w = associated_process(model);
  w.truncation.max_order = 2;  // true coefficients above first order vanish
  const auto strat = stratonovich_integral(w, model);
  const auto skor = skorokhod_integral(w, model, 1.0);

  // mean W^2(T) = T, and the trace term contributes exactly the difference.
  CHECK(strat.value.mean() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(strat.value.mean() - skor.mean() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(strat.top_grade_mass == 0.0);

  // Stratonovich minus Skorokhod equals the trace, coefficientwise, exactly.
  const auto trace = malliavin_trace(w, model);
  for (const auto& [alpha, c] : strat.value.coeffs) {
    CHECK(c - skor.coeff(alpha) == doctest::Approx(trace.coeff(alpha)).epsilon(1e-14));
  }
}

TEST_CASE("check_integrability: reports") {
  const TimeGrid grid(1.0, 256);
  const FieldModel model(KernelSpec::wiener(), grid, 64);

  const auto d = deterministic_process(std::vector<double>(grid.size(), 2.0), model);
  const auto rd = check_integrability(d);
  CHECK(rd.weighted_sum == 0.0);
  CHECK(rd.top_order_fraction == 0.0);

  // W on [0,1]: sum_k int Mtilde_k^2 -> int_0^1 t dt = 1/2 as K grows.
  const auto w = associated_process(model);
  const auto rw = check_integrability(w);
  CHECK(rw.weighted_sum == doctest::Approx(0.5).epsilon(0.02));

  // Constructed near-divergent family: coefficient 1/sqrt(n) at n*eps_1.
  ChaosProcess bad;
  bad.truncation = {5, 1};
  bad.grid = grid;
  for (int n = 1; n <= 5; ++n) {
    bad.coeffs[MultiIndex::from_dense({n})] =
        std::vector<double>(grid.size(), 1.0 / std::sqrt(static_cast<double>(n)));
  }
  const auto rb = check_integrability(bad);
  CHECK(rb.top_order_fraction > 0.10);
}

TEST_CASE("skorokhod: grid mismatch is rejected") {
  const TimeGrid grid(1.0, 64);
  const TimeGrid other(1.0, 32);
  const FieldModel model(KernelSpec::wiener(), grid, 4);
  ChaosProcess eta;
  eta.truncation = {1, 4};
  eta.grid = other;
  eta.coeffs[MultiIndex::zero()] = std::vector<double>(other.size(), 1.0);
  CHECK_THROWS_AS(skorokhod_integral(eta, model, 0.5), GridMismatchError);
  CHECK_THROWS_AS(skorokhod_integral(associated_process(model), model, 0.513), GridMismatchError);
}
