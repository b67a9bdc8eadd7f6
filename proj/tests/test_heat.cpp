#include <doctest.h>

#include <cmath>
#include <random>

#include "chaoskit/errors.hpp"
#include "chaoskit/heat.hpp"

using namespace chaoskit;

namespace {

// Independent deterministic oracle: Crank-Nicolson with the 3-point periodic
// Laplacian, solved by dense LU.
std::vector<double> crank_nicolson_heat(std::vector<double> u, double a, const SpatialGrid& g,
                                        double horizon, int steps) {
  const double dt = horizon / steps;
  const double mu = a * dt / (2.0 * g.dx() * g.dx());
  Matrix lhs(g.n, g.n);
  Matrix rhs(g.n, g.n);
  for (int j = 0; j < g.n; ++j) {
    lhs(j, j) = 1.0 + 2.0 * mu;
    rhs(j, j) = 1.0 - 2.0 * mu;
    lhs(j, (j + 1) % g.n) = -mu;
    lhs(j, (j + g.n - 1) % g.n) = -mu;
    rhs(j, (j + 1) % g.n) = mu;
    rhs(j, (j + g.n - 1) % g.n) = mu;
  }
  const LuFactors lu = lu_factor(lhs);
  for (int s = 0; s < steps; ++s) u = lu_solve(lu, matvec(rhs, u));
  return u;
}

HeatProblem make_problem(const FieldModel& field, double a, double sigma, double length = 16.0,
                         int nx = 64) {
  HeatProblem p;
  p.field = &field;
  p.xgrid = {length, nx};
  p.u0 = gaussian_bump(p.xgrid, length / 2.0, 1.0);
  p.a = {a};
  p.sigma = {sigma};
  return p;
}

}  // namespace

TEST_CASE("heat: zero noise reduces to the deterministic heat flow") {
  const TimeGrid grid(0.5, 64);
  const FieldModel field(KernelSpec::wiener(), grid, 4);
  const HeatProblem p = make_problem(field, 0.3, 0.0);
  const auto u = solve_heat_closed(p, std::vector<double>(grid.size(), 0.0));
  const auto oracle = crank_nicolson_heat(p.u0, 0.3, p.xgrid, 0.5, 512);
  for (int j = 0; j < p.xgrid.n; ++j) {
    CHECK(std::abs(u.back()[static_cast<std::size_t>(j)] -
                   oracle[static_cast<std::size_t>(j)]) <= 5e-3);
  }
  // Moment mean coincides with the noise-free solution.
  const auto moments = solve_heat_moments(p);
  for (int j = 0; j < p.xgrid.n; ++j) {
    CHECK(moments.mean.back()[static_cast<std::size_t>(j)] ==
          doctest::Approx(u.back()[static_cast<std::size_t>(j)]).epsilon(1e-12));
  }
}

TEST_CASE("heat: boundary case 2a = sigma^2 transports without smoothing") {
  const TimeGrid grid(1.0, 64);
  const FieldModel field(KernelSpec::wiener(), grid, 4);
  const double sigma = 0.8;
  const HeatProblem p = make_problem(field, 0.5 * sigma * sigma, sigma);

  // Margin is identically zero: parabolic, but no Gaussian smoothing at all.
  const auto report = check_parabolicity(p);
  CHECK(report.holds);
  for (double m : report.margin) CHECK(std::abs(m) <= 1e-12);

  // A path that lands on integer multiples of dx turns the solution into an
  // exact circular shift of u0.
  std::vector<double> path(static_cast<std::size_t>(grid.size()));
  const int cells = 5;
  for (int i = 0; i < grid.size(); ++i) {
    path[static_cast<std::size_t>(i)] = cells * p.xgrid.dx() * grid.node(i) / sigma;
  }
  const auto u = solve_heat_closed(p, path);
  const int shift = cells;  // at t = T the shift is exactly `cells` nodes
  for (int j = 0; j < p.xgrid.n; ++j) {
    const int src = (j - shift + p.xgrid.n) % p.xgrid.n;
    CHECK(u.back()[static_cast<std::size_t>(j)] ==
          doctest::Approx(p.u0[static_cast<std::size_t>(src)]).epsilon(1e-9));
  }
  // Norm is preserved exactly (pure phase in every mode).
  CHECK(spatial_norm_sq(u.back(), p.xgrid) ==
        doctest::Approx(spatial_norm_sq(p.u0, p.xgrid)).epsilon(1e-12));
}

TEST_CASE("heat: conservation of mass under path solutions") {
  const TimeGrid grid(1.0, 32);
  const FieldModel field(KernelSpec::ou_stable(1.0), grid, 4);
  const HeatProblem p = make_problem(field, 1.0, 0.7);
  std::vector<double> path(static_cast<std::size_t>(grid.size()));
  std::mt19937 gen(3);
  std::normal_distribution<double> normal;
  double w = 0.0;
  for (auto& v : path) {
    w += 0.1 * normal(gen);
    v = w;
  }
  const auto u = solve_heat_closed(p, path);
  double mass0 = 0.0;
  for (double v : p.u0) mass0 += v;
  for (const auto& slice : u) {
    double mass = 0.0;
    for (double v : slice) mass += v;
    CHECK(mass == doctest::Approx(mass0).epsilon(1e-11));
  }
}

TEST_CASE("heat: fBm blow-up threshold matches the closed form") {
  const TimeGrid grid(5.0, 256);
  const FieldModel field(KernelSpec::fbm(0.75), grid, 4);
  const HeatProblem p = make_problem(field, 1.0, 1.0);
  const auto report = check_parabolicity(p);
  CHECK(!report.holds);
  // t* = (2a/sigma^2)^{1/(2H-1)} = 4.
  CHECK(report.analytic_violation_t == doctest::Approx(4.0));
  CHECK(std::abs(report.first_violation_t - 4.0) <= grid.dt());

  // The pathwise solver raises exactly where the margin turns negative.
  try {
    solve_heat_closed(p, std::vector<double>(grid.size(), 0.0));
    FAIL("expected NegativeVarianceError");
  } catch (const NegativeVarianceError& e) {
    CHECK(e.time() >= report.first_violation_t - grid.dt());
    CHECK(e.time() <= report.first_violation_t + grid.dt());
  }
}

TEST_CASE("heat: parabolicity specializations") {
  const TimeGrid grid(1.0, 128);

  const FieldModel wiener(KernelSpec::wiener(), grid, 4);
  CHECK(check_parabolicity(make_problem(wiener, 1.0, 1.0)).holds);
  CHECK(!check_parabolicity(make_problem(wiener, 0.4, 1.0)).holds);

  // Stable OU: equivalent to 2a >= sigma^2.
  const FieldModel ou(KernelSpec::ou_stable(1.0), grid, 4);
  CHECK(check_parabolicity(make_problem(ou, 0.5, 1.0)).holds);
  CHECK(!check_parabolicity(make_problem(ou, 0.45, 1.0)).holds);

  // Unstable OU with 2a >= sigma^2: holds for small t only; the violation
  // time decreases with b.
  const TimeGrid longer(6.0, 512);
  const FieldModel ou1(KernelSpec::ou_unstable(1.0), longer, 4);
  const FieldModel ou2(KernelSpec::ou_unstable(2.0), longer, 4);
  const auto r1 = check_parabolicity(make_problem(ou1, 0.8, 1.0));
  const auto r2 = check_parabolicity(make_problem(ou2, 0.8, 1.0));
  CHECK(!r1.holds);
  CHECK(!r2.holds);
  CHECK(r1.first_violation_t > 0.3);
  CHECK(r2.first_violation_t < r1.first_violation_t);
  CHECK(r1.analytic_violation_t == doctest::Approx(r1.first_violation_t).epsilon(0.03));
}

TEST_CASE("heat: parabolicity dichotomy on random problems") {
  const TimeGrid grid(1.5, 128);
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> ua(0.2, 1.5);
  std::uniform_real_distribution<double> us(0.3, 1.5);
  std::uniform_int_distribution<int> kind(0, 3);
  for (int rep = 0; rep < 6; ++rep) {
    KernelSpec spec = KernelSpec::wiener();
    switch (kind(gen)) {
      case 0: spec = KernelSpec::wiener(); break;
      case 1: spec = KernelSpec::fbm(0.55 + 0.4 * ua(gen) / 1.5); break;
      case 2: spec = KernelSpec::ou_stable(0.5 + ua(gen)); break;
      case 3: spec = KernelSpec::ou_unstable(0.5 + ua(gen)); break;
    }
    const FieldModel field(spec, grid, 4);
    const HeatProblem p = make_problem(field, ua(gen), us(gen));
    const auto report = check_parabolicity(p);
    bool raised = false;
    try {
      solve_heat_closed(p, std::vector<double>(grid.size(), 0.0));
    } catch (const NegativeVarianceError&) {
      raised = true;
    }
    CHECK(report.holds == !raised);
  }
}

TEST_CASE("heat: fBm margin has at most one sign change") {
  const TimeGrid grid(5.0, 256);
  const FieldModel field(KernelSpec::fbm(0.8), grid, 4);
  const auto report = check_parabolicity(make_problem(field, 0.8, 1.0));
  int changes = 0;
  for (std::size_t i = 2; i < report.margin.size(); ++i) {
    if ((report.margin[i - 1] >= 0.0) != (report.margin[i] >= 0.0)) ++changes;
  }
  CHECK(changes <= 1);
}

TEST_CASE("heat: moment second moment decays at the margin rate") {
  const TimeGrid grid(1.0, 64);
  const FieldModel field(KernelSpec::wiener(), grid, 4);
  const HeatProblem p = make_problem(field, 1.0, 1.0);
  const auto moments = solve_heat_moments(p);
  // Parseval check of the initial slice.
  CHECK(moments.second_moment_l2.front() ==
        doctest::Approx(spatial_norm_sq(p.u0, p.xgrid)).epsilon(1e-12));
  // Strictly decaying for a stable problem.
  for (std::size_t i = 1; i < moments.second_moment_l2.size(); ++i) {
    CHECK(moments.second_moment_l2[i] < moments.second_moment_l2[i - 1]);
  }
}

TEST_CASE("heat: time-varying coefficients shift the margin") {
  const TimeGrid grid(1.0, 128);
  const FieldModel field(KernelSpec::wiener(), grid, 8);
  HeatProblem p = make_problem(field, 1.0, 1.0);
  // a(t) decays: the margin eventually turns negative even for the Wiener
  // kernel.
  p.a.assign(static_cast<std::size_t>(grid.size()), 0.0);
  for (int i = 0; i < grid.size(); ++i) {
    p.a[static_cast<std::size_t>(i)] = 1.2 * std::exp(-4.0 * grid.node(i));
  }
  p.sigma.assign(static_cast<std::size_t>(grid.size()), 1.0);
  const auto report = check_parabolicity(p);
  CHECK(!report.holds);
  CHECK(report.first_violation_t > 0.0);
  // Same margin from the weighted diagonal as from the constant-sigma path.
  HeatProblem q = make_problem(field, 1.0, 1.0);
  q.a = p.a;
  const auto report_const = check_parabolicity(q);
  for (std::size_t i = 0; i < report.margin.size(); ++i) {
    CHECK(report.margin[i] == doctest::Approx(report_const.margin[i]).epsilon(0.02).scale(0.01));
  }
}
