#include "chaoskit/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

using Complex = std::complex<double>;
using ModeHistory = std::vector<std::vector<Complex>>;  // [time][mode]

constexpr double kTol = 1e-12;

struct Layout {
  int field_count = 0;
  int kdim = 0;
  int stride = 1;  // field-grid nodes per stepping node
  int nt = 0;
  int nx = 0;
};

Layout validate(const EvolutionProblem& p) {
  if (p.fields.empty()) throw Error("evolution problem has no driving field");
  if (p.op_m.size() != p.fields.size()) {
    throw Error("one noise operator per driving field required");
  }
  Layout lay;
  lay.field_count = static_cast<int>(p.fields.size());
  lay.kdim = p.fields.front()->basis_dim();
  const TimeGrid& fg = p.fields.front()->grid();
  for (const FieldModel* f : p.fields) {
    if (!(f->grid() == fg)) throw GridMismatchError("driving fields live on different grids");
    if (f->basis_dim() != lay.kdim) throw Error("driving fields must share the basis dimension");
  }
  if (p.tgrid.horizon() != fg.horizon()) {
    throw GridMismatchError("stepping horizon differs from the field horizon");
  }
  if (fg.subintervals() % p.tgrid.subintervals() != 0) {
    throw GridMismatchError("stepping grid must divide the field grid");
  }
  lay.stride = fg.subintervals() / p.tgrid.subintervals();
  lay.nt = p.tgrid.subintervals();
  lay.nx = p.xgrid.n;
  if (static_cast<int>(p.u0.size()) != lay.nx) {
    throw GridMismatchError("initial condition does not match the spatial grid");
  }
  if (!p.forcing_f.empty() && static_cast<int>(p.forcing_f.size()) != lay.nt + 1) {
    throw GridMismatchError("forcing f must be sampled on the stepping nodes");
  }
  if (!p.forcing_g.empty() && p.forcing_g.size() != p.fields.size()) {
    throw Error("one g forcing per field (or none)");
  }
  if (!p.knorm.empty() && p.knorm.size() != p.fields.size()) {
    throw Error("one operator norm per field (or none)");
  }
  return lay;
}

bool all_symbols(const EvolutionProblem& p) {
  if (p.op_a.kind() != SpatialOperator::Kind::Symbol) return false;
  for (const SpatialOperator& m : p.op_m) {
    if (m.kind() != SpatialOperator::Kind::Symbol) return false;
  }
  return true;
}

Matrix as_matrix(const SpatialOperator& op, int nx) {
  if (op.kind() == SpatialOperator::Kind::Matrix) return op.matrix();
  Matrix m(nx, nx);
  std::vector<double> e(static_cast<std::size_t>(nx), 0.0);
  for (int j = 0; j < nx; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    const std::vector<double> col = op.apply(e);
    for (int i = 0; i < nx; ++i) m(i, j) = col[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  return m;
}

std::vector<double> slot_mtilde(const EvolutionProblem& p, const Layout& lay, int slot) {
  const int field_idx = (slot - 1) / lay.kdim;
  const int k = (slot - 1) % lay.kdim + 1;
  const std::vector<double>& full = p.fields[static_cast<std::size_t>(field_idx)]->mtilde(k);
  std::vector<double> out(static_cast<std::size_t>(lay.nt) + 1);
  for (int i = 0; i <= lay.nt; ++i) {
    out[static_cast<std::size_t>(i)] = full[static_cast<std::size_t>(i * lay.stride)];
  }
  return out;
}

/// Forward-difference X-seminorm symbol |e^{i y dx} - 1|^2 / dx^2.
double seminorm_symbol(const SpatialGrid& g, int mode) {
  const double y = g.frequency(mode);
  return (2.0 - 2.0 * std::cos(y * g.dx())) / (g.dx() * g.dx());
}

double x_norm_sq(const std::vector<double>& v, const SpatialGrid& g) {
  double fwd = 0.0;
  for (int j = 0; j < g.n; ++j) {
    const double d = v[static_cast<std::size_t>((j + 1) % g.n)] - v[static_cast<std::size_t>(j)];
    fwd += d * d;
  }
  return spatial_norm_sq(v, g) + fwd / g.dx();
}

void guard_size(const TruncationSpec& trunc, int nt, int nx) {
  if (static_cast<double>(trunc.size()) * (nt + 1) * nx > 4e7) {
    throw TruncationTooLargeError("dense chaos solve would exceed the memory guard");
  }
}

ChaosField solve_spectral(const EvolutionProblem& p, const TruncationSpec& trunc,
                          TimeScheme scheme, const Layout& lay) {
  const int nt = lay.nt;
  const int nx = lay.nx;
  const double dt = p.tgrid.dt();
  const std::vector<Complex>& lam = p.op_a.symbol();
  guard_size(trunc, nt, nx);

  if (scheme == TimeScheme::ExplicitEuler) {
    double rho = 0.0;
    for (const Complex& l : lam) rho = std::max(rho, std::abs(l));
    if (rho * dt > 2.0) {
      throw UnstableStepError("explicit step violates |lambda| dt <= 2 (spectral radius " +
                              std::to_string(rho) + ")");
    }
  }

  std::vector<std::vector<double>> mt;
  for (int s = 1; s <= trunc.max_dim; ++s) mt.push_back(slot_mtilde(p, lay, s));

  const std::vector<Complex> u0hat = dft(p.u0);
  ModeHistory fhat;
  if (!p.forcing_f.empty()) {
    fhat.reserve(static_cast<std::size_t>(nt) + 1);
    for (int i = 0; i <= nt; ++i) fhat.push_back(dft(p.forcing_f[static_cast<std::size_t>(i)]));
  }
  std::vector<ModeHistory> ghat(p.op_m.size());
  for (std::size_t l = 0; l < p.forcing_g.size(); ++l) {
    if (p.forcing_g[l].empty()) continue;
    ghat[l].reserve(static_cast<std::size_t>(nt) + 1);
    for (int i = 0; i <= nt; ++i) ghat[l].push_back(dft(p.forcing_g[l][static_cast<std::size_t>(i)]));
  }

  ChaosField out;
  out.truncation = trunc;
  out.tgrid = p.tgrid;
  out.xgrid = p.xgrid;

  std::map<MultiIndex, ModeHistory> prev_grade;
  std::map<MultiIndex, ModeHistory> cur_grade;
  int current_order = 0;

  ModeHistory force(static_cast<std::size_t>(nt) + 1,
                    std::vector<Complex>(static_cast<std::size_t>(nx)));
  for (const MultiIndex& alpha : enumerate(trunc)) {
    if (alpha.order() != current_order) {
      prev_grade.swap(cur_grade);
      cur_grade.clear();
      current_order = alpha.order();
    }

    for (auto& slice : force) std::fill(slice.begin(), slice.end(), Complex{0.0, 0.0});
    if (alpha.order() == 0) {
      if (!fhat.empty()) force = fhat;
    } else {
      for (const auto& [slot, mult] : alpha.entries()) {
        const int field_idx = (slot - 1) / lay.kdim;
        const std::vector<Complex>& mu = p.op_m[static_cast<std::size_t>(field_idx)].symbol();
        const double root = std::sqrt(static_cast<double>(mult));
        const ModeHistory& hist = prev_grade.at(sub_unit(alpha, slot));
        const std::vector<double>& w = mt[static_cast<std::size_t>(slot - 1)];
        const ModeHistory* g = (alpha.order() == 1 && !ghat[static_cast<std::size_t>(field_idx)].empty())
                                   ? &ghat[static_cast<std::size_t>(field_idx)]
                                   : nullptr;
        for (int i = 0; i <= nt; ++i) {
          const double wi = root * w[static_cast<std::size_t>(i)];
          auto& dst = force[static_cast<std::size_t>(i)];
          const auto& src = hist[static_cast<std::size_t>(i)];
          for (int m = 0; m < nx; ++m) {
            Complex term = mu[static_cast<std::size_t>(m)] * src[static_cast<std::size_t>(m)];
            if (g != nullptr) term += (*g)[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
            dst[static_cast<std::size_t>(m)] += wi * term;
          }
        }
      }
    }

    ModeHistory h(static_cast<std::size_t>(nt) + 1,
                  std::vector<Complex>(static_cast<std::size_t>(nx)));
    if (alpha.order() == 0) h[0] = u0hat;
    for (int i = 0; i < nt; ++i) {
      const auto& fi = force[static_cast<std::size_t>(i)];
      const auto& fi1 = force[static_cast<std::size_t>(i) + 1];
      auto& cur = h[static_cast<std::size_t>(i)];
      auto& nxt = h[static_cast<std::size_t>(i) + 1];
      for (int m = 0; m < nx; ++m) {
        const Complex l = lam[static_cast<std::size_t>(m)];
        const Complex u = cur[static_cast<std::size_t>(m)];
        switch (scheme) {
          case TimeScheme::Exponential: {
            const Complex e = std::exp(l * dt);
            nxt[static_cast<std::size_t>(m)] =
                e * u + 0.5 * dt * (e * fi[static_cast<std::size_t>(m)] + fi1[static_cast<std::size_t>(m)]);
            break;
          }
          case TimeScheme::CrankNicolson:
            nxt[static_cast<std::size_t>(m)] =
                ((1.0 + 0.5 * dt * l) * u +
                 0.5 * dt * (fi[static_cast<std::size_t>(m)] + fi1[static_cast<std::size_t>(m)])) /
                (1.0 - 0.5 * dt * l);
            break;
          case TimeScheme::ExplicitEuler:
            nxt[static_cast<std::size_t>(m)] = u + dt * (l * u + fi[static_cast<std::size_t>(m)]);
            break;
        }
      }
    }

    auto& field_out = out.coeffs[alpha];
    field_out.reserve(static_cast<std::size_t>(nt) + 1);
    for (int i = 0; i <= nt; ++i) field_out.push_back(idft_real(h[static_cast<std::size_t>(i)]));
    cur_grade.emplace(alpha, std::move(h));
  }
  return out;
}

ChaosField solve_matrix(const EvolutionProblem& p, const TruncationSpec& trunc, TimeScheme scheme,
                        const Layout& lay) {
  const int nt = lay.nt;
  const int nx = lay.nx;
  const double dt = p.tgrid.dt();
  guard_size(trunc, nt, nx);
  const Matrix a = as_matrix(p.op_a, nx);
  std::vector<Matrix> ms;
  for (const SpatialOperator& op : p.op_m) ms.push_back(as_matrix(op, nx));

  if (scheme == TimeScheme::ExplicitEuler) {
    std::vector<double> unit_w(static_cast<std::size_t>(nx), 1.0);
    const double norm = weighted_operator_norm(a, unit_w);
    if (norm * dt > 2.0) {
      throw UnstableStepError("explicit step violates ||A|| dt <= 2 (norm estimate " +
                              std::to_string(norm) + ")");
    }
  }

  Matrix lhs = Matrix::identity(nx);
  Matrix rhs_m = Matrix::identity(nx);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < nx; ++j) {
      lhs(i, j) -= 0.5 * dt * a(i, j);
      rhs_m(i, j) += 0.5 * dt * a(i, j);
    }
  }
  const LuFactors lu = lu_factor(lhs);

  std::vector<std::vector<double>> mt;
  for (int s = 1; s <= trunc.max_dim; ++s) mt.push_back(slot_mtilde(p, lay, s));

  ChaosField out;
  out.truncation = trunc;
  out.tgrid = p.tgrid;
  out.xgrid = p.xgrid;

  std::vector<std::vector<double>> force(static_cast<std::size_t>(nt) + 1,
                                         std::vector<double>(static_cast<std::size_t>(nx), 0.0));
  for (const MultiIndex& alpha : enumerate(trunc)) {
    for (auto& slice : force) std::fill(slice.begin(), slice.end(), 0.0);
    if (alpha.order() == 0) {
      if (!p.forcing_f.empty()) force = p.forcing_f;
    } else {
      for (const auto& [slot, mult] : alpha.entries()) {
        const int field_idx = (slot - 1) / lay.kdim;
        const double root = std::sqrt(static_cast<double>(mult));
        const auto& lower = out.coeffs.at(sub_unit(alpha, slot));
        const std::vector<double>& w = mt[static_cast<std::size_t>(slot - 1)];
        const bool has_g = alpha.order() == 1 && !p.forcing_g.empty() &&
                           !p.forcing_g[static_cast<std::size_t>(field_idx)].empty();
        for (int i = 0; i <= nt; ++i) {
          std::vector<double> term =
              matvec(ms[static_cast<std::size_t>(field_idx)], lower[static_cast<std::size_t>(i)]);
          if (has_g) {
            const auto& g =
                p.forcing_g[static_cast<std::size_t>(field_idx)][static_cast<std::size_t>(i)];
            for (int j = 0; j < nx; ++j) term[static_cast<std::size_t>(j)] += g[static_cast<std::size_t>(j)];
          }
          const double wi = root * w[static_cast<std::size_t>(i)];
          auto& dst = force[static_cast<std::size_t>(i)];
          for (int j = 0; j < nx; ++j) dst[static_cast<std::size_t>(j)] += wi * term[static_cast<std::size_t>(j)];
        }
      }
    }

    std::vector<std::vector<double>> h(static_cast<std::size_t>(nt) + 1,
                                       std::vector<double>(static_cast<std::size_t>(nx), 0.0));
    if (alpha.order() == 0) h[0] = p.u0;
    for (int i = 0; i < nt; ++i) {
      const auto& u = h[static_cast<std::size_t>(i)];
      std::vector<double> next;
      if (scheme == TimeScheme::ExplicitEuler) {
        next = matvec(a, u);
        for (int j = 0; j < nx; ++j) {
          next[static_cast<std::size_t>(j)] =
              u[static_cast<std::size_t>(j)] +
              dt * (next[static_cast<std::size_t>(j)] +
                    force[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
      } else {
        std::vector<double> rhs = matvec(rhs_m, u);
        for (int j = 0; j < nx; ++j) {
          rhs[static_cast<std::size_t>(j)] +=
              0.5 * dt * (force[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                          force[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(j)]);
        }
        next = lu_solve(lu, rhs);
      }
      h[static_cast<std::size_t>(i) + 1] = std::move(next);
    }
    out.coeffs.emplace(alpha, std::move(h));
  }
  return out;
}

// Shared assembly of the per-mode quadratic forms for the symbol path.
double mode_form(const EvolutionProblem& p, const std::vector<double>& knorm, int m) {
  double r = 2.0 * p.op_a.symbol()[static_cast<std::size_t>(m)].real();
  for (std::size_t l = 0; l < p.op_m.size(); ++l) {
    const double k = knorm[l];
    r += k * k * std::norm(p.op_m[l].symbol()[static_cast<std::size_t>(m)]);
  }
  return r;
}

}  // namespace

double EvolutionProblem::knorm_of(int field_idx) const {
  if (!knorm.empty()) return knorm[static_cast<std::size_t>(field_idx)];
  const auto& bound = fields[static_cast<std::size_t>(field_idx)]->bound();
  if (!bound.has_value()) {
    throw HypothesesUnverifiableError("field " + std::to_string(field_idx) +
                                      " has no closed-form norm bound; supply knorm");
  }
  return bound->norm();
}

ChaosField solve_evolution_chaos(const EvolutionProblem& p, const TruncationSpec& truncation,
                                 TimeScheme scheme) {
  const Layout lay = validate(p);
  if (truncation.max_dim > lay.field_count * lay.kdim) {
    throw Error("truncation references more slots than fields x basis functions");
  }
  if (all_symbols(p)) return solve_spectral(p, truncation, scheme, lay);
  return solve_matrix(p, truncation, scheme, lay);
}

EvolutionEnergies energies_of(const ChaosField& u) {
  EvolutionEnergies e;
  e.max_order = u.truncation.max_order;
  e.tgrid = u.tgrid;
  const int len = u.tgrid.size();
  e.grade_h.assign(static_cast<std::size_t>(e.max_order) + 1,
                   std::vector<double>(static_cast<std::size_t>(len), 0.0));
  e.grade_x.assign(static_cast<std::size_t>(e.max_order) + 1, 0.0);
  std::vector<double> x_path(static_cast<std::size_t>(len));
  for (const auto& [alpha, hist] : u.coeffs) {
    const int g = alpha.order();
    for (int i = 0; i < len; ++i) {
      e.grade_h[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] +=
          spatial_norm_sq(hist[static_cast<std::size_t>(i)], u.xgrid);
      x_path[static_cast<std::size_t>(i)] = x_norm_sq(hist[static_cast<std::size_t>(i)], u.xgrid);
    }
    e.grade_x[static_cast<std::size_t>(g)] += trapezoid(x_path, u.tgrid);
  }
  return e;
}

EvolutionEnergies evolution_energies(const EvolutionProblem& p, int max_order) {
  const Layout lay = validate(p);
  if (!(all_symbols(p) && p.forcing_f.empty() && p.forcing_g.empty())) {
    return energies_of(
        solve_evolution_chaos(p, TruncationSpec{max_order, lay.field_count * lay.kdim}));
  }

  const TimeGrid& fg = p.fields.front()->grid();
  const int len = fg.size();
  const int slots = lay.field_count * lay.kdim;

  // Mode-independent per-slot chains on the field grid; the noise symbol
  // enters each grade as |mu|^{2 grade} afterwards.
  std::vector<std::vector<std::vector<double>>> chains(static_cast<std::size_t>(slots));
  std::vector<double> prod(static_cast<std::size_t>(len));
  for (int s = 1; s <= slots; ++s) {
    const int field_idx = (s - 1) / lay.kdim;
    const int k = (s - 1) % lay.kdim + 1;
    const std::vector<double>& w = p.fields[static_cast<std::size_t>(field_idx)]->mtilde(k);
    auto& chain = chains[static_cast<std::size_t>(s - 1)];
    chain.emplace_back(static_cast<std::size_t>(len), 1.0);
    for (int j = 1; j <= max_order; ++j) {
      const std::vector<double>& lower = chain.back();
      for (int i = 0; i < len; ++i) {
        prod[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] * lower[static_cast<std::size_t>(i)];
      }
      std::vector<double> next = cumtrap(prod, fg);
      const double root = std::sqrt(static_cast<double>(j));
      for (double& v : next) v *= root;
      chain.push_back(std::move(next));
    }
  }

  EvolutionEnergies e;
  e.max_order = max_order;
  e.tgrid = fg;
  e.grade_h.assign(static_cast<std::size_t>(max_order) + 1,
                   std::vector<double>(static_cast<std::size_t>(len), 0.0));
  e.grade_x.assign(static_cast<std::size_t>(max_order) + 1, 0.0);

  const std::vector<Complex> u0hat = dft(p.u0);
  const double parseval = p.xgrid.dx() / static_cast<double>(p.xgrid.n);
  std::vector<double> poly(static_cast<std::size_t>(max_order) + 1);
  std::vector<double> next_poly(poly.size());
  std::vector<std::vector<double>> mode_grades(
      static_cast<std::size_t>(max_order) + 1, std::vector<double>(static_cast<std::size_t>(len)));

  for (int m = 0; m < p.xgrid.n; ++m) {
    const double weight = parseval * std::norm(u0hat[static_cast<std::size_t>(m)]);
    if (weight < 1e-300) continue;
    const double re_lam = p.op_a.symbol()[static_cast<std::size_t>(m)].real();
    std::vector<double> mu_sq(static_cast<std::size_t>(lay.field_count));
    for (int l = 0; l < lay.field_count; ++l) {
      mu_sq[static_cast<std::size_t>(l)] =
          std::norm(p.op_m[static_cast<std::size_t>(l)].symbol()[static_cast<std::size_t>(m)]);
    }
    const double x_weight = 1.0 + seminorm_symbol(p.xgrid, m);

    for (int i = 0; i < len; ++i) {
      std::fill(poly.begin(), poly.end(), 0.0);
      poly[0] = 1.0;
      for (int s = 1; s <= slots; ++s) {
        const double z = mu_sq[static_cast<std::size_t>((s - 1) / lay.kdim)];
        const auto& chain = chains[static_cast<std::size_t>(s - 1)];
        std::fill(next_poly.begin(), next_poly.end(), 0.0);
        for (int a = 0; a <= max_order; ++a) {
          const double pa = poly[static_cast<std::size_t>(a)];
          if (pa == 0.0) continue;
          double zj = 1.0;
          for (int j = 0; a + j <= max_order; ++j) {
            const double q = chain[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
            next_poly[static_cast<std::size_t>(a + j)] += pa * q * q * zj;
            zj *= z;
          }
        }
        poly.swap(next_poly);
      }
      const double damp = weight * std::exp(2.0 * re_lam * fg.node(i));
      for (int n = 0; n <= max_order; ++n) {
        mode_grades[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] =
            damp * poly[static_cast<std::size_t>(n)];
      }
    }
    for (int n = 0; n <= max_order; ++n) {
      const auto& series = mode_grades[static_cast<std::size_t>(n)];
      for (int i = 0; i < len; ++i) {
        e.grade_h[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] += series[static_cast<std::size_t>(i)];
      }
      e.grade_x[static_cast<std::size_t>(n)] += x_weight * trapezoid(series, fg);
    }
  }
  return e;
}

GeneralParabolicityReport check_parabolicity_general(const EvolutionProblem& p) {
  const Layout lay = validate(p);
  GeneralParabolicityReport report;
  for (int l = 0; l < lay.field_count; ++l) {
    report.knorm_bound.push_back(p.knorm_of(l));
    report.knorm_spectral.push_back(p.fields[static_cast<std::size_t>(l)]->op_norm());
  }

  if (all_symbols(p)) {
    // Exact per-mode reduction: 2 Re lam_A(y) + sum K^2 |mu(y)|^2 + d0 y^2 <= C0.
    double delta_raw = std::numeric_limits<double>::infinity();
    double delta_a = std::numeric_limits<double>::infinity();
    for (int m = 1; m < p.xgrid.n; ++m) {
      const double y2 = p.xgrid.frequency(m) * p.xgrid.frequency(m);
      if (y2 <= 0.0) continue;
      delta_raw = std::min(delta_raw, -mode_form(p, report.knorm_bound, m) / y2);
      delta_a = std::min(delta_a, -p.op_a.symbol()[static_cast<std::size_t>(m)].real() / y2);
    }
    report.delta_a = delta_a;
    report.holds = delta_raw >= -kTol;
    report.delta0 = std::min(delta_raw, delta_a);
    const double used = std::max(0.0, report.delta0);
    double c0 = used;  // zero mode: form 0, X weight 1
    for (int m = 1; m < p.xgrid.n; ++m) {
      const double y2 = p.xgrid.frequency(m) * p.xgrid.frequency(m);
      c0 = std::max(c0, mode_form(p, report.knorm_bound, m) + used * (1.0 + y2));
    }
    report.c0 = c0;
    return report;
  }

  // Matrix operators: sampled quadratic forms over Fourier plus seeded
  // pseudo-random test vectors. A heuristic, flagged as such.
  report.sampled = true;
  const Matrix a = as_matrix(p.op_a, lay.nx);
  std::vector<Matrix> ms;
  for (const SpatialOperator& op : p.op_m) ms.push_back(as_matrix(op, lay.nx));

  std::vector<std::vector<double>> tests;
  for (int m = 1; m <= std::min(lay.nx / 2, 64); ++m) {
    std::vector<double> c(static_cast<std::size_t>(lay.nx));
    std::vector<double> s(static_cast<std::size_t>(lay.nx));
    for (int j = 0; j < lay.nx; ++j) {
      const double phase = 2.0 * M_PI * m * j / lay.nx;
      c[static_cast<std::size_t>(j)] = std::cos(phase);
      s[static_cast<std::size_t>(j)] = std::sin(phase);
    }
    tests.push_back(std::move(c));
    if (2 * m != lay.nx) tests.push_back(std::move(s));
  }
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next_uniform = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  };
  for (int rep = 0; rep < 32; ++rep) {
    std::vector<double> v(static_cast<std::size_t>(lay.nx));
    for (double& x : v) x = next_uniform();
    tests.push_back(std::move(v));
  }

  const double dx = p.xgrid.dx();
  auto forms = [&](const std::vector<double>& v) {
    const std::vector<double> av = matvec(a, v);
    double a_form = 0.0;
    for (int j = 0; j < lay.nx; ++j) {
      a_form += v[static_cast<std::size_t>(j)] * av[static_cast<std::size_t>(j)];
    }
    a_form *= dx;
    double q = 2.0 * a_form;
    for (int l = 0; l < lay.field_count; ++l) {
      const double k = report.knorm_bound[static_cast<std::size_t>(l)];
      const std::vector<double> mv = matvec(ms[static_cast<std::size_t>(l)], v);
      q += k * k * spatial_norm_sq(mv, p.xgrid);
    }
    return std::pair<double, double>{a_form, q};
  };

  double delta_raw = std::numeric_limits<double>::infinity();
  double delta_a = std::numeric_limits<double>::infinity();
  for (const auto& v : tests) {
    const double h2 = spatial_norm_sq(v, p.xgrid);
    if (h2 <= 0.0) continue;
    const auto [a_form, q] = forms(v);
    const double xsem = x_norm_sq(v, p.xgrid) - h2;
    if (xsem > kTol * h2) {
      delta_raw = std::min(delta_raw, -q / xsem);
      delta_a = std::min(delta_a, -a_form / xsem);
    }
  }
  report.delta_a = delta_a;
  report.holds = delta_raw >= -kTol;
  report.delta0 = std::min(delta_raw, delta_a);
  const double used = std::max(0.0, report.delta0);
  double c0 = 0.0;
  for (const auto& v : tests) {
    const double h2 = spatial_norm_sq(v, p.xgrid);
    if (h2 <= 0.0) continue;
    const auto [a_form, q] = forms(v);
    (void)a_form;
    c0 = std::max(c0, (q + used * x_norm_sq(v, p.xgrid)) / h2);
  }
  report.c0 = c0;
  return report;
}

EnergyReport energy_report(const EvolutionEnergies& e, const EvolutionProblem& p) {
  EnergyReport report;
  const auto par = check_parabolicity_general(p);
  report.delta0 = std::max(0.0, par.delta0);

  report.rhs = spatial_norm_sq(p.u0, p.xgrid);
  auto dual_norm_path = [&](const std::vector<std::vector<double>>& field) {
    std::vector<double> path(field.size(), 0.0);
    for (std::size_t i = 0; i < field.size(); ++i) {
      const std::vector<Complex> hat = dft(field[i]);
      double sum = 0.0;
      for (int m = 0; m < p.xgrid.n; ++m) {
        sum += std::norm(hat[static_cast<std::size_t>(m)]) / (1.0 + seminorm_symbol(p.xgrid, m));
      }
      path[i] = sum * p.xgrid.dx() / static_cast<double>(p.xgrid.n);
    }
    return path;
  };
  if (!p.forcing_f.empty()) report.rhs += trapezoid(dual_norm_path(p.forcing_f), p.tgrid);
  for (std::size_t l = 0; l < p.forcing_g.size(); ++l) {
    if (p.forcing_g[l].empty()) continue;
    const double k = p.knorm_of(static_cast<int>(l));
    report.rhs += k * k * trapezoid(dual_norm_path(p.forcing_g[l]), p.tgrid);
  }

  const int len = e.tgrid.size();
  std::vector<double> running(static_cast<std::size_t>(len), 0.0);
  double x_running = 0.0;
  for (int n = 0; n <= e.max_order; ++n) {
    for (int i = 0; i < len; ++i) {
      running[static_cast<std::size_t>(i)] +=
          e.grade_h[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
    }
    x_running += e.grade_x[static_cast<std::size_t>(n)];
    const double sup_h = *std::max_element(running.begin(), running.end());
    report.sup_h_partial.push_back(sup_h);
    const double lhs = sup_h + report.delta0 * x_running;
    report.lhs_partial.push_back(lhs);
    report.ratio_partial.push_back(report.rhs > 0.0 ? lhs / report.rhs : 0.0);
  }
  return report;
}

MatrixConditionReport check_parabolicity_fbm_matrix(const Matrix& a,
                                                    const std::vector<double>& sigma,
                                                    double hurst, double horizon) {
  const int d = a.rows;
  if (a.cols != d || static_cast<int>(sigma.size()) != d) {
    throw Error("dimension mismatch in the matrix parabolicity condition");
  }
  const double factor =
      hurst * std::pow(2.0, 1.0 - 2.0 * hurst) * std::pow(horizon, 2.0 * hurst - 1.0);
  Matrix s(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      s(i, j) = 0.5 * (a(i, j) + a(j, i)) -
                factor * sigma[static_cast<std::size_t>(i)] * sigma[static_cast<std::size_t>(j)];
    }
  }
  const std::vector<double> eig = symmetric_eigenvalues(s);
  MatrixConditionReport report;
  report.delta0 = eig.front();
  report.c0 = eig.back();
  report.holds = eig.front() >= -kTol * std::max(1.0, std::abs(eig.back()));
  return report;
}

}  // namespace chaoskit
