#include "chaoskit/sode.hpp"

#include <cmath>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

void validate(const SodeProblem& p) {
  if (p.fields.empty()) throw Error("sode problem has no driving field");
  const TimeGrid& grid = p.fields.front()->grid();
  const int dim = p.fields.front()->basis_dim();
  for (const FieldModel* f : p.fields) {
    if (!(f->grid() == grid)) throw GridMismatchError("driving fields live on different grids");
    if (f->basis_dim() != dim) throw Error("driving fields must share the basis dimension");
  }
  if (p.sigmas.size() != p.fields.size()) {
    throw Error("one sigma weight per driving field required");
  }
}

}  // namespace

std::vector<double> SodeProblem::slot_weight(int slot) const {
  const int k_dim = basis_dim();
  const int field_idx = (slot - 1) / k_dim;
  const int k = (slot - 1) % k_dim + 1;
  std::vector<double> w = fields[static_cast<std::size_t>(field_idx)]->mtilde(k);
  const std::vector<double>& sigma = sigmas[static_cast<std::size_t>(field_idx)];
  if (!sigma.empty()) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= sigma[i];
  }
  return w;
}

std::vector<double> SodeProblem::deterministic_factor() const {
  const TimeGrid& g = grid();
  std::vector<double> factor(static_cast<std::size_t>(g.size()), initial);
  if (!drift.empty()) {
    const std::vector<double> running = cumtrap(drift, g);
    for (std::size_t i = 0; i < factor.size(); ++i) factor[i] = initial * std::exp(running[i]);
  }
  return factor;
}

ChaosProcess solve_propagator(const SodeProblem& p, const TruncationSpec& truncation) {
  validate(p);
  if (truncation.max_dim > p.slot_count()) {
    throw Error("truncation references more slots than fields x basis functions");
  }
  const TimeGrid& g = p.grid();
  const std::size_t len = static_cast<std::size_t>(g.size());

  std::vector<std::vector<double>> weights;
  weights.reserve(static_cast<std::size_t>(truncation.max_dim));
  for (int s = 1; s <= truncation.max_dim; ++s) weights.push_back(p.slot_weight(s));

  ChaosProcess out;
  out.truncation = truncation;
  out.grid = g;

  // Normalized coefficients v = u / (u0 exp(int a)); the sweep is drift-free
  // with v_0 = 1.
  const std::vector<double> scale = p.deterministic_factor();
  std::vector<double> rhs(len);
  for (const MultiIndex& alpha : enumerate(truncation)) {
    if (alpha.order() == 0) {
      out.coeffs[alpha] = std::vector<double>(len, 1.0);
      continue;
    }
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (const auto& [slot, mult] : alpha.entries()) {
      const std::vector<double>& lower = out.coeffs.at(sub_unit(alpha, slot));
      const std::vector<double>& w = weights[static_cast<std::size_t>(slot - 1)];
      const double root = std::sqrt(static_cast<double>(mult));
      for (std::size_t i = 0; i < len; ++i) rhs[i] += root * w[i] * lower[i];
    }
    out.coeffs[alpha] = cumtrap(rhs, g);
  }

  // Restore the deterministic factor.
  for (auto& [alpha, path] : out.coeffs) {
    for (std::size_t i = 0; i < len; ++i) path[i] *= scale[i];
  }
  return out;
}

ChaosProcess closed_form(const SodeProblem& p, const TruncationSpec& truncation) {
  validate(p);
  if (truncation.max_dim > p.slot_count()) {
    throw Error("truncation references more slots than fields x basis functions");
  }
  const TimeGrid& g = p.grid();
  const std::size_t len = static_cast<std::size_t>(g.size());
  const int k_dim = p.basis_dim();

  // First-order representation of the driving sum: integrals of the slot
  // weights (the field's exact antiderivatives when sigma = 1).
  std::vector<std::vector<double>> slot_integral;
  slot_integral.reserve(static_cast<std::size_t>(truncation.max_dim));
  for (int s = 1; s <= truncation.max_dim; ++s) {
    const int field_idx = (s - 1) / k_dim;
    if (p.sigmas[static_cast<std::size_t>(field_idx)].empty()) {
      slot_integral.push_back(
          p.fields[static_cast<std::size_t>(field_idx)]->integrated_mtilde((s - 1) % k_dim + 1));
    } else {
      slot_integral.push_back(cumtrap(p.slot_weight(s), g));
    }
  }

  const std::vector<double> scale = p.deterministic_factor();
  ChaosProcess out;
  out.truncation = truncation;
  out.grid = g;
  std::vector<double> path(len);
  for (const MultiIndex& alpha : enumerate(truncation)) {
    const double norm = std::sqrt(factorial(alpha));
    for (std::size_t i = 0; i < len; ++i) {
      double prod = scale[i];
      for (const auto& [slot, mult] : alpha.entries()) {
        const double base = slot_integral[static_cast<std::size_t>(slot - 1)][i];
        for (int j = 0; j < mult; ++j) prod *= base;
      }
      path[i] = prod / norm;
    }
    out.coeffs[alpha] = path;
  }
  return out;
}

PropagatorChains solve_propagator_chains(const SodeProblem& p, int max_order) {
  validate(p);
  const TimeGrid& g = p.grid();
  const std::size_t len = static_cast<std::size_t>(g.size());
  PropagatorChains out;
  out.max_order = max_order;
  out.scale = p.deterministic_factor();
  out.chains.resize(static_cast<std::size_t>(p.slot_count()));
  std::vector<double> prod(len);
  for (int s = 1; s <= p.slot_count(); ++s) {
    auto& chain = out.chains[static_cast<std::size_t>(s - 1)];
    chain.reserve(static_cast<std::size_t>(max_order) + 1);
    chain.emplace_back(len, 1.0);
    const std::vector<double> w = p.slot_weight(s);
    for (int j = 1; j <= max_order; ++j) {
      const std::vector<double>& lower = chain.back();
      for (std::size_t i = 0; i < len; ++i) prod[i] = w[i] * lower[i];
      std::vector<double> next = cumtrap(prod, g);
      const double root = std::sqrt(static_cast<double>(j));
      for (std::size_t i = 0; i < len; ++i) next[i] *= root;
      chain.push_back(std::move(next));
    }
  }
  return out;
}

double chains_coefficient(const PropagatorChains& c, const MultiIndex& alpha, int node) {
  double prod = c.scale[static_cast<std::size_t>(node)];
  for (const auto& [slot, mult] : alpha.entries()) {
    prod *= c.chains[static_cast<std::size_t>(slot - 1)][static_cast<std::size_t>(mult)]
                    [static_cast<std::size_t>(node)];
  }
  return prod;
}

std::vector<double> chains_grade_moments(const PropagatorChains& c, int node) {
  const int order = c.max_order;
  // Product over slots of P_s(z) = sum_j q_{s,j}^2 z^j, truncated at z^order.
  std::vector<double> poly(static_cast<std::size_t>(order) + 1, 0.0);
  poly[0] = 1.0;
  std::vector<double> next(poly.size());
  for (const auto& chain : c.chains) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int a = 0; a <= order; ++a) {
      const double pa = poly[static_cast<std::size_t>(a)];
      if (pa == 0.0) continue;
      for (int j = 0; a + j <= order; ++j) {
        const double q = chain[static_cast<std::size_t>(j)][static_cast<std::size_t>(node)];
        next[static_cast<std::size_t>(a + j)] += pa * q * q;
      }
    }
    poly.swap(next);
  }
  const double s = c.scale[static_cast<std::size_t>(node)];
  for (double& x : poly) x *= s * s;
  return poly;
}

double chains_mean(const PropagatorChains& c, int node) {
  return c.scale[static_cast<std::size_t>(node)];
}

double chains_second_moment(const PropagatorChains& c, int node) {
  double sum = 0.0;
  for (double g : chains_grade_moments(c, node)) sum += g;
  return sum;
}

DoleanReport dolean_comparison(const SodeProblem& p) {
  validate(p);
  if (p.fields.size() != 1) throw UnsupportedFieldError("dolean comparison expects one field");
  const KernelSpec& kernel = p.fields.front()->kernel();
  const TimeGrid& g = p.grid();
  DoleanReport report;
  report.wick_correction.resize(static_cast<std::size_t>(g.size()));
  report.dolean_correction.resize(static_cast<std::size_t>(g.size()));
  report.difference.resize(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) {
    const double t = g.node(i);
    double r;
    switch (kernel.type()) {
      case KernelSpec::Type::Wiener:
        r = t;
        break;
      case KernelSpec::Type::OUStable: {
        const double b = kernel.mean_reversion();
        r = (1.0 - std::exp(-2.0 * b * t)) / (2.0 * b);
        break;
      }
      default:
        throw UnsupportedFieldError("dolean comparison needs a semimartingale kernel (" +
                                    kernel.name() + " is not)");
    }
    report.wick_correction[static_cast<std::size_t>(i)] = 0.5 * r;
    report.dolean_correction[static_cast<std::size_t>(i)] = 0.5 * t;
    report.difference[static_cast<std::size_t>(i)] = 0.5 * (r - t);
  }
  return report;
}

}  // namespace chaoskit
