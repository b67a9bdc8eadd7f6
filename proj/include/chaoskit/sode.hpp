#pragma once

#include <vector>

#include "chaoskit/chaos_vector.hpp"
#include "chaoskit/field_model.hpp"

namespace chaoskit {

/// The linear Wick equation
///   u(t) = u0 + int_0^t a(s) u(s) ds + sum_l X_l(sigma_l u chi_t)
/// driven by independent fields over the same grid. Multiple fields are
/// flattened onto single multi-index slots: slot = (l-1) * K + k, K the
/// common basis dimension.
struct SodeProblem {
  std::vector<const FieldModel*> fields;
  /// One weight function per field; an empty inner vector means sigma = 1.
  std::vector<std::vector<double>> sigmas;
  /// a(t) samples; empty means a = 0.
  std::vector<double> drift;
  double initial = 1.0;

  static SodeProblem single(const FieldModel& field) {
    SodeProblem p;
    p.fields.push_back(&field);
    p.sigmas.emplace_back();
    return p;
  }

  const TimeGrid& grid() const { return fields.front()->grid(); }
  int basis_dim() const { return fields.front()->basis_dim(); }
  int slot_count() const { return static_cast<int>(fields.size()) * basis_dim(); }
  /// Effective per-slot integrator sigma_l(t) mtilde_{kl}(t).
  std::vector<double> slot_weight(int slot) const;
  /// u0 exp(int_0^t a) on the grid.
  std::vector<double> deterministic_factor() const;
};

/// Dense graded sweep of the propagator system
///   u_alpha(t) = sum_s sqrt(alpha_s) int_0^t u_{alpha-eps_s}(s) w_s(s) ds
/// (drift handled by an integrating factor), cumulative trapezoid throughout.
ChaosProcess solve_propagator(const SodeProblem& p, const TruncationSpec& truncation);

/// Closed form u0 exp(int a) e^{<> sum_l X_l}: coefficient at alpha is the
/// product of the slot integrals over sqrt(alpha!), materialized over the
/// truncation.
ChaosProcess closed_form(const SodeProblem& p, const TruncationSpec& truncation);

/// Per-slot cumulative-trapezoid chains: q_{s,0} = 1,
/// q_{s,j}(t) = sqrt(j) int_0^t q_{s,j-1} w_s. The propagator recursion of
/// this linear equation preserves tensor-product structure, so
/// u_alpha = scale * prod_s q_{s,alpha_s}; grade sums then follow from
/// generating polynomials without enumerating the index set. This is the
/// form that scales to truncations far beyond dense enumeration.
struct PropagatorChains {
  /// chains[slot][j][node], j = 0..max_order.
  std::vector<std::vector<std::vector<double>>> chains;
  /// u0 exp(int_0^t a).
  std::vector<double> scale;
  int max_order = 0;
};

PropagatorChains solve_propagator_chains(const SodeProblem& p, int max_order);

/// u_alpha at a node from the chains.
double chains_coefficient(const PropagatorChains& c, const MultiIndex& alpha, int node);
/// Second-moment contribution of each grade 0..max_order at a node.
std::vector<double> chains_grade_moments(const PropagatorChains& c, int node);
double chains_mean(const PropagatorChains& c, int node);
double chains_second_moment(const PropagatorChains& c, int node);

struct DoleanReport {
  /// Wick-exponential variance correction R(t,t)/2 per node.
  std::vector<double> wick_correction;
  /// Dolean (semimartingale) correction <X>_t / 2 = t/2 per node.
  std::vector<double> dolean_correction;
  std::vector<double> difference;
};

/// Compare the two exponential corrections; defined for the Wiener and
/// stable Ornstein-Uhlenbeck kernels (UnsupportedFieldError otherwise).
DoleanReport dolean_comparison(const SodeProblem& p);

}  // namespace chaoskit
