#pragma once

#include <map>
#include <span>
#include <vector>

#include "chaoskit/multi_index.hpp"
#include "chaoskit/time_grid.hpp"

namespace chaoskit {

/// A square-integrable random variable in truncated chaos form: sparse map
/// from multi-index to coefficient E(eta xi_alpha). Immutable by convention
/// once built; all operations are pure.
struct ChaosVector {
  TruncationSpec truncation;
  std::map<MultiIndex, double> coeffs;

  double coeff(const MultiIndex& alpha) const {
    auto it = coeffs.find(alpha);
    return it == coeffs.end() ? 0.0 : it->second;
  }
  /// Coefficient at the zero index.
  double mean() const { return coeff(MultiIndex::zero()); }
  /// Parseval: E eta^2 = sum of squared coefficients.
  double second_moment() const;
};

/// E(F G) = sum of coefficient products (orthonormal basis).
double inner(const ChaosVector& f, const ChaosVector& g);

/// A random process in chaos form: each coefficient is a function on a time
/// grid.
struct ChaosProcess {
  TruncationSpec truncation;
  TimeGrid grid;
  std::map<MultiIndex, std::vector<double>> coeffs;

  /// Scalar slice at grid node i.
  ChaosVector at_node(int i) const;
  std::vector<double> mean_path() const;
  std::vector<double> second_moment_path() const;
};

struct WickResult {
  ChaosVector value;
  /// Squared mass of coefficients dropped by order truncation.
  double dropped_mass = 0.0;
};

struct WickProcessResult {
  ChaosProcess value;
  /// Dropped mass integrated over the grid (quadrature-weighted).
  double dropped_mass = 0.0;
};

/// Wick product: bilinear, commutative; acts as sqrt((a+b)!/(a!b!)) on basis
/// coefficients. Keys with order above the wider truncation are dropped and
/// their squared mass reported.
WickResult wick_product(const ChaosVector& f, const ChaosVector& g);
WickProcessResult wick_product(const ChaosProcess& f, const ChaosVector& g);
/// Pointwise product of two processes; throws IncompatibleGridsError when the
/// grids differ.
WickProcessResult wick_product(const ChaosProcess& f, const ChaosProcess& g);

/// Wick exponential of a first-order vector: coefficient at alpha equals
/// exp(c_0) prod_k c_k^{alpha_k} / sqrt(alpha!) over the whole target
/// truncation. Throws NotFirstOrderError when eta carries an order >= 2
/// coefficient.
ChaosVector wick_exp(const ChaosVector& eta, const TruncationSpec& target);

/// Evaluate a chaos vector at a sample of the underlying Gaussians.
double evaluate(const ChaosVector& f, std::span<const double> xi);

}  // namespace chaoskit
