#pragma once

#include "chaoskit/chaos_vector.hpp"
#include "chaoskit/field_model.hpp"

namespace chaoskit {

/// The associated process X(t) of the field as a chaos process: first-order
/// coefficients Mtilde_k(t).
ChaosProcess associated_process(const FieldModel& model);

/// Deterministic integrand as a chaos process (single coefficient at the
/// zero index).
ChaosProcess deterministic_process(std::vector<double> samples, const FieldModel& model);

/// Ito-Skorokhod integral of eta against the field over [0, t]:
///   coefficient at alpha = sum_k sqrt(alpha_k) int_0^t eta_{alpha-eps_k}(s) mtilde_k(s) ds.
/// The result truncation extends eta's by one order (the integral raises the
/// chaos grade). `upto` must be a grid node; eta must live on the model grid.
ChaosVector skorokhod_integral(const ChaosProcess& eta, const FieldModel& model, double upto);

/// Running integral t -> integral over [0, t], one cumulative-trapezoid pass
/// per coefficient; node i slices agree with skorokhod_integral at node(i).
ChaosProcess skorokhod_running(const ChaosProcess& eta, const FieldModel& model);

/// Trace of the Malliavin derivative over [0, T] with the adapted
/// (left-limit) diagonal: coefficient at gamma is
///   2 sum_k sqrt(gamma_k + 1) int eta_{gamma+eps_k}(s) mtilde_k(s) ds.
/// The factor 2 replaces the symmetrized kernel diagonal (the chaos series
/// of an indicator evaluated on its jump) by its left limit, so that the
/// trace of the running Wiener process over [0, T] equals T.
ChaosVector malliavin_trace(const ChaosProcess& eta, const FieldModel& model);

struct StratonovichResult {
  ChaosVector value;
  /// Quadrature-weighted L2 mass of eta's top-grade coefficients. The trace
  /// reads one grade above the truncation, so a non-zero top grade means the
  /// top result grades are incomplete.
  double top_grade_mass = 0.0;
};

/// Stratonovich-type integral over [0, T]: Skorokhod integral plus the
/// Malliavin trace. Identical to the Skorokhod integral for deterministic
/// integrands.
StratonovichResult stratonovich_integral(const ChaosProcess& eta, const FieldModel& model);

struct IntegrabilityReport {
  /// sum_alpha |alpha| ||eta_alpha||_{L2}^2 on the truncation.
  double weighted_sum = 0.0;
  /// Share contributed by the top order; large values flag a diverging tail.
  double top_order_fraction = 0.0;
};

IntegrabilityReport check_integrability(const ChaosProcess& eta);

}  // namespace chaoskit
