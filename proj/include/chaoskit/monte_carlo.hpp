#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "chaoskit/field_model.hpp"
#include "chaoskit/heat.hpp"

namespace chaoskit {

/// Philox4x32-10: a pure function from (key, counter) to 128 random bits.
/// Identical seeds give bitwise identical streams; per-path substreams make
/// results independent of threading or blocking.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t stream,
                                        std::uint64_t counter);

/// Standard normals from the counter stream (Box-Muller on open-interval
/// uniforms), four per block.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream) : key_(seed), stream_(stream) {}
  double next();

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<double, 4> cache_{};
  int cached_ = 0;
};

/// Sampled paths of the associated process X(t) on the field grid.
struct PathEnsemble {
  std::vector<std::vector<double>> paths;  // [path][time node]
  std::uint64_t seed = 0;
  const FieldModel* model = nullptr;

  double mean_at(int node) const;
  /// Unbiased sample variance / covariance across paths.
  double variance_at(int node) const;
  double covariance_at(int node_a, int node_b) const;
};

/// Left-point kernel quadrature X(t_i) = sum_{j<i} K(t_i, s_j) dW_j with
/// dW_j ~ N(0, dt); the singular fBm column at s = 0 is evaluated at its cell
/// midpoint, exponential kernels use their exact one-step recursion.
/// CHAOSKIT_THREADS > 1 fills path blocks in parallel with identical output.
PathEnsemble sample_paths(const FieldModel& model, int n_paths, std::uint64_t seed);

/// Only X(t), using the same per-path substreams as sample_paths.
std::vector<double> sample_endpoint(const FieldModel& model, double t, int n_paths,
                                    std::uint64_t seed);

struct MomentCheck {
  double estimate = 0.0;
  double reference = 0.0;
  double std_error = 0.0;
  bool within(double k_sigma) const {
    return std::abs(estimate - reference) <= k_sigma * std_error;
  }
};

struct WickExpReport {
  MomentCheck mean;           // reference: chaos mean (exactly 1)
  MomentCheck second_moment;  // reference: truncated chaos second moment
  double lognormal_reference = 0.0;  // exp(R(t,t)) limit
  int n_paths = 0;
};

/// Pathwise exp(X(t) - R(t,t)/2) statistics against the chaos predictions of
/// the Wick exponential.
WickExpReport validate_wick_exponential(const FieldModel& model, double t, int n_paths,
                                        std::uint64_t seed);

struct HeatValidationReport {
  double max_abs_discrepancy = 0.0;
  /// Standard error at the location of the largest discrepancy.
  double se_at_max = 0.0;
  /// max over x of |discrepancy| / SE(x).
  double max_z = 0.0;
  int n_paths = 0;
};

/// Average the closed-form pathwise heat solution at t = T over sampled
/// paths; compare E u(T, x) with the deterministic heat flow at diffusivity
/// a. Requires constant coefficients and a parabolic problem.
HeatValidationReport validate_heat_solution(const HeatProblem& p, int n_paths,
                                            std::uint64_t seed);

struct NormalityReport {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double se_skewness = 0.0;
  double se_kurtosis = 0.0;
  bool passes(double k_sigma) const {
    return std::abs(skewness) <= k_sigma * se_skewness &&
           std::abs(excess_kurtosis) <= k_sigma * se_kurtosis;
  }
};

NormalityReport check_normality(const std::vector<double>& samples);

/// Worker cap from CHAOSKIT_THREADS (defaults to 1).
int worker_threads();

}  // namespace chaoskit
