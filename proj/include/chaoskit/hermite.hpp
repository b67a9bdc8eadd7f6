#pragma once

#include <span>
#include <vector>

#include "chaoskit/multi_index.hpp"

namespace chaoskit {

/// Probabilists' Hermite polynomial H_n(t) via the three-term recurrence
/// H_{n+1}(t) = t H_n(t) - n H_{n-1}(t), H_0 = 1, H_1 = t.
double hermite(int n, double t);

/// H_0(t), ..., H_n(t) in one sweep.
std::vector<double> hermite_all(int n, double t);

/// Chaos basis element xi_alpha evaluated at a sample of the underlying
/// Gaussians: prod_k H_{alpha_k}(xi_k) / sqrt(alpha_k!).
/// Throws SupportExceededError when alpha references a slot beyond xi.
double xi_alpha(const MultiIndex& alpha, std::span<const double> xi);

}  // namespace chaoskit
