#include "chaoskit/hermite.hpp"

#include <cmath>

#include "chaoskit/errors.hpp"

namespace chaoskit {

double hermite(int n, double t) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int k = 1; k < n; ++k) {
    const double next = t * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_all(int n, double t) {
  std::vector<double> h(static_cast<std::size_t>(n) + 1);
  h[0] = 1.0;
  if (n >= 1) h[1] = t;
  for (int k = 1; k < n; ++k) {
    h[k + 1] = t * h[k] - static_cast<double>(k) * h[k - 1];
  }
  return h;
}

double xi_alpha(const MultiIndex& alpha, std::span<const double> xi) {
  double value = 1.0;
  for (const auto& [slot, mult] : alpha.entries()) {
    if (slot > static_cast<int>(xi.size())) {
      throw SupportExceededError("multi-index slot " + std::to_string(slot) +
                                 " exceeds sample length " + std::to_string(xi.size()));
    }
    double fact = 1.0;
    for (int j = 2; j <= mult; ++j) fact *= j;
    value *= hermite(mult, xi[static_cast<std::size_t>(slot) - 1]) / std::sqrt(fact);
  }
  return value;
}

}  // namespace chaoskit
