#include "chaoskit/chaos_vector.hpp"

#include <algorithm>
#include <cmath>

#include "chaoskit/errors.hpp"
#include "chaoskit/hermite.hpp"

namespace chaoskit {

double ChaosVector::second_moment() const {
  double sum = 0.0;
  for (const auto& [alpha, c] : coeffs) sum += c * c;
  return sum;
}

double inner(const ChaosVector& f, const ChaosVector& g) {
  double sum = 0.0;
  for (const auto& [alpha, c] : f.coeffs) {
    auto it = g.coeffs.find(alpha);
    if (it != g.coeffs.end()) sum += c * it->second;
  }
  return sum;
}

ChaosVector ChaosProcess::at_node(int i) const {
  ChaosVector out;
  out.truncation = truncation;
  for (const auto& [alpha, path] : coeffs) {
    out.coeffs[alpha] = path[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<double> ChaosProcess::mean_path() const {
  auto it = coeffs.find(MultiIndex::zero());
  if (it != coeffs.end()) return it->second;
  return std::vector<double>(static_cast<std::size_t>(grid.size()), 0.0);
}

std::vector<double> ChaosProcess::second_moment_path() const {
  std::vector<double> out(static_cast<std::size_t>(grid.size()), 0.0);
  for (const auto& [alpha, path] : coeffs) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += path[i] * path[i];
  }
  return out;
}

namespace {

TruncationSpec wider(const TruncationSpec& a, const TruncationSpec& b) {
  return TruncationSpec{std::max(a.max_order, b.max_order), std::max(a.max_dim, b.max_dim)};
}

double wick_factor(const MultiIndex& alpha, const MultiIndex& beta, const MultiIndex& sum) {
  if (sum.order() <= 170) {
    return std::sqrt(factorial(sum) / (factorial(alpha) * factorial(beta)));
  }
  return std::exp(0.5 * (log_factorial(sum) - log_factorial(alpha) - log_factorial(beta)));
}

}  // namespace

WickResult wick_product(const ChaosVector& f, const ChaosVector& g) {
  WickResult out;
  out.value.truncation = wider(f.truncation, g.truncation);
  const int max_order = out.value.truncation.max_order;
  std::map<MultiIndex, double> dropped;
  for (const auto& [alpha, ca] : f.coeffs) {
    for (const auto& [beta, cb] : g.coeffs) {
      const MultiIndex key = add(alpha, beta);
      const double term = ca * cb * wick_factor(alpha, beta, key);
      if (key.order() > max_order) {
        dropped[key] += term;
      } else {
        out.value.coeffs[key] += term;
      }
    }
  }
  for (const auto& [key, c] : dropped) out.dropped_mass += c * c;
  return out;
}

WickProcessResult wick_product(const ChaosProcess& f, const ChaosVector& g) {
  WickProcessResult out;
  out.value.truncation = wider(f.truncation, g.truncation);
  out.value.grid = f.grid;
  const int max_order = out.value.truncation.max_order;
  const std::size_t len = static_cast<std::size_t>(f.grid.size());
  std::map<MultiIndex, std::vector<double>> dropped;
  for (const auto& [alpha, pa] : f.coeffs) {
    for (const auto& [beta, cb] : g.coeffs) {
      const MultiIndex key = add(alpha, beta);
      const double factor = cb * wick_factor(alpha, beta, key);
      auto& target = key.order() > max_order ? dropped[key] : out.value.coeffs[key];
      if (target.empty()) target.assign(len, 0.0);
      for (std::size_t i = 0; i < len; ++i) target[i] += factor * pa[i];
    }
  }
  for (const auto& [key, path] : dropped) {
    for (std::size_t i = 0; i < len; ++i) {
      out.dropped_mass += f.grid.weight(static_cast<int>(i)) * path[i] * path[i];
    }
  }
  return out;
}

WickProcessResult wick_product(const ChaosProcess& f, const ChaosProcess& g) {
  if (!(f.grid == g.grid)) {
    throw IncompatibleGridsError("wick product of processes on different grids");
  }
  WickProcessResult out;
  out.value.truncation = wider(f.truncation, g.truncation);
  out.value.grid = f.grid;
  const int max_order = out.value.truncation.max_order;
  const std::size_t len = static_cast<std::size_t>(f.grid.size());
  std::map<MultiIndex, std::vector<double>> dropped;
  for (const auto& [alpha, pa] : f.coeffs) {
    for (const auto& [beta, pb] : g.coeffs) {
      const MultiIndex key = add(alpha, beta);
      const double factor = wick_factor(alpha, beta, key);
      auto& target = key.order() > max_order ? dropped[key] : out.value.coeffs[key];
      if (target.empty()) target.assign(len, 0.0);
      for (std::size_t i = 0; i < len; ++i) target[i] += factor * pa[i] * pb[i];
    }
  }
  for (const auto& [key, path] : dropped) {
    for (std::size_t i = 0; i < len; ++i) {
      out.dropped_mass += f.grid.weight(static_cast<int>(i)) * path[i] * path[i];
    }
  }
  return out;
}

ChaosVector wick_exp(const ChaosVector& eta, const TruncationSpec& target) {
  double shift = 0.0;
  std::map<int, double> first;
  for (const auto& [alpha, c] : eta.coeffs) {
    if (alpha.order() == 0) {
      shift = c;
    } else if (alpha.order() == 1) {
      if (c != 0.0) first[alpha.max_slot()] = c;
    } else if (c != 0.0) {
      throw NotFirstOrderError("wick_exp input has a coefficient at order " +
                               std::to_string(alpha.order()));
    }
  }
  const double scale = std::exp(shift);
  ChaosVector out;
  out.truncation = target;
  for (const MultiIndex& alpha : enumerate(target)) {
    double prod = 1.0;
    bool zero = false;
    for (const auto& [slot, mult] : alpha.entries()) {
      auto it = first.find(slot);
      if (it == first.end()) {
        zero = true;
        break;
      }
      prod *= std::pow(it->second, mult);
    }
    if (zero) continue;
    out.coeffs[alpha] = scale * prod / std::sqrt(factorial(alpha));
  }
  return out;
}

double evaluate(const ChaosVector& f, std::span<const double> xi) {
  // Shared table of H_j(xi_k)/sqrt(j!) across the coefficients.
  int max_mult = 0;
  int max_slot = 0;
  for (const auto& [alpha, c] : f.coeffs) {
    max_slot = std::max(max_slot, alpha.max_slot());
    for (const auto& [slot, mult] : alpha.entries()) max_mult = std::max(max_mult, mult);
  }
  if (max_slot > static_cast<int>(xi.size())) {
    throw SupportExceededError("chaos vector references slot " + std::to_string(max_slot) +
                               " beyond sample length " + std::to_string(xi.size()));
  }
  std::vector<std::vector<double>> table(static_cast<std::size_t>(max_slot));
  for (int k = 0; k < max_slot; ++k) {
    table[static_cast<std::size_t>(k)] = hermite_all(max_mult, xi[static_cast<std::size_t>(k)]);
    double fact = 1.0;
    for (int j = 1; j <= max_mult; ++j) {
      fact *= j;
      table[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] /= std::sqrt(fact);
    }
  }
  double sum = 0.0;
  for (const auto& [alpha, c] : f.coeffs) {
    double prod = c;
    for (const auto& [slot, mult] : alpha.entries()) {
      prod *= table[static_cast<std::size_t>(slot) - 1][static_cast<std::size_t>(mult)];
    }
    sum += prod;
  }
  return sum;
}

}  // namespace chaoskit
