#include "chaoskit/skorokhod.hpp"

#include <cmath>

#include "chaoskit/errors.hpp"

namespace chaoskit {

namespace {

void require_same_grid(const ChaosProcess& eta, const FieldModel& model) {
  if (!(eta.grid == model.grid())) {
    throw GridMismatchError("integrand grid differs from the field model grid");
  }
}

TruncationSpec raised(const ChaosProcess& eta, const FieldModel& model) {
  return TruncationSpec{eta.truncation.max_order + 1,
                        std::max(eta.truncation.max_dim, model.basis_dim())};
}

double weighted_integral(std::span<const double> path, std::span<const double> factor,
                         const TimeGrid& grid, int upto) {
  if (upto == 0) return 0.0;
  double sum = 0.5 * (path[0] * factor[0] + path[static_cast<std::size_t>(upto)] *
                                                factor[static_cast<std::size_t>(upto)]);
  for (int i = 1; i < upto; ++i) {
    sum += path[static_cast<std::size_t>(i)] * factor[static_cast<std::size_t>(i)];
  }
  return sum * grid.dt();
}

}  // namespace

ChaosProcess associated_process(const FieldModel& model) {
  ChaosProcess x;
  x.truncation = {1, model.basis_dim()};
  x.grid = model.grid();
  for (int k = 1; k <= model.basis_dim(); ++k) {
    x.coeffs[MultiIndex::unit(k)] = model.integrated_mtilde(k);
  }
  return x;
}

ChaosProcess deterministic_process(std::vector<double> samples, const FieldModel& model) {
  if (static_cast<int>(samples.size()) != model.grid().size()) {
    throw GridMismatchError("sample count differs from the grid size");
  }
  ChaosProcess f;
  f.truncation = {0, 1};
  f.grid = model.grid();
  f.coeffs[MultiIndex::zero()] = std::move(samples);
  return f;
}

ChaosVector skorokhod_integral(const ChaosProcess& eta, const FieldModel& model, double upto) {
  require_same_grid(eta, model);
  const int last = model.grid().index_of(upto);
  ChaosVector out;
  out.truncation = raised(eta, model);
  for (const auto& [beta, path] : eta.coeffs) {
    for (int k = 1; k <= model.basis_dim(); ++k) {
      const double integral = weighted_integral(path, model.mtilde(k), model.grid(), last);
      if (integral == 0.0) continue;
      const MultiIndex alpha = add(beta, MultiIndex::unit(k));
      out.coeffs[alpha] += std::sqrt(beta.at(k) + 1.0) * integral;
    }
  }
  return out;
}

ChaosProcess skorokhod_running(const ChaosProcess& eta, const FieldModel& model) {
  require_same_grid(eta, model);
  const std::size_t len = static_cast<std::size_t>(model.grid().size());
  ChaosProcess out;
  out.truncation = raised(eta, model);
  out.grid = model.grid();
  std::vector<double> prod(len);
  for (const auto& [beta, path] : eta.coeffs) {
    for (int k = 1; k <= model.basis_dim(); ++k) {
      const std::vector<double>& mt = model.mtilde(k);
      for (std::size_t i = 0; i < len; ++i) prod[i] = path[i] * mt[i];
      const std::vector<double> running = cumtrap(prod, model.grid());
      const double scale = std::sqrt(beta.at(k) + 1.0);
      auto& target = out.coeffs[add(beta, MultiIndex::unit(k))];
      if (target.empty()) target.assign(len, 0.0);
      for (std::size_t i = 0; i < len; ++i) target[i] += scale * running[i];
    }
  }
  return out;
}

ChaosVector malliavin_trace(const ChaosProcess& eta, const FieldModel& model) {
  require_same_grid(eta, model);
  const int last = model.grid().subintervals();
  ChaosVector out;
  out.truncation = raised(eta, model);
  for (const auto& [beta, path] : eta.coeffs) {
    if (beta.order() == 0) continue;
    for (const auto& [slot, mult] : beta.entries()) {
      if (slot > model.basis_dim()) continue;
      const double integral = weighted_integral(path, model.mtilde(slot), model.grid(), last);
      out.coeffs[sub_unit(beta, slot)] += 2.0 * std::sqrt(static_cast<double>(mult)) * integral;
    }
  }
  return out;
}

StratonovichResult stratonovich_integral(const ChaosProcess& eta, const FieldModel& model) {
  StratonovichResult result;
  result.value = skorokhod_integral(eta, model, model.grid().horizon());
  const ChaosVector trace = malliavin_trace(eta, model);
  for (const auto& [alpha, c] : trace.coeffs) result.value.coeffs[alpha] += c;

  // Only truncated randomness can leave the trace incomplete; the order-0
  // coefficient of a deterministic integrand never feeds it.
  for (const auto& [beta, path] : eta.coeffs) {
    if (beta.order() == 0 || beta.order() != eta.truncation.max_order) continue;
    for (std::size_t i = 0; i < path.size(); ++i) {
      result.top_grade_mass += eta.grid.weight(static_cast<int>(i)) * path[i] * path[i];
    }
  }
  return result;
}

IntegrabilityReport check_integrability(const ChaosProcess& eta) {
  IntegrabilityReport report;
  double top = 0.0;
  for (const auto& [beta, path] : eta.coeffs) {
    if (beta.order() == 0) continue;
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      norm_sq += eta.grid.weight(static_cast<int>(i)) * path[i] * path[i];
    }
    const double term = beta.order() * norm_sq;
    report.weighted_sum += term;
    if (beta.order() == eta.truncation.max_order) top += term;
  }
  if (report.weighted_sum > 0.0) report.top_order_fraction = top / report.weighted_sum;
  return report;
}

}  // namespace chaoskit
