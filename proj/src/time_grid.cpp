#include "chaoskit/time_grid.hpp"

#include <cmath>
#include <string>

#include "chaoskit/errors.hpp"

namespace chaoskit {

TimeGrid::TimeGrid(double horizon, int subintervals) : horizon_(horizon), n_(subintervals) {
  if (horizon <= 0.0 || subintervals < 1) {
    throw Error("time grid requires positive horizon and at least one subinterval");
  }
}

int TimeGrid::index_of(double t) const {
  const double pos = t / dt();
  const int i = static_cast<int>(std::lround(pos));
  if (i < 0 || i > n_ || std::abs(pos - i) > 1e-9 * n_) {
    throw GridMismatchError("t = " + std::to_string(t) + " is not a node of the grid");
  }
  return i;
}

double trapezoid(std::span<const double> f, const TimeGrid& grid, int upto) {
  const int last = upto < 0 ? grid.subintervals() : upto;
  if (last == 0) return 0.0;
  double sum = 0.5 * (f[0] + f[static_cast<std::size_t>(last)]);
  for (int i = 1; i < last; ++i) sum += f[static_cast<std::size_t>(i)];
  return sum * grid.dt();
}

std::vector<double> cumtrap(std::span<const double> f, const TimeGrid& grid) {
  std::vector<double> out(f.size(), 0.0);
  const double h = 0.5 * grid.dt();
  for (std::size_t i = 1; i < f.size(); ++i) {
    out[i] = out[i - 1] + h * (f[i - 1] + f[i]);
  }
  return out;
}

}  // namespace chaoskit
