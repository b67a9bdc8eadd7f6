#pragma once

#include <span>
#include <vector>

namespace chaoskit {

/// Uniform partition of [0, T] with trapezoid quadrature weights. This is the
/// discretization contract shared by every module: sum of weights equals T.
class TimeGrid {
 public:
  TimeGrid() = default;
  TimeGrid(double horizon, int subintervals);

  double horizon() const { return horizon_; }
  int subintervals() const { return n_; }
  /// Number of nodes, subintervals() + 1.
  int size() const { return n_ + 1; }
  double dt() const { return horizon_ / n_; }
  double node(int i) const { return horizon_ * i / n_; }
  /// Trapezoid weight: dt/2 at the ends, dt inside.
  double weight(int i) const { return (i == 0 || i == n_) ? 0.5 * dt() : dt(); }

  /// Index of a grid node; throws GridMismatchError when t is not a node.
  int index_of(double t) const;

  bool operator==(const TimeGrid& other) const {
    return n_ == other.n_ && horizon_ == other.horizon_;
  }

 private:
  double horizon_ = 1.0;
  int n_ = 1;
};

/// Trapezoid quadrature of samples over [0, node(upto)] (whole grid when
/// upto < 0).
double trapezoid(std::span<const double> f, const TimeGrid& grid, int upto = -1);

/// Running trapezoid: out[i] = integral of f over [0, node(i)].
std::vector<double> cumtrap(std::span<const double> f, const TimeGrid& grid);

}  // namespace chaoskit
