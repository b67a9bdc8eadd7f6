#pragma once

#include <stdexcept>
#include <string>

namespace chaoskit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subtracting a unit from a zero entry of a multi-index.
class UnderflowError : public Error {
 public:
  explicit UnderflowError(int slot)
      : Error("multi-index underflow at slot " + std::to_string(slot)), slot_(slot) {}
  int slot() const { return slot_; }

 private:
  int slot_;
};

/// A multi-index references a basis slot beyond the supplied sample vector.
class SupportExceededError : public Error {
 public:
  using Error::Error;
};

/// Two grid-valued chaos expansions live on different time grids.
class IncompatibleGridsError : public Error {
 public:
  using Error::Error;
};

/// wick_exp input carries coefficients above first order.
class NotFirstOrderError : public Error {
 public:
  using Error::Error;
};

/// Requested time is not a grid node, or grids disagree.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Kernel t-derivative requested on its integrable singularity.
class SingularDiagonalError : public Error {
 public:
  using Error::Error;
};

/// Norm-bound hypotheses cannot be checked (missing monotonicity flag).
class HypothesesUnverifiableError : public Error {
 public:
  using Error::Error;
};

/// Operation defined only for semimartingale kernels.
class UnsupportedFieldError : public Error {
 public:
  using Error::Error;
};

/// Heat-kernel variance went negative: the parabolicity condition fails.
class NegativeVarianceError : public Error {
 public:
  NegativeVarianceError(double t, double variance)
      : Error("negative heat-kernel variance " + std::to_string(variance) + " at t = " +
              std::to_string(t)),
        t_(t),
        variance_(variance) {}
  double time() const { return t_; }
  double variance() const { return variance_; }

 private:
  double t_;
  double variance_;
};

/// Explicit time stepper violates its CFL-type bound.
class UnstableStepError : public Error {
 public:
  using Error::Error;
};

/// Truncation too large to materialize densely.
class TruncationTooLargeError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaoskit
