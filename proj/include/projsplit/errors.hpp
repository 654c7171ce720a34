#pragma once

#include <stdexcept>
#include <string>

namespace projsplit {

/// Invalid user-supplied parameter or problem description.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Incompatible vector/matrix dimensions.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inner solver for a linearized resolvent ran out of iterations.
struct InnerSolveFailure : std::runtime_error {
  InnerSolveFailure(const std::string& msg, double residual, int iters)
      : std::runtime_error(msg), best_residual(residual), iterations(iters) {}
  double best_residual;
  int iterations;
};

/// Bracketing/bisection exhausted its evaluation budget.
struct BisectionFailure : std::runtime_error {
  BisectionFailure(const std::string& msg, double lo, double hi, int evals)
      : std::runtime_error(msg), t_lo(lo), t_hi(hi), evaluations(evals) {}
  double t_lo;
  double t_hi;
  int evaluations;
};

/// The line-search merit evaluated to exactly zero; the caller should have
/// taken the graph shortcut instead.
struct ZeroResidual : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A monitored inequality failed. `check` names the violated property.
struct InvariantViolation : std::runtime_error {
  InvariantViolation(const std::string& check_name, const std::string& detail)
      : std::runtime_error(check_name + ": " + detail), check(check_name) {}
  std::string check;
};

/// A state that the theory rules out was observed.
struct InternalInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Independent reference solver failed to converge.
struct OracleFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace projsplit
