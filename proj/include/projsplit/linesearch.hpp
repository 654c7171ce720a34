#pragma once

#include <functional>

#include "projsplit/operators.hpp"

namespace projsplit {

struct StepConfig;  // stepper.hpp

/// One merit evaluation: the resolvent point at a trial rho plus the cost
/// of computing it.
struct PsiPoint {
  double value = 0.0;
  Vec x;
  int inner_iters = 0;
};

/// psi(rho) = a rho^2 + b rho + resid_coeff (rho ||J_{rho T}(z) - z||)^2.
/// resid_coeff = 1 gives the generic form; the unreduced per-block merit
/// (the main algorithm's step condition) uses resid_coeff = m^2.
struct PsiSpec {
  double a = 0.0;
  double b = 0.0;
  double resid_coeff = 1.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  Vec z;
  /// rho -> J_{rho T}(z); accumulates inner-solver iteration counts.
  std::function<Vec(double rho, int& inner_iters)> resolvent;
};

PsiPoint psi_eval(const PsiSpec& spec, double rho);
double psi(const PsiSpec& spec, double rho);

struct Bracket {
  double t_lo = 0.0;
  double t_hi = 0.0;
  int evaluations = 0;
};

/// Initial bracket from a rejected merit value (the two one-sided update
/// rules of the bracketing phase).
Bracket initial_bracket(double rho, double value, double theta_lo,
                        double theta_hi);

struct BisectResult {
  double rho = 0.0;
  Vec x;
  int evaluations = 0;
  int inner_iters_total = 0;
  Bracket bracket;           // bracket set after the first rejection
  int termination_bound = 0; // derived evaluation-count bound
};

/// Bracketing then geometric-mean bisection until psi lands in
/// [theta_lo, theta_hi]. Throws ZeroResidual if psi(rho0) is exactly zero
/// and BisectionFailure past max_evals.
BisectResult bracket_bisect(const PsiSpec& spec, double rho0, int max_evals);

/// The reduction of the per-block step-condition search to the generic form:
/// a = 4 l^2/m^2, b = (1/beta + delta_hat)/m^2, window [theta_lo, theta_hi]
/// divided by m^2, resolvent = linearized resolvent of the block's shifted
/// operator at base point G z.
PsiSpec reduce_problem_a(const OperatorBlock& blk, const Vec& z, const Vec& w,
                         const StepConfig& cfg);

/// Same search expressed directly in the step-condition variables
/// (resid_coeff = m^2, window [theta_lo, theta_hi]). Accepts exactly the
/// same rho values as the reduced form.
PsiSpec raw_problem_a(const OperatorBlock& blk, const Vec& z, const Vec& w,
                      const StepConfig& cfg);

}  // namespace projsplit
