#pragma once

#include <optional>
#include <string>
#include <vector>

#include "projsplit/engine.hpp"

namespace projsplit {

/// A problem together with its certified solution (or the recipe for an
/// independent oracle that produces one). Instances are immutable.
struct ProblemInstance {
  enum class Provenance { closed_form, oracle_solved };
  enum class OracleKind { none, scalar_bisection, direct_linear, prox_gradient };

  std::string name;
  ProblemSpec spec;
  std::optional<BlockPoint> known_solution;
  Provenance provenance = Provenance::closed_form;
  OracleKind oracle = OracleKind::none;

  // prox-gradient oracle data (the l1-regularized logistic instances)
  Mat data;
  Vec labels;
  double lambda = 0.0;
  double ridge = 0.0;
  long seed = 0;
};

struct CertifyResult {
  bool ok = false;
  std::vector<double> residuals;  // one per block, w_n derived
};

/// Membership test w_i in T_i(G_i z) for every block, via the resolvent
/// residual at unit parameter.
CertifyResult certify_solution(const ProblemInstance& inst,
                               const BlockPoint& p, double tol);

/// Closed-form one-dimensional instances plus a two-block skew-coupled
/// saddle: exercises every step branch of the solver.
std::vector<ProblemInstance> build_scalar_suite();

/// l1-regularized logistic regression with an optional ridge term, split
/// across n_blocks sample chunks; the l1 and ridge terms sit on the last
/// block. Desk scale only (rows <= 500, cols <= 50).
ProblemInstance build_l1_logistic(Mat data, Vec labels, double lambda,
                                  double ridge, int n_blocks, long seed);

/// Seeded random instance with a planted sparse predictor.
ProblemInstance random_l1_logistic(int samples, int dim, int n_blocks,
                                   double lambda, double ridge, long seed);

/// Runs the instance's independent oracle (never the solver engine):
/// 1-D monotone bisection, a direct linear solve, or accelerated
/// proximal-gradient to gradient-map norm <= tol.
BlockPoint oracle_solve(const ProblemInstance& inst, double tol);

/// known_solution when present, oracle_solve otherwise; the result is
/// certified at 1e-8 before being returned (OracleFailure otherwise).
BlockPoint reference_solve(const ProblemInstance& inst, double tol = 1e-12);

/// All-zero starting point compatible with the problem.
BlockPoint zero_point(const ProblemSpec& spec);

}  // namespace projsplit
