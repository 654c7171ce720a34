#pragma once

#include "projsplit/operators.hpp"

namespace projsplit {

enum class InnerMethod { closed_form, direct_linear, prox_gradient };

struct InnerSolveReport {
  int iterations = 0;
  double final_residual = 0.0;
  InnerMethod method = InnerMethod::closed_form;
};

struct LinearizedResolventResult {
  Vec x;
  InnerSolveReport report;
};

/// J_{rho A}(s).
Vec resolve_plain(const MaxMonotone& a, double rho, const Vec& s);

/// J_{rho (A + D_(u))}(s) where `lin` is D_(u). Direct solve when A is
/// linear; otherwise forward-backward iteration on the strongly monotone
/// inner problem, stopped at fixed-point residual <= tol.
LinearizedResolventResult resolve_linearized(const MaxMonotone& a, double rho,
                                             const Linearization& lin,
                                             const Vec& s, double tol = 1e-10,
                                             int max_iters = 10000);

/// Residual of the membership test for w in (A+B+C+D)(x):
/// ||x - J_A(x + w - B(x) - C(x) - D(x))||.
double graph_membership_residual(const OperatorBlock& blk, const Vec& x,
                                 const Vec& w);

bool graph_membership(const OperatorBlock& blk, const Vec& x, const Vec& w,
                      double tol);

}  // namespace projsplit
