#include "projsplit/resolvents.hpp"

#include <cmath>

#include "projsplit/errors.hpp"

namespace projsplit {

Vec resolve_plain(const MaxMonotone& a, double rho, const Vec& s) {
  if (!(rho > 0.0)) throw ConfigError("resolve_plain: rho must be positive");
  Vec x = a.resolvent(rho, s);
  check_finite(x, "resolvent output");
  return x;
}

LinearizedResolventResult resolve_linearized(const MaxMonotone& a, double rho,
                                             const Linearization& lin,
                                             const Vec& s, double tol,
                                             int max_iters) {
  if (!(rho > 0.0)) {
    throw ConfigError("resolve_linearized: rho must be positive");
  }
  const Eigen::Index dim = s.size();
  const Mat& h = lin.jacobian_at_u;
  const Vec d0 = lin.constant();  // lin(x) = d0 + H x

  LinearizedResolventResult out;
  if (auto m = a.linear_part(dim)) {
    // (I + rho M + rho H) x = s - rho d0
    const Mat lhs = Mat::Identity(dim, dim) + rho * (*m + h);
    out.x = lhs.partialPivLu().solve(s - rho * d0);
    out.report.method = m->cwiseAbs().maxCoeff() == 0.0
                            ? InnerMethod::closed_form
                            : InnerMethod::direct_linear;
    out.report.final_residual =
        (lhs * out.x - (s - rho * d0)).norm() / std::max(1.0, s.norm());
    check_finite(out.x, "linearized resolvent");
    return out;
  }

  // Forward-backward: x+ = prox_{tau rho A}(x - tau F(x)) with
  // F(x) = rho lin(x) + x - s; with symmetric PSD H and tau = 1/(1+rho||H||)
  // the iteration map is a (1 - tau)-contraction.
  const double h_norm = operator_norm_bound(h);
  const double tau = 1.0 / (1.0 + rho * h_norm);
  Vec x = a.resolvent(rho, s);
  double residual = kInf;
  for (int it = 0; it < max_iters; ++it) {
    const Vec f = rho * (d0 + h * x) + x - s;
    const Vec next = a.resolvent(tau * rho, x - tau * f);
    residual = (x - next).norm() / tau;
    x = next;
    if (residual <= tol) {
      out.x = std::move(x);
      out.report = {it + 1, residual, InnerMethod::prox_gradient};
      check_finite(out.x, "linearized resolvent");
      return out;
    }
  }
  throw InnerSolveFailure("linearized resolvent: inner solver exceeded " +
                              std::to_string(max_iters) + " iterations",
                          residual, max_iters);
}

double graph_membership_residual(const OperatorBlock& blk, const Vec& x,
                                 const Vec& w) {
  const Vec r = x + w - blk.forward_sum(x);
  return (x - blk.A->resolvent(1.0, r)).norm();
}

bool graph_membership(const OperatorBlock& blk, const Vec& x, const Vec& w,
                      double tol) {
  return graph_membership_residual(blk, x, w) <= tol;
}

}  // namespace projsplit
