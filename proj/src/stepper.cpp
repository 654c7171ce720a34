#include "projsplit/stepper.hpp"

#include <cmath>

#include "projsplit/errors.hpp"
#include "projsplit/linesearch.hpp"
#include "projsplit/resolvents.hpp"

namespace projsplit {

void StepConfig::validate() const {
  if (!(0.0 < theta_lo && theta_lo < theta_hi && theta_hi < 2.0)) {
    throw ConfigError("need 0 < underline_theta < overline_theta < 2");
  }
  if (!(0.0 < tau_lo && tau_lo < tau_hi && tau_hi < 2.0)) {
    throw ConfigError("need 0 < underline_tau < overline_tau < 2");
  }
  if (!(tau >= tau_lo && tau <= tau_hi)) {
    throw ConfigError("tau must lie in [underline_tau, overline_tau]");
  }
  if (!(rho_hat > 0.0)) throw ConfigError("rho_hat must be positive");
  if (!(delta_hat > 0.0)) throw ConfigError("delta_hat must be positive");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(rho_nonsmooth > 0.0)) {
    throw ConfigError("rho_nonsmooth must be positive");
  }
  if (shortcut_tol < 0.0) throw ConfigError("shortcut_tol must be >= 0");
  if (!(inner_tol > 0.0)) throw ConfigError("inner_tol must be positive");
  if (max_inner_iters <= 0 || max_psi_evals <= 0) {
    throw ConfigError("iteration budgets must be positive");
  }
}

double delta_value(double beta, const Vec& gz, const Vec& x, const Vec& y,
                   const Vec& w) {
  const double quarter_inv_beta = 0.25 * inv_or_zero(beta);
  return (gz - x).dot(y - w) - quarter_inv_beta * (x - gz).squaredNorm();
}

double step_condition_value(const OperatorBlock& blk, double rho, const Vec& x,
                            const Vec& gz, double delta_hat) {
  const double lin_term = (inv_or_zero(blk.beta) + delta_hat) * rho;
  const double lip_term = 4.0 * blk.ell * blk.ell * rho * rho;
  const double smooth = blk.m * rho * (x - gz).norm();
  return lip_term + lin_term + smooth * smooth;
}

double nonsmooth_rho_limit(const OperatorBlock& blk) {
  const double denom = 0.25 * inv_or_zero(blk.beta) + blk.ell;
  return denom == 0.0 ? kInf : 1.0 / denom;
}

double clamped_nonsmooth_rho(const OperatorBlock& blk, double requested) {
  return std::min(requested, 0.99 * nonsmooth_rho_limit(blk));
}

namespace {

BlockStepResult finish(BlockStepResult r, const Vec& w, double beta) {
  r.xres = (r.x - r.Gz).norm();
  r.yres = (r.y - w).norm();
  r.delta = delta_value(beta, r.Gz, r.x, r.y, w);
  return r;
}

}  // namespace

BlockStepResult shortcut_step(const OperatorBlock& blk, const Vec& gz,
                              const Vec& w, double rho_hat) {
  BlockStepResult r;
  r.branch = StepBranch::graph_shortcut;
  r.rho = rho_hat;
  r.Gz = gz;
  r.x = gz;
  r.y = w;
  return finish(std::move(r), w, blk.beta);
}

BlockStepResult half_forward_step(const OperatorBlock& blk, const Vec& z,
                                  const Vec& w, double rho) {
  if (blk.in_smooth_set) {
    throw ConfigError("half_forward_step applied to a smooth block");
  }
  if (!(rho > 0.0) || rho >= nonsmooth_rho_limit(blk)) {
    throw ConfigError(
        "half-forward rho violates the proximal-parameter assumption "
        "rho < 1/(1/(4 beta) + ell)");
  }
  BlockStepResult r;
  r.branch = StepBranch::half_forward;
  r.rho = rho;
  r.Gz = blk.G.apply(z);
  const Vec bgz = blk.B->eval(r.Gz);
  const Vec s = r.Gz + rho * w - rho * (bgz + blk.C->eval(r.Gz));
  r.x = resolve_plain(*blk.A, rho, s);
  r.y = (r.Gz - r.x) / rho + w + (blk.B->eval(r.x) - bgz);
  return finish(std::move(r), w, blk.beta);
}

BlockStepResult proximal_newton_step(const OperatorBlock& blk, const Vec& z,
                                     const Vec& w, const StepConfig& cfg,
                                     double warm_rho) {
  if (!blk.in_smooth_set) {
    throw ConfigError("proximal_newton_step needs a block with m > 0");
  }
  const PsiSpec spec = raw_problem_a(blk, z, w, cfg);
  BisectResult found = bracket_bisect(spec, warm_rho, cfg.max_psi_evals);

  BlockStepResult r;
  r.branch = StepBranch::proximal_newton;
  r.rho = found.rho;
  r.Gz = spec.z;
  r.x = std::move(found.x);
  r.inner_iters = found.inner_iters_total;
  r.psi_evals = found.evaluations;

  const Linearization lin = linearize(*blk.D, r.Gz);
  r.y = (r.Gz - r.x) / r.rho + w + (blk.B->eval(r.x) - blk.B->eval(r.Gz)) +
        (blk.D->eval(r.x) - lin.eval(r.x));
  return finish(std::move(r), w, blk.beta);
}

}  // namespace projsplit
