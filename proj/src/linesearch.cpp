#include "projsplit/linesearch.hpp"

#include <cmath>
#include <memory>

#include "projsplit/errors.hpp"
#include "projsplit/resolvents.hpp"
#include "projsplit/stepper.hpp"

namespace projsplit {

PsiPoint psi_eval(const PsiSpec& spec, double rho) {
  if (!(rho > 0.0)) throw ConfigError("psi: rho must be positive");
  PsiPoint pt;
  pt.x = spec.resolvent(rho, pt.inner_iters);
  const double r = rho * (pt.x - spec.z).norm();
  pt.value = spec.a * rho * rho + spec.b * rho + spec.resid_coeff * r * r;
  return pt;
}

double psi(const PsiSpec& spec, double rho) { return psi_eval(spec, rho).value; }

Bracket initial_bracket(double rho, double value, double theta_lo,
                        double theta_hi) {
  Bracket br;
  if (value < theta_lo) {
    br.t_lo = rho;
    br.t_hi = rho * theta_hi / value;
  } else {
    br.t_lo = rho * theta_lo / value;
    br.t_hi = rho;
  }
  return br;
}

namespace {

int termination_bound(const Bracket& br, double theta_lo, double theta_hi) {
  // Geometric bisection halves log(t_hi/t_lo) per evaluation while the
  // acceptance window has log-width >= (1/4) log(theta_hi/theta_lo).
  const double len = std::log(br.t_hi / br.t_lo);
  const double window = 0.25 * std::log(theta_hi / theta_lo);
  const double ratio = std::max(1.0, len / window);
  return 2 + static_cast<int>(std::ceil(std::log2(ratio)));
}

}  // namespace

BisectResult bracket_bisect(const PsiSpec& spec, double rho0, int max_evals) {
  if (!(rho0 > 0.0)) throw ConfigError("bracket_bisect: rho0 must be positive");
  if (!(spec.theta_lo > 0.0 && spec.theta_lo < spec.theta_hi)) {
    throw ConfigError("bracket_bisect: need 0 < theta_lo < theta_hi");
  }

  BisectResult res;
  PsiPoint pt = psi_eval(spec, rho0);
  res.inner_iters_total += pt.inner_iters;
  res.evaluations = 1;
  if (pt.value == 0.0) {
    throw ZeroResidual(
        "psi(rho0) is exactly zero; the point already satisfies the graph "
        "inclusion");
  }
  if (pt.value >= spec.theta_lo && pt.value <= spec.theta_hi) {
    res.rho = rho0;
    res.x = std::move(pt.x);
    res.bracket = {rho0, rho0, 1};
    res.termination_bound = 2;
    return res;
  }

  Bracket br = initial_bracket(rho0, pt.value, spec.theta_lo, spec.theta_hi);
  br.evaluations = 1;
  res.bracket = br;
  res.termination_bound = termination_bound(br, spec.theta_lo, spec.theta_hi);

  while (res.evaluations < max_evals) {
    const double rho = std::sqrt(br.t_lo * br.t_hi);
    pt = psi_eval(spec, rho);
    res.inner_iters_total += pt.inner_iters;
    ++res.evaluations;
    if (pt.value >= spec.theta_lo && pt.value <= spec.theta_hi) {
      res.rho = rho;
      res.x = std::move(pt.x);
      if (res.evaluations > res.termination_bound) {
        throw InvariantViolation(
            "bisection termination bound",
            "used " + std::to_string(res.evaluations) + " evaluations, bound " +
                std::to_string(res.termination_bound));
      }
      return res;
    }
    if (pt.value > spec.theta_hi) {
      br.t_hi = rho;
    } else {
      br.t_lo = rho;
    }
    br.evaluations = res.evaluations;
  }
  throw BisectionFailure(
      "bracketing/bisection exceeded its evaluation budget (degenerate "
      "problem or 0 in T(z) up to precision)",
      br.t_lo, br.t_hi, res.evaluations);
}

namespace {

PsiSpec problem_a_common(const OperatorBlock& blk, const Vec& z, const Vec& w,
                         const StepConfig& cfg) {
  if (!(blk.m > 0.0)) {
    throw ConfigError(
        "proximal-Newton parameter search requires m > 0 (block outside the "
        "smooth index set)");
  }
  if (!(cfg.delta_hat > 0.0)) throw ConfigError("delta_hat must be positive");
  PsiSpec spec;
  spec.z = blk.G.apply(z);
  const Vec gz = spec.z;
  const Vec bc = blk.B->eval(gz) + blk.C->eval(gz);
  auto lin = std::make_shared<Linearization>(linearize(*blk.D, gz));
  auto a_op = blk.A;
  const double tol = cfg.inner_tol;
  const int max_it = cfg.max_inner_iters;
  spec.resolvent = [a_op, lin, gz, bc, w, tol, max_it](double rho,
                                                       int& inner) -> Vec {
    const Vec s = gz + rho * w - rho * bc;
    auto r = resolve_linearized(*a_op, rho, *lin, s, tol, max_it);
    inner += r.report.iterations;
    return r.x;
  };
  return spec;
}

}  // namespace

PsiSpec reduce_problem_a(const OperatorBlock& blk, const Vec& z, const Vec& w,
                         const StepConfig& cfg) {
  PsiSpec spec = problem_a_common(blk, z, w, cfg);
  const double m2 = blk.m * blk.m;
  spec.a = 4.0 * blk.ell * blk.ell / m2;
  spec.b = (inv_or_zero(blk.beta) + cfg.delta_hat) / m2;
  spec.resid_coeff = 1.0;
  spec.theta_lo = cfg.theta_lo / m2;
  spec.theta_hi = cfg.theta_hi / m2;
  return spec;
}

PsiSpec raw_problem_a(const OperatorBlock& blk, const Vec& z, const Vec& w,
                      const StepConfig& cfg) {
  PsiSpec spec = problem_a_common(blk, z, w, cfg);
  spec.a = 4.0 * blk.ell * blk.ell;
  spec.b = inv_or_zero(blk.beta) + cfg.delta_hat;
  spec.resid_coeff = blk.m * blk.m;
  spec.theta_lo = cfg.theta_lo;
  spec.theta_hi = cfg.theta_hi;
  return spec;
}

}  // namespace projsplit
