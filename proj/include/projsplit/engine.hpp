#pragma once

#include <vector>

#include "projsplit/stepper.hpp"

namespace projsplit {

/// The full inclusion problem: n blocks, the last one with G = identity.
struct ProblemSpec {
  std::vector<OperatorBlock> blocks;
  Eigen::Index dim0 = 0;

  Eigen::Index n() const { return static_cast<Eigen::Index>(blocks.size()); }
  /// G_1..G_{n-1} (the maps paired with the stored w components).
  std::vector<LinearMap> stored_maps() const;
  void validate() const;
};

struct SeparatorState {
  std::vector<Vec> u;  // u_i = x_i - G_i x_n, i = 1..n-1
  Vec v;               // sum_i G_i^* y_i
  double phi = 0.0;
  double pi = 0.0;
  double alpha = 0.0;
  double tau = 1.0;
};

struct IterationRecord {
  long k = 0;
  double phi = 0.0;
  double pi = 0.0;
  double alpha = 0.0;
  double residual = 0.0;
  struct PerBlock {
    double rho = 0.0;
    double xres = 0.0;
    double yres = 0.0;
    double delta = 0.0;
    int branch = 0;
    int inner = 0;
  };
  std::vector<PerBlock> blocks;
};

struct StoppingRule {
  double tol = 1e-7;
  long max_iters = 100000;
};

/// Extremes of every monitored inequality over a run; collected whether or
/// not assertions are armed.
struct MonitorStats {
  double min_lemma43_slack = kInf;       // Lipschitz sandwich on y residuals
  double min_prop42a_slack = kInf;       // half-forward Delta lower bound
  double min_prop42b_slack = kInf;       // proximal-Newton Delta lower bound
  double min_phi_lower_slack = kInf;     // phi >= c sum of residuals
  double max_inclusion_residual = 0.0;   // y - (B+D)x - C(Gz) in A(x)
  double max_step_condition_err = 0.0;   // distance of recheck to [lo, hi]
  double max_separator_at_ref = -kInf;   // phi_k(p*), reference runs only
  double max_fejer_increase = -kInf;     // ||p+ - p*|| - ||p - p*||
  double max_adjoint_sum_violation = 0.0;  // Lemma on ||sum G* y||
  double max_iterate_norm = 0.0;
  double max_rho = 0.0;
  int max_psi_evals = 0;
  bool termination_bound_ok = true;
  long shortcut_steps = 0;
  long half_forward_steps = 0;
  long proximal_newton_steps = 0;
  long violations = 0;
};

struct RunResult {
  BlockPoint final_point;
  std::vector<IterationRecord> trace;
  bool converged = false;
  double residual = kInf;
  long iterations = 0;
  MonitorStats stats;
};

/// Separator data (u, v, phi, pi) at the current iterate.
SeparatorState separator_value(const Vec& z, const std::vector<Vec>& w,
                               const std::vector<BlockStepResult>& steps,
                               const ProblemSpec& spec, double gamma);

/// The affine separator evaluated at an arbitrary product-space point.
double separator_at(const BlockPoint& p,
                    const std::vector<BlockStepResult>& steps,
                    const ProblemSpec& spec);

/// Projection/relaxation update; requires sep.phi > 0.
BlockPoint project_update(const BlockPoint& p, const SeparatorState& sep,
                          double gamma);

/// max over blocks of max(||x - Gz||, ||y - w||); w_n derived.
double residual_of(const std::vector<BlockStepResult>& steps);

/// Outer loop. `reference`, when given, must be a certified solution; the
/// separator-validity and Fejer checks are then monitored against it.
RunResult run(const ProblemSpec& spec, const StepConfig& cfg, BlockPoint init,
              const StoppingRule& stop, const BlockPoint* reference = nullptr);

}  // namespace projsplit
