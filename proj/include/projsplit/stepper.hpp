#pragma once

#include <vector>

#include "projsplit/operators.hpp"

namespace projsplit {

enum class StepBranch : int {
  graph_shortcut = 0,
  half_forward = 1,
  proximal_newton = 2,
};

/// Run parameters of the outer algorithm. Defaults satisfy every input
/// constraint (0 < theta_lo < theta_hi < 2, etc.).
struct StepConfig {
  double theta_lo = 0.9;
  double theta_hi = 1.9;
  double rho_hat = 1.0;
  double delta_hat = 1.0;
  double tau_lo = 0.1;
  double tau_hi = 1.9;
  double tau = 1.0;  // fixed relaxation, must lie in [tau_lo, tau_hi]
  double gamma = 1.0;
  /// Requested proximal parameter for non-smooth blocks; clamped per block
  /// to 0.99/(1/(4 beta) + ell) so the step-size assumption always holds.
  double rho_nonsmooth = 1.0;
  /// Optional exact per-block values (non-smooth blocks); must satisfy the
  /// step-size assumption strictly, no clamping applied.
  std::vector<double> rho_per_block;
  double shortcut_tol = 1e-12;
  double inner_tol = 1e-10;
  int max_inner_iters = 10000;
  int max_psi_evals = 64;
  bool assertions = true;
  /// Test hook: flips the sign of every Delta before the monitor sees it.
  bool test_flip_delta_sign = false;

  void validate() const;
};

struct BlockStepResult {
  double rho = 0.0;
  Vec x;
  Vec y;
  double delta = 0.0;
  StepBranch branch = StepBranch::half_forward;
  Vec Gz;  // the G_i z^k this step was computed at
  double xres = 0.0;  // ||x - G z||
  double yres = 0.0;  // ||y - w||
  int inner_iters = 0;
  int psi_evals = 0;
};

/// Delta = <Gz - x, y - w> - 1/(4 beta) ||x - Gz||^2, with 1/(4 beta) = 0
/// for beta = inf.
double delta_value(double beta, const Vec& gz, const Vec& x, const Vec& y,
                   const Vec& w);

/// The middle expression of the step condition:
/// 4 l^2 rho^2 + (1/beta + delta_hat) rho + (m rho ||x - Gz||)^2.
double step_condition_value(const OperatorBlock& blk, double rho, const Vec& x,
                            const Vec& gz, double delta_hat);

/// min(requested, 0.99/(1/(4 beta) + ell)); infinite bound leaves the
/// request unchanged.
double clamped_nonsmooth_rho(const OperatorBlock& blk, double requested);

/// Largest admissible rho-bar for a non-smooth block: 1/(1/(4 beta) + ell).
double nonsmooth_rho_limit(const OperatorBlock& blk);

BlockStepResult shortcut_step(const OperatorBlock& blk, const Vec& gz,
                              const Vec& w, double rho_hat);

BlockStepResult half_forward_step(const OperatorBlock& blk, const Vec& z,
                                  const Vec& w, double rho);

BlockStepResult proximal_newton_step(const OperatorBlock& blk, const Vec& z,
                                     const Vec& w, const StepConfig& cfg,
                                     double warm_rho);

}  // namespace projsplit
