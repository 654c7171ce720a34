#include "projsplit/engine.hpp"

#include <cmath>
#include <sstream>

#include "projsplit/errors.hpp"
#include "projsplit/linesearch.hpp"
#include "projsplit/resolvents.hpp"

namespace projsplit {

std::vector<LinearMap> ProblemSpec::stored_maps() const {
  std::vector<LinearMap> maps;
  for (Eigen::Index i = 0; i + 1 < n(); ++i) maps.push_back(blocks[i].G);
  return maps;
}

void ProblemSpec::validate() const {
  if (blocks.empty()) throw ConfigError("problem needs at least one block");
  if (dim0 <= 0) throw ConfigError("dim0 must be positive");
  for (const auto& blk : blocks) {
    if (blk.G.cols() != dim0) {
      throw ConfigError("every G_i must map from the base space");
    }
  }
  if (!blocks.back().G.is_identity()) {
    throw ConfigError("the last block must have G_n = identity");
  }
}

SeparatorState separator_value(const Vec& z, const std::vector<Vec>& w,
                               const std::vector<BlockStepResult>& steps,
                               const ProblemSpec& spec, double gamma) {
  const Eigen::Index n = spec.n();
  if (static_cast<Eigen::Index>(steps.size()) != n ||
      static_cast<Eigen::Index>(w.size()) + 1 != n) {
    throw DimensionError("separator_value: steps/w size mismatch");
  }
  SeparatorState sep;
  const Vec& xn = steps[n - 1].x;
  sep.v = steps[n - 1].y;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    sep.u.push_back(steps[i].x - spec.blocks[i].G.apply(xn));
    sep.v += spec.blocks[i].G.apply_adjoint(steps[i].y);
  }
  double phi = z.dot(sep.v);
  for (Eigen::Index i = 0; i + 1 < n; ++i) phi += w[i].dot(sep.u[i]);
  for (Eigen::Index i = 0; i < n; ++i) {
    phi -= steps[i].x.dot(steps[i].y);
    phi -= 0.25 * inv_or_zero(spec.blocks[i].beta) * steps[i].xres *
           steps[i].xres;
  }
  sep.phi = phi;
  sep.pi = sep.v.squaredNorm() / gamma;
  for (const Vec& ui : sep.u) sep.pi += ui.squaredNorm();
  return sep;
}

double separator_at(const BlockPoint& p,
                    const std::vector<BlockStepResult>& steps,
                    const ProblemSpec& spec) {
  const Eigen::Index n = spec.n();
  const Vec wn = derived_wn(p, spec.stored_maps(), spec.dim0);
  double phi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec& wi = (i + 1 < n) ? p.w[i] : wn;
    const Vec gz = spec.blocks[i].G.apply(p.z);
    phi += (gz - steps[i].x).dot(steps[i].y - wi);
    phi -= 0.25 * inv_or_zero(spec.blocks[i].beta) * steps[i].xres *
           steps[i].xres;
  }
  return phi;
}

BlockPoint project_update(const BlockPoint& p, const SeparatorState& sep,
                          double gamma) {
  if (!(sep.phi > 0.0)) {
    throw InternalInconsistency("project_update called with phi <= 0");
  }
  if (sep.pi <= 0.0) {
    throw InternalInconsistency(
        "pi = 0 with phi > 0 (impossible for a valid separator)");
  }
  const double alpha = sep.tau * sep.phi / sep.pi;
  BlockPoint next;
  next.z = p.z - (alpha / gamma) * sep.v;
  next.w.reserve(p.w.size());
  for (std::size_t i = 0; i < p.w.size(); ++i) {
    next.w.push_back(p.w[i] - alpha * sep.u[i]);
  }
  return next;
}

double residual_of(const std::vector<BlockStepResult>& steps) {
  double r = 0.0;
  for (const auto& s : steps) r = std::max({r, s.xres, s.yres});
  return r;
}

namespace {

class Monitor {
 public:
  Monitor(const StepConfig& cfg, MonitorStats& stats)
      : cfg_(cfg), stats_(stats) {}

  void require(bool ok, const char* check, double value) {
    if (ok) return;
    ++stats_.violations;
    if (cfg_.assertions) {
      std::ostringstream msg;
      msg << "violated with value " << value;
      throw InvariantViolation(check, msg.str());
    }
  }

  const StepConfig& cfg_;
  MonitorStats& stats_;
};

struct BlockRunState {
  double warm_rho = 1.0;
  double fixed_rho = 0.0;   // non-smooth blocks
  double rho_min = kInf;    // running accepted extremes
  double rho_max = 0.0;
};

}  // namespace

RunResult run(const ProblemSpec& spec, const StepConfig& cfg, BlockPoint init,
              const StoppingRule& stop, const BlockPoint* reference) {
  spec.validate();
  cfg.validate();
  const Eigen::Index n = spec.n();
  if (init.z.size() != spec.dim0 ||
      static_cast<Eigen::Index>(init.w.size()) + 1 != n) {
    throw DimensionError("run: initial point incompatible with problem");
  }
  const std::vector<LinearMap> stored = spec.stored_maps();

  RunResult res;
  Monitor mon(cfg, res.stats);

  // Fixed proximal parameters for non-smooth blocks; explicit per-block
  // values must respect the bound strictly.
  std::vector<BlockRunState> bs(n);
  double rho_bar = 0.0, rho_ubar = kInf;
  for (Eigen::Index i = 0; i < n; ++i) {
    bs[i].warm_rho = cfg.rho_hat;
    if (spec.blocks[i].in_smooth_set) continue;
    double rho = clamped_nonsmooth_rho(spec.blocks[i], cfg.rho_nonsmooth);
    if (static_cast<Eigen::Index>(cfg.rho_per_block.size()) > i &&
        cfg.rho_per_block[i] > 0.0) {
      rho = cfg.rho_per_block[i];
      if (rho >= nonsmooth_rho_limit(spec.blocks[i])) {
        throw ConfigError(
            "per-block rho violates the step-size bound "
            "rho < 1/(1/(4 beta) + ell) for a non-smooth block (A8)");
      }
    }
    bs[i].fixed_rho = rho;
    rho_bar = std::max(rho_bar, rho);
    rho_ubar = std::min(rho_ubar, rho);
  }
  const double rho_cap =
      std::max({cfg.rho_hat, cfg.theta_hi / cfg.delta_hat,
                rho_bar > 0.0 ? rho_bar : 0.0});

  BlockPoint p = std::move(init);
  std::vector<BlockStepResult> steps(n);

  for (long k = 0; k < stop.max_iters; ++k) {
    const Vec wn = derived_wn(p, stored, spec.dim0);

    for (Eigen::Index i = 0; i < n; ++i) {
      const OperatorBlock& blk = spec.blocks[i];
      const Vec& wi = (i + 1 < n) ? p.w[i] : wn;
      const Vec gz = blk.G.apply(p.z);
      try {
        if (graph_membership(blk, gz, wi, cfg.shortcut_tol)) {
          steps[i] = shortcut_step(blk, gz, wi, cfg.rho_hat);
          ++res.stats.shortcut_steps;
        } else if (blk.in_smooth_set) {
          try {
            steps[i] = proximal_newton_step(blk, p.z, wi, cfg, bs[i].warm_rho);
          } catch (const ZeroResidual&) {
            steps[i] = shortcut_step(blk, gz, wi, cfg.rho_hat);
            ++res.stats.shortcut_steps;
            bs[i].rho_min = std::min(bs[i].rho_min, steps[i].rho);
            bs[i].rho_max = std::max(bs[i].rho_max, steps[i].rho);
            continue;
          }
          bs[i].warm_rho = steps[i].rho;
          ++res.stats.proximal_newton_steps;
          res.stats.max_psi_evals =
              std::max(res.stats.max_psi_evals, steps[i].psi_evals);
        } else {
          steps[i] = half_forward_step(blk, p.z, wi, bs[i].fixed_rho);
          ++res.stats.half_forward_steps;
        }
      } catch (const BisectionFailure& e) {
        throw BisectionFailure("block " + std::to_string(i + 1) +
                                   ", iteration " + std::to_string(k) + ": " +
                                   e.what(),
                               e.t_lo, e.t_hi, e.evaluations);
      } catch (const InnerSolveFailure& e) {
        throw InnerSolveFailure("block " + std::to_string(i + 1) +
                                    ", iteration " + std::to_string(k) + ": " +
                                    e.what(),
                                e.best_residual, e.iterations);
      }
      bs[i].rho_min = std::min(bs[i].rho_min, steps[i].rho);
      bs[i].rho_max = std::max(bs[i].rho_max, steps[i].rho);
      res.stats.max_rho = std::max(res.stats.max_rho, steps[i].rho);
      res.stats.max_iterate_norm =
          std::max(res.stats.max_iterate_norm, steps[i].x.norm());
    }

    // ---- per-block monitored inequalities -------------------------------
    double phi_coef = kInf;  // smallest per-block Delta coefficient
    double delta_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const OperatorBlock& blk = spec.blocks[i];
      const BlockStepResult& s = steps[i];
      const double delta =
          cfg.test_flip_delta_sign ? -s.delta : s.delta;
      delta_sum += delta;

      if (!blk.in_smooth_set) {
        const double lhs = (1.0 - s.rho * blk.ell) * s.xres;
        const double mid = s.rho * s.yres;
        const double rhs = (1.0 + s.rho * blk.ell) * s.xres;
        const double slack = std::min(mid - lhs, rhs - mid);
        res.stats.min_lemma43_slack =
            std::min(res.stats.min_lemma43_slack, slack);
        mon.require(slack >= -1e-9, "Lemma 4.3 sandwich", slack);

        const double ca =
            0.5 * (1.0 / rho_bar - (0.25 * inv_or_zero(blk.beta) + blk.ell));
        const double cy = ca * std::pow(rho_ubar / (1.0 + rho_bar * blk.ell), 2);
        const double bound = ca * s.xres * s.xres + cy * s.yres * s.yres;
        const double slack_a = delta - bound;
        res.stats.min_prop42a_slack =
            std::min(res.stats.min_prop42a_slack, slack_a);
        mon.require(slack_a >= -1e-9, "Prop 4.2(a) lower bound", slack_a);
        phi_coef = std::min({phi_coef, ca, cy});
      } else {
        const double cb_x = (2.0 - cfg.theta_hi) / (4.0 * bs[i].rho_max);
        const double cb_y = 0.5 * bs[i].rho_min;
        const double bound = cb_x * s.xres * s.xres + cb_y * s.yres * s.yres;
        const double slack_b = delta - bound;
        res.stats.min_prop42b_slack =
            std::min(res.stats.min_prop42b_slack, slack_b);
        mon.require(slack_b >= -1e-9, "Prop 4.2(b) lower bound", slack_b);
        phi_coef = std::min({phi_coef, cb_x, cb_y});

        if (s.branch == StepBranch::proximal_newton) {
          const double val =
              step_condition_value(blk, s.rho, s.x, s.Gz, cfg.delta_hat);
          const double err =
              std::max({0.0, cfg.theta_lo - val, val - cfg.theta_hi});
          res.stats.max_step_condition_err =
              std::max(res.stats.max_step_condition_err, err);
          mon.require(err <= 1e-9, "step condition recheck", val);
        }
      }

      // y - (B+D)(x) - C(Gz) must lie in A(x).
      Vec a_cand = s.y - blk.B->eval(s.x) - blk.C->eval(s.Gz);
      if (blk.D) a_cand -= blk.D->eval(s.x);
      const double incl = (s.x - blk.A->resolvent(1.0, s.x + a_cand)).norm();
      res.stats.max_inclusion_residual =
          std::max(res.stats.max_inclusion_residual, incl);
      mon.require(incl <= 1e-9, "inclusion certificate (Lemma 3.1)", incl);

      mon.require(s.rho <= rho_cap * (1.0 + 1e-12),
                  "rho upper bound (Lemma on parameter boundedness)", s.rho);
      mon.require(s.x.norm() <= 1e12, "iterate boundedness (Lemma 2.4)",
                  s.x.norm());
    }

    const double residual = residual_of(steps);
    if (residual <= stop.tol) {
      res.converged = true;
      res.residual = residual;
      break;
    }

    SeparatorState sep =
        separator_value(p.z, p.w, steps, spec, cfg.gamma);
    sep.tau = cfg.tau;

    {
      // pi recomputed from the gradient through the weighted inner product.
      BlockPoint grad{sep.v / cfg.gamma, sep.u};
      const double pi2 = gamma_inner(grad, grad, cfg.gamma);
      mon.require(std::abs(sep.pi - pi2) <= 1e-9 * (1.0 + sep.pi),
                  "pi = ||grad phi||^2 (Prop 4.1(a))", pi2);

      double adj_bound = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const Vec& wi = (i + 1 < n) ? p.w[i] : wn;
        adj_bound += spec.blocks[i].G.norm_bound() * (wi - steps[i].y).norm();
      }
      const double viol = sep.v.norm() - adj_bound;
      res.stats.max_adjoint_sum_violation =
          std::max(res.stats.max_adjoint_sum_violation, viol);
      mon.require(viol <= 1e-9, "adjoint-sum inequality (Lemma 4.4(c))", viol);

      const double phi_scale = 1.0 + std::abs(sep.phi) + std::abs(delta_sum);
      mon.require(std::abs(sep.phi - delta_sum) <= 1e-8 * phi_scale,
                  "phi equals sum of Delta (Prop 4.1(b))", sep.phi - delta_sum);

      double sum_sq = 0.0;
      for (const auto& s : steps) {
        sum_sq += s.xres * s.xres + s.yres * s.yres;
      }
      const double slack_d = sep.phi - phi_coef * sum_sq;
      res.stats.min_phi_lower_slack =
          std::min(res.stats.min_phi_lower_slack, slack_d);
      mon.require(slack_d >= -1e-9, "Prop 4.2(d) lower bound", slack_d);
    }

    if (reference) {
      const double at_ref = separator_at(*reference, steps, spec);
      res.stats.max_separator_at_ref =
          std::max(res.stats.max_separator_at_ref, at_ref);
      mon.require(at_ref <= 1e-9,
                  "separator nonpositive at solution (Prop 4.1(c))", at_ref);
    }

    BlockPoint next = sep.phi > 0.0 ? project_update(p, sep, cfg.gamma) : p;

    if (reference) {
      const double before = gamma_norm(
          BlockPoint{p.z - reference->z, [&] {
                       std::vector<Vec> d;
                       for (std::size_t i = 0; i < p.w.size(); ++i)
                         d.push_back(p.w[i] - reference->w[i]);
                       return d;
                     }()},
          cfg.gamma);
      const double after = gamma_norm(
          BlockPoint{next.z - reference->z, [&] {
                       std::vector<Vec> d;
                       for (std::size_t i = 0; i < next.w.size(); ++i)
                         d.push_back(next.w[i] - reference->w[i]);
                       return d;
                     }()},
          cfg.gamma);
      const double inc = after - before;
      res.stats.max_fejer_increase =
          std::max(res.stats.max_fejer_increase, inc);
      mon.require(inc <= 1e-10, "Fejer monotonicity", inc);
    }

    IterationRecord rec;
    rec.k = k;
    rec.phi = sep.phi;
    rec.pi = sep.pi;
    rec.alpha = sep.phi > 0.0 ? sep.tau * sep.phi / sep.pi : 0.0;
    rec.residual = residual;
    for (const auto& s : steps) {
      rec.blocks.push_back({s.rho, s.xres, s.yres, s.delta,
                            static_cast<int>(s.branch), s.inner_iters});
    }
    res.trace.push_back(std::move(rec));
    res.residual = residual;
    p = std::move(next);
  }

  res.iterations = static_cast<long>(res.trace.size());
  res.final_point = std::move(p);
  return res;
}

}  // namespace projsplit
