#include "projsplit/acceptance.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "projsplit/engine.hpp"
#include "projsplit/errors.hpp"
#include "projsplit/linesearch.hpp"
#include "projsplit/problems.hpp"
#include "projsplit/resolvents.hpp"

namespace projsplit {

namespace {

double soft(double v, double thr) {
  return v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
}

struct RunCase {
  std::string name;
  RunResult result;
  bool certified = false;
};

std::vector<RunCase> acceptance_runs() {
  std::vector<ProblemInstance> instances = build_scalar_suite();
  instances.push_back(random_l1_logistic(30, 5, 1, 0.05, 0.05, 11));
  instances.push_back(random_l1_logistic(40, 6, 2, 0.05, 0.05, 22));
  instances.push_back(random_l1_logistic(60, 8, 3, 0.05, 0.05, 33));

  StepConfig cfg;
  cfg.assertions = false;  // judge by collected extremes, not exceptions
  StoppingRule stop;
  stop.tol = 1e-7;

  std::vector<RunCase> runs;
  for (const ProblemInstance& inst : instances) {
    const BlockPoint ref = reference_solve(inst);
    RunCase rc;
    rc.name = inst.name;
    rc.result = run(inst.spec, cfg, zero_point(inst.spec), stop, &ref);
    rc.certified = certify_solution(inst, rc.result.final_point, 1e-6).ok;
    runs.push_back(std::move(rc));
  }
  return runs;
}

// ---- one-dimensional psi instances for the line-search theory -------------

struct ScalarPsi {
  std::string label;
  PsiSpec spec;
};

std::vector<ScalarPsi> scalar_psi_instances(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ScalarPsi> out;
  for (int i = 0; i < count; ++i) {
    ScalarPsi sp;
    const int kind = i % 4;
    const double lambda = 0.5 + unif(rng);
    const double slope = 0.5 + unif(rng);
    const double z = 2.0 + 3.0 * unif(rng);  // stays away from zeros of T
    sp.spec.z = Vec::Constant(1, z);
    sp.spec.a = (i % 3 == 0) ? 0.0 : unif(rng);
    sp.spec.b = (i % 5 == 0) ? 0.0 : unif(rng);
    sp.spec.resid_coeff = 1.0;
    sp.spec.theta_lo = 0.5;
    sp.spec.theta_hi = 1.5;
    switch (kind) {
      case 0:  // T = lambda d|.|
        sp.label = "l1";
        sp.spec.resolvent = [z, lambda](double rho, int&) {
          return Vec::Constant(1, soft(z, rho * lambda));
        };
        break;
      case 1:  // T(x) = slope (x - 1)
        sp.label = "linear";
        sp.spec.resolvent = [z, slope](double rho, int&) {
          return Vec::Constant(1, (z + rho * slope) / (1.0 + rho * slope));
        };
        break;
      case 2:  // T = normal cone of [-1, 1]
        sp.label = "box";
        sp.spec.resolvent = [z](double, int&) {
          return Vec::Constant(1, std::clamp(z, -1.0, 1.0));
        };
        break;
      default:  // T = d|.| + slope (x - 1)
        sp.label = "l1+linear";
        sp.spec.resolvent = [z, slope](double rho, int&) {
          return Vec::Constant(
              1, soft(z + rho * slope, rho) / (1.0 + rho * slope));
        };
        break;
    }
    out.push_back(std::move(sp));
  }
  return out;
}

/// rho with psi(rho) = target, by fine bisection (psi strictly increasing).
double psi_level(const PsiSpec& spec, double target) {
  double lo = 1e-8, hi = 1.0;
  int guard = 0;
  while (psi(spec, hi) < target) {
    hi *= 2.0;
    if (++guard > 200) throw OracleFailure("psi level bracket failed");
  }
  while (psi(spec, lo) > target) {
    lo *= 0.5;
    if (++guard > 400) throw OracleFailure("psi level bracket failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (psi(spec, mid) < target ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

// ---- criteria --------------------------------------------------------------

bool crit_convergence(const std::vector<RunCase>& runs, std::string& detail) {
  bool ok = true;
  double worst = 0.0;
  for (const RunCase& rc : runs) {
    ok = ok && rc.result.converged && rc.result.residual <= 1e-7 &&
         rc.certified;
    worst = std::max(worst, rc.result.residual);
  }
  std::ostringstream d;
  d << runs.size() << " instances, worst residual " << worst;
  detail = d.str();
  return ok;
}

bool crit_separator(const std::vector<RunCase>& runs, std::string& detail) {
  double worst = -kInf;
  long viol = 0;
  for (const RunCase& rc : runs) {
    worst = std::max(worst, rc.result.stats.max_separator_at_ref);
    viol += rc.result.stats.violations;
  }
  std::ostringstream d;
  d << "max separator value at reference " << worst << ", " << viol
    << " monitor violations";
  detail = d.str();
  return worst <= 1e-9 && viol == 0;
}

bool crit_fejer(const std::vector<RunCase>& runs, std::string& detail) {
  double worst = -kInf;
  for (const RunCase& rc : runs) {
    worst = std::max(worst, rc.result.stats.max_fejer_increase);
  }
  std::ostringstream d;
  d << "max distance increase " << worst;
  detail = d.str();
  return worst <= 1e-10;
}

bool crit_delta_bounds(const std::vector<RunCase>& runs, std::string& detail) {
  double worst_a = kInf, worst_b = kInf;
  for (const RunCase& rc : runs) {
    worst_a = std::min(worst_a, rc.result.stats.min_prop42a_slack);
    worst_b = std::min(worst_b, rc.result.stats.min_prop42b_slack);
  }
  std::ostringstream d;
  d << "min slack half-forward " << worst_a << ", proximal-Newton " << worst_b;
  detail = d.str();
  return worst_a >= -1e-9 && worst_b >= -1e-9;
}

bool crit_sandwich(const std::vector<RunCase>& runs, std::string& detail) {
  double worst = kInf;
  for (const RunCase& rc : runs) {
    worst = std::min(worst, rc.result.stats.min_lemma43_slack);
  }
  std::ostringstream d;
  d << "min slack " << worst;
  detail = d.str();
  return worst >= -1e-9;
}

bool crit_linesearch_contract(const std::vector<RunCase>& runs,
                              std::string& detail) {
  double worst_err = 0.0;
  int max_evals = 0;
  for (const RunCase& rc : runs) {
    worst_err = std::max(worst_err, rc.result.stats.max_step_condition_err);
    max_evals = std::max(max_evals, rc.result.stats.max_psi_evals);
  }
  std::ostringstream d;
  d << "max recheck error " << worst_err << ", max merit evaluations "
    << max_evals << " (per-search termination bound enforced in-search)";
  detail = d.str();
  return worst_err <= 1e-9 && max_evals <= 64;
}

bool crit_psi_theory(std::string& detail) {
  std::mt19937_64 rng(7101);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  bool ok = true;

  {  // growth sandwich on 200 sampled triples
    auto instances = scalar_psi_instances(rng, 50);
    int tested = 0;
    while (tested < 200) {
      for (ScalarPsi& sp : instances) {
        const double mu = 0.05 + 2.0 * unif(rng);
        const double rho = mu * (1.0 + 3.0 * unif(rng));
        const double pm = psi(sp.spec, mu);
        const double pr = psi(sp.spec, rho);
        const double scale = 1e-9 * (1.0 + pm + pr);
        ok = ok && (rho / mu) * pm <= pr + scale &&
             pr <= std::pow(rho / mu, 4) * pm + scale;
        if (++tested == 200) break;
      }
    }
  }
  {  // exact-equality case: soft-thresholding at z = 3, ratio 16
    PsiSpec sp;
    sp.z = Vec::Constant(1, 3.0);
    sp.resolvent = [](double rho, int&) {
      return Vec::Constant(1, soft(3.0, rho));
    };
    ok = ok && std::abs(psi(sp, 1.0) - 1.0) <= 1e-12 &&
         std::abs(psi(sp, 2.0) - 16.0) <= 1e-12;
  }

  auto instances = scalar_psi_instances(rng, 20);
  double min_ratio_slack = kInf;
  for (ScalarPsi& sp : instances) {
    const double rlo = psi_level(sp.spec, sp.spec.theta_lo);
    const double rhi = psi_level(sp.spec, sp.spec.theta_hi);
    // acceptance-interval width
    min_ratio_slack = std::min(
        min_ratio_slack, rhi / rlo - std::pow(sp.spec.theta_hi / sp.spec.theta_lo, 0.25));
    // bracket containment from a rejected trial value
    for (int t = 0; t < 5; ++t) {
      const double rho = 0.02 * std::pow(400.0, unif(rng));  // log-uniform
      const double val = psi(sp.spec, rho);
      if (val >= sp.spec.theta_lo && val <= sp.spec.theta_hi) continue;
      const Bracket br =
          initial_bracket(rho, val, sp.spec.theta_lo, sp.spec.theta_hi);
      if (val < sp.spec.theta_lo) {
        ok = ok && rho <= rlo + 1e-9 && rhi <= rho * sp.spec.theta_hi / val + 1e-9;
        ok = ok && std::abs(br.t_lo - rho) <= 1e-12 &&
             std::abs(br.t_hi - rho * sp.spec.theta_hi / val) <= 1e-9;
      } else {
        ok = ok && rho >= rhi - 1e-9 && rlo >= rho * sp.spec.theta_lo / val - 1e-9;
        ok = ok && std::abs(br.t_hi - rho) <= 1e-12 &&
             std::abs(br.t_lo - rho * sp.spec.theta_lo / val) <= 1e-9;
      }
      ok = ok && br.t_lo <= rlo + 1e-9 && br.t_hi >= rhi - 1e-9;
    }
  }
  ok = ok && min_ratio_slack >= -1e-9;

  std::ostringstream d;
  d << "growth sandwich, interval width (min slack " << min_ratio_slack
    << "), bracket containment";
  detail = d.str();
  return ok;
}

bool crit_linearization_bound(std::string& detail) {
  std::mt19937_64 rng(8202);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  bool ok = true;

  SigmoidOperator sig;
  for (int t = 0; t < 1000; ++t) {
    Vec z(3), u(3);
    for (int i = 0; i < 3; ++i) {
      z(i) = unif(rng);
      u(i) = unif(rng);
    }
    ok = ok && linearization_error_within_bound(sig, z, u);
  }

  Mat data(10, 4);
  Vec labels(10);
  for (Eigen::Index r = 0; r < 10; ++r) {
    for (Eigen::Index c = 0; c < 4; ++c) data(r, c) = unif(rng) / 3.0;
    labels(r) = unif(rng) >= 0.0 ? 1.0 : -1.0;
  }
  const auto logi = make_logistic_gradient(data, labels);
  for (int t = 0; t < 1000; ++t) {
    Vec z(4), u(4);
    for (int i = 0; i < 4; ++i) {
      z(i) = unif(rng);
      u(i) = unif(rng);
    }
    ok = ok && linearization_error_within_bound(*logi, z, u);
  }
  detail = "2000 sampled (z, u) pairs across both smooth catalog operators";
  return ok;
}

bool crit_projections(std::string& detail) {
  std::mt19937_64 rng(9303);
  std::normal_distribution<double> gauss(0.0, 1.0);
  bool ok = true;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index dn = 1 + t % 4, dm = 1 + (t / 4) % 3;
    Mat g(dm, dn);
    Vec z(dn), w(dm);
    for (Eigen::Index r = 0; r < dm; ++r) {
      for (Eigen::Index c = 0; c < dn; ++c) g(r, c) = gauss(rng);
      w(r) = gauss(rng);
    }
    for (Eigen::Index c = 0; c < dn; ++c) z(c) = gauss(rng);
    const LinearMap map(g);
    const GraphProjection p = graph_project(z, w, map);
    const double scale = 1.0 + z.norm() + w.norm();
    double err = (p.z_on + p.z_perp - z).norm() + (p.w_on + p.w_perp - w).norm();
    err = std::max(err, (p.w_on - map.apply(p.z_on)).norm());
    err = std::max(err,
                   std::abs(p.z_on.dot(p.z_perp) + p.w_on.dot(p.w_perp)));
    const GraphProjection pp = graph_project(p.z_on, p.w_on, map);
    err = std::max(err, (pp.z_on - p.z_on).norm() + (pp.w_on - p.w_on).norm());
    worst = std::max(worst, err / scale);
    ok = ok && err <= 1e-10 * scale;
  }
  std::ostringstream d;
  d << "100 random (z, w, G); worst relative error " << worst;
  detail = d.str();
  return ok;
}

bool crit_oracle_equivalence(std::string& detail) {
  std::mt19937_64 rng(10404);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  bool ok = true;
  double worst = 0.0;

  SigmoidOperator sig;
  for (int t = 0; t < 100; ++t) {
    const double gz = 4.0 * unif(rng) - 2.0;
    const double w = 2.0 * unif(rng) - 1.0;
    const double bc = 2.0 * unif(rng) - 1.0;  // (B+C)(Gz), a fixed scalar
    const double rho = 0.1 + 4.0 * unif(rng);
    const Linearization lin = linearize(sig, Vec::Constant(1, gz));
    const double d0 = lin.constant()(0);
    const double h = lin.jacobian_at_u(0, 0);

    std::shared_ptr<const MaxMonotone> a;
    std::function<double(double)> prox_a;  // x solving (1+rho h)x + rho A(x) = v
    const double denom = 1.0 + rho * h;
    switch (t % 4) {
      case 0: {
        const double lambda = 0.5 + unif(rng);
        a = make_l1_subdiff(lambda);
        prox_a = [=](double v) { return soft(v, rho * lambda) / denom; };
        break;
      }
      case 1:
        a = make_box_normal_cone(Vec::Constant(1, -0.5), Vec::Constant(1, 0.75));
        prox_a = [=](double v) { return std::clamp(v / denom, -0.5, 0.75); };
        break;
      case 2:
        a = std::make_shared<ZeroMaxMonotone>();
        prox_a = [=](double v) { return v / denom; };
        break;
      default: {
        const double ca = unif(rng);
        a = std::make_shared<LinearMaxMonotone>(Mat::Constant(1, 1, ca));
        prox_a = [=](double v) { return v / (denom + rho * ca); };
        break;
      }
    }
    // shifted-operator resolvent at Gz, evaluated in closed form
    const double v = gz - rho * (d0 + bc - w);
    const double x_explicit = prox_a(v);
    // linearized resolvent at the composite argument
    const Vec s = Vec::Constant(1, gz + rho * w - rho * bc);
    const auto res = resolve_linearized(*a, rho, lin, s, 1e-13, 200000);
    worst = std::max(worst, std::abs(res.x(0) - x_explicit));
    ok = ok && std::abs(res.x(0) - x_explicit) <= 1e-9;
  }

  // identical accept decisions of the raw and reduced merit searches
  StepConfig cfg;
  OperatorBlock blk = make_block(
      make_l1_subdiff(0.7), nullptr,
      make_quadratic_gradient(Mat::Constant(1, 1, 0.5), Vec::Constant(1, 0.2)),
      std::make_shared<SigmoidOperator>(), LinearMap::identity(1));
  int agreements = 0;
  for (int t = 0; t < 50; ++t) {
    const Vec z = Vec::Constant(1, 6.0 * unif(rng) - 3.0);
    const Vec w = Vec::Constant(1, 2.0 * unif(rng) - 1.0);
    const double rho = 0.05 * std::pow(400.0, unif(rng));
    const PsiSpec raw = raw_problem_a(blk, z, w, cfg);
    const PsiSpec red = reduce_problem_a(blk, z, w, cfg);
    const double vr = psi(raw, rho), vd = psi(red, rho);
    const bool accept_raw = vr >= raw.theta_lo && vr <= raw.theta_hi;
    const bool accept_red = vd >= red.theta_lo && vd <= red.theta_hi;
    if (accept_raw == accept_red) ++agreements;
  }
  ok = ok && agreements == 50;

  std::ostringstream d;
  d << "max resolvent mismatch " << worst << "; " << agreements
    << "/50 identical accept decisions";
  detail = d.str();
  return ok;
}

bool crit_worked_examples(std::string& detail) {
  bool ok = true;
  const double tol = 1e-12;

  {  // soft-thresholding triple
    const auto a = make_l1_subdiff(1.0);
    ok = ok && std::abs(resolve_plain(*a, 1.0, Vec::Constant(1, 3.0))(0) - 2.0) <= tol;
    ok = ok && std::abs(resolve_plain(*a, 1.0, Vec::Constant(1, 0.5))(0)) <= tol;
    ok = ok && std::abs(resolve_plain(*a, 2.0, Vec::Constant(1, -5.0))(0) + 3.0) <= tol;
  }

  // half-forward step and the projection that follows it
  ProblemSpec spec;
  spec.dim0 = 1;
  spec.blocks.push_back(make_block(
      nullptr, nullptr,
      make_quadratic_gradient(Mat::Identity(1, 1), Vec::Zero(1)), nullptr,
      LinearMap::identity(1)));
  const Vec z1 = Vec::Constant(1, 1.0);
  const Vec w0 = Vec::Zero(1);
  const BlockStepResult hf = half_forward_step(spec.blocks[0], z1, w0, 0.5);
  ok = ok && std::abs(hf.x(0) - 0.5) <= tol && std::abs(hf.y(0) - 1.0) <= tol &&
       std::abs(hf.delta - 0.4375) <= tol;

  const SeparatorState sep = separator_value(z1, {}, {hf}, spec, 1.0);
  ok = ok && std::abs(sep.phi - 0.4375) <= tol && std::abs(sep.pi - 1.0) <= tol;
  const BlockPoint next = project_update(BlockPoint{z1, {}}, sep, 1.0);
  ok = ok && std::abs(next.z(0) - 0.5625) <= tol;

  {  // bracket updates
    const Bracket lo = initial_bracket(1.0, 0.1, 0.5, 1.5);
    ok = ok && std::abs(lo.t_lo - 1.0) <= tol && std::abs(lo.t_hi - 15.0) <= tol;
    ok = ok && std::abs(std::sqrt(lo.t_lo * lo.t_hi) - std::sqrt(15.0)) <= tol;
    const Bracket hi = initial_bracket(2.0, 4.0, 0.5, 1.5);
    ok = ok && std::abs(hi.t_lo - 0.25) <= tol && std::abs(hi.t_hi - 2.0) <= tol;
  }

  {  // linearized resolvent of the sigmoid model at the origin
    SigmoidOperator sig;
    const Linearization lin = linearize(sig, Vec::Zero(1));
    const auto res = resolve_linearized(ZeroMaxMonotone(), 1.0, lin,
                                        Vec::Constant(1, 1.0));
    ok = ok && std::abs(res.x(0) - 0.4) <= tol;
    const double sig04 = 1.0 / (1.0 + std::exp(-0.4));
    const double y = (0.0 - res.x(0)) / 1.0 + 1.0 + sig.eval(res.x)(0) -
                     lin.eval(res.x)(0);
    ok = ok && std::abs(y - sig04) <= tol;
  }

  detail = "hand-derived chains reproduce to 1e-12";
  return ok;
}

}  // namespace

bool run_acceptance(std::ostream& out) {
  struct Criterion {
    const char* title;
    std::function<bool(std::string&)> check;
  };

  const std::vector<RunCase> runs = acceptance_runs();
  const std::vector<Criterion> criteria = {
      {"convergence to certified solutions",
       [&](std::string& d) { return crit_convergence(runs, d); }},
      {"separator nonpositive at the reference solution",
       [&](std::string& d) { return crit_separator(runs, d); }},
      {"Fejer monotonicity of the iterate distance",
       [&](std::string& d) { return crit_fejer(runs, d); }},
      {"per-branch Delta lower bounds",
       [&](std::string& d) { return crit_delta_bounds(runs, d); }},
      {"Lipschitz sandwich at half-forward steps",
       [&](std::string& d) { return crit_sandwich(runs, d); }},
      {"line-search contract (window, budget, recheck)",
       [&](std::string& d) { return crit_linesearch_contract(runs, d); }},
      {"merit-function theory (growth, width, brackets)",
       [&](std::string& d) { return crit_psi_theory(d); }},
      {"linearization error bound",
       [&](std::string& d) { return crit_linearization_bound(d); }},
      {"graph projection identities",
       [&](std::string& d) { return crit_projections(d); }},
      {"oracle equivalence of the linearized resolvent and merit forms",
       [&](std::string& d) { return crit_oracle_equivalence(d); }},
      {"worked-example regression",
       [&](std::string& d) { return crit_worked_examples(d); }},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool pass = false;
    try {
      pass = criteria[i].check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    all = all && pass;
    out << std::setw(2) << (i + 1) << ". " << (pass ? "PASS" : "FAIL") << "  "
        << criteria[i].title << " — " << detail << '\n';
  }
  out << (all ? "all criteria passed" : "FAILURES present") << '\n';
  return all;
}

}  // namespace projsplit
