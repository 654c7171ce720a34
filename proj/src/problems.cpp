#include "projsplit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "projsplit/errors.hpp"
#include "projsplit/resolvents.hpp"

namespace projsplit {

namespace {

std::shared_ptr<const MaxMonotone> zero_mono() {
  return std::make_shared<ZeroMaxMonotone>();
}

/// w_i in T_i(G_i z) built from the block's forward part and the linear
/// part of A (all shipped shapes have A linear or zero on non-last blocks).
std::vector<Vec> recover_duals(const ProblemSpec& spec, const Vec& z) {
  std::vector<Vec> w;
  for (Eigen::Index i = 0; i + 1 < spec.n(); ++i) {
    const OperatorBlock& blk = spec.blocks[i];
    const Vec gz = blk.G.apply(z);
    Vec wi = blk.forward_sum(gz);
    if (auto m = blk.A->linear_part(blk.dim())) {
      wi += *m * gz;
    } else {
      throw OracleFailure(
          "dual recovery needs a linear A on every non-last block");
    }
    w.push_back(std::move(wi));
  }
  return w;
}

/// Affine map read off by probing: column j = F(e_j) - F(0).
template <typename Op>
std::pair<Mat, Vec> probe_affine(const Op& op, Eigen::Index dim) {
  const Vec c = op.eval(Vec::Zero(dim));
  Mat m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    m.col(j) = op.eval(Vec::Unit(dim, j)) - c;
  }
  return {m, c};
}

BlockPoint solve_scalar_bisection(const ProblemInstance& inst, double tol) {
  const ProblemSpec& spec = inst.spec;
  if (spec.n() != 1 || spec.dim0 != 1) {
    throw OracleFailure("scalar bisection oracle needs a 1-D single block");
  }
  const OperatorBlock& blk = spec.blocks[0];

  double lip_d = 0.0;
  if (blk.D) {
    for (double t = -50.0; t <= 50.0; t += 0.5) {
      lip_d = std::max(lip_d, std::abs(blk.D->jacobian(Vec::Constant(1, t))(0, 0)));
    }
    lip_d *= 1.5;
  }
  const double step = 1.0 / (1.0 + blk.ell + inv_or_zero(blk.beta) + lip_d);
  // Nondecreasing in z for this step size; zeros coincide with solutions.
  auto resid = [&](double z) {
    const Vec zz = Vec::Constant(1, z);
    return z - blk.A->resolvent(step, zz - step * blk.forward_sum(zz))(0);
  };

  double lo = -1.0, hi = 1.0;
  int guard = 0;
  while (resid(lo) > 0.0) {
    lo *= 2.0;
    if (++guard > 60) throw OracleFailure("bisection bracket expansion failed");
  }
  while (resid(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 120) throw OracleFailure("bisection bracket expansion failed");
  }
  for (int it = 0; it < 200 && hi - lo > tol * 1e-3; ++it) {
    const double mid = 0.5 * (lo + hi);
    (resid(mid) < 0.0 ? lo : hi) = mid;
  }
  // Averaged fixed-point polish; snaps onto constraint boundaries.
  Vec z = Vec::Constant(1, 0.5 * (lo + hi));
  for (int it = 0; it < 100; ++it) {
    z = blk.A->resolvent(step, z - step * blk.forward_sum(z));
  }
  return BlockPoint{z, {}};
}

BlockPoint solve_direct_linear(const ProblemInstance& inst, double tol) {
  const ProblemSpec& spec = inst.spec;
  Mat h = Mat::Zero(spec.dim0, spec.dim0);
  Vec rhs = Vec::Zero(spec.dim0);
  for (const OperatorBlock& blk : spec.blocks) {
    if (blk.D) throw OracleFailure("direct linear oracle needs no D term");
    const auto ma = blk.A->linear_part(blk.dim());
    if (!ma) throw OracleFailure("direct linear oracle needs linear A");
    const auto [mb, cb] = probe_affine(*blk.B, blk.dim());
    const auto [mc, cc] = probe_affine(*blk.C, blk.dim());
    const Mat& g = blk.G.matrix();
    h += g.transpose() * (*ma + mb + mc) * g;
    rhs -= g.transpose() * (cb + cc);
  }
  const Vec z = h.partialPivLu().solve(rhs);
  if ((h * z - rhs).norm() > tol * (1.0 + rhs.norm())) {
    throw OracleFailure("linear system solve did not reach tolerance");
  }
  return BlockPoint{z, recover_duals(spec, z)};
}

BlockPoint solve_prox_gradient(const ProblemInstance& inst, double tol) {
  // FISTA with gradient restart on
  //   sum_j log(1 + exp(-y_j a_j' z)) + ridge/2 ||z||^2 + lambda ||z||_1.
  const Mat& a = inst.data;
  const Vec& y = inst.labels;
  const Eigen::Index dim = a.cols();
  const double lip = 0.25 * std::pow(operator_norm_bound(a), 2) + inst.ridge;
  const double t = 1.0 / lip;

  auto grad = [&](const Vec& z) -> Vec {
    Vec g = inst.ridge * z;
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      const double margin = -y(j) * a.row(j).dot(z);
      g -= y(j) / (1.0 + std::exp(-margin)) * a.row(j).transpose();
    }
    return g;
  };
  auto prox = [&](const Vec& s) -> Vec {
    const double thr = t * inst.lambda;
    return s.unaryExpr([thr](double v) {
      return v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
    });
  };

  Vec z = Vec::Zero(dim), zp = z, v = z;
  double theta = 1.0;
  for (long it = 0; it < 5000000; ++it) {
    z = prox(v - t * grad(v));
    if ((z - prox(z - t * grad(z))).norm() / t <= tol) {
      return BlockPoint{z, recover_duals(inst.spec, z)};
    }
    const double theta_next =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    Vec v_next = z + ((theta - 1.0) / theta_next) * (z - zp);
    if (grad(z).dot(z - zp) > 0.0) {  // restart
      v_next = z;
      theta = 1.0;
    } else {
      theta = theta_next;
    }
    zp = z;
    v = std::move(v_next);
  }
  throw OracleFailure("proximal-gradient oracle did not converge");
}

}  // namespace

CertifyResult certify_solution(const ProblemInstance& inst,
                               const BlockPoint& p, double tol) {
  const ProblemSpec& spec = inst.spec;
  const Vec wn = derived_wn(p, spec.stored_maps(), spec.dim0);
  CertifyResult res;
  res.ok = true;
  for (Eigen::Index i = 0; i < spec.n(); ++i) {
    const Vec& wi = (i + 1 < spec.n()) ? p.w[i] : wn;
    const double r = graph_membership_residual(
        spec.blocks[i], spec.blocks[i].G.apply(p.z), wi);
    res.residuals.push_back(r);
    res.ok = res.ok && r <= tol;
  }
  return res;
}

BlockPoint zero_point(const ProblemSpec& spec) {
  BlockPoint p;
  p.z = Vec::Zero(spec.dim0);
  for (Eigen::Index i = 0; i + 1 < spec.n(); ++i) {
    p.w.push_back(Vec::Zero(spec.blocks[i].dim()));
  }
  return p;
}

std::vector<ProblemInstance> build_scalar_suite() {
  std::vector<ProblemInstance> suite;

  {  // 0 in d|z| + (z - 2); solution z = 1 with 1 in d|1|.
    ProblemInstance inst;
    inst.name = "scalar_l1_quadratic";
    inst.spec.dim0 = 1;
    inst.spec.blocks.push_back(make_block(
        make_l1_subdiff(1.0), nullptr,
        make_quadratic_gradient(Mat::Constant(1, 1, 1.0),
                                Vec::Constant(1, -2.0)),
        nullptr, LinearMap::identity(1)));
    inst.known_solution = BlockPoint{Vec::Constant(1, 1.0), {}};
    inst.provenance = ProblemInstance::Provenance::closed_form;
    inst.oracle = ProblemInstance::OracleKind::scalar_bisection;
    suite.push_back(std::move(inst));
  }

  {  // 0 in N_[0,1](z) + sigma(z) - 0.4; solution z = 0 (sigma(0) = 0.5).
    ProblemInstance inst;
    inst.name = "scalar_box_sigmoid";
    inst.spec.dim0 = 1;
    inst.spec.blocks.push_back(make_block(
        make_box_normal_cone(Vec::Zero(1), Vec::Ones(1)), nullptr,
        make_quadratic_gradient(Mat::Zero(1, 1), Vec::Constant(1, -0.4)),
        std::make_shared<SigmoidOperator>(), LinearMap::identity(1)));
    inst.known_solution = BlockPoint{Vec::Zero(1), {}};
    inst.provenance = ProblemInstance::Provenance::closed_form;
    inst.oracle = ProblemInstance::OracleKind::scalar_bisection;
    suite.push_back(std::move(inst));
  }

  {  // Two-block skew-coupled saddle in R^2 with B != 0.
    ProblemInstance inst;
    inst.name = "skew_saddle";
    inst.spec.dim0 = 2;
    Mat skew(2, 2);
    skew << 0.0, 1.0, -1.0, 0.0;
    Vec q1(2), q2(2);
    q1 << 1.0, -1.0;
    q2 << -0.5, 0.25;
    inst.spec.blocks.push_back(
        make_block(zero_mono(), make_linear_monotone(skew),
                   make_quadratic_gradient(Mat::Identity(2, 2), q1), nullptr,
                   LinearMap::identity(2)));
    inst.spec.blocks.push_back(
        make_block(zero_mono(), nullptr,
                   make_quadratic_gradient(2.0 * Mat::Identity(2, 2), q2),
                   nullptr, LinearMap::identity(2)));
    inst.provenance = ProblemInstance::Provenance::oracle_solved;
    inst.oracle = ProblemInstance::OracleKind::direct_linear;
    suite.push_back(std::move(inst));
  }

  return suite;
}

ProblemInstance build_l1_logistic(Mat data, Vec labels, double lambda,
                                  double ridge, int n_blocks, long seed) {
  if (data.rows() > 500 || data.cols() > 50) {
    throw ConfigError("l1-logistic instances are desk scale only");
  }
  if (data.rows() != labels.size() || data.rows() == 0) {
    throw ConfigError("data rows and labels must match and be nonempty");
  }
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (ridge < 0.0) throw ConfigError("ridge must be nonnegative");
  if (n_blocks < 1 || n_blocks > data.rows()) {
    throw ConfigError("n_blocks must be between 1 and the sample count");
  }
  for (Eigen::Index j = 0; j < labels.size(); ++j) {
    if (labels(j) != 1.0 && labels(j) != -1.0) {
      throw ConfigError("labels must be +1 or -1");
    }
  }

  const Eigen::Index dim = data.cols();
  ProblemInstance inst;
  inst.name = "l1_logistic";
  inst.spec.dim0 = dim;
  inst.data = data;
  inst.labels = labels;
  inst.lambda = lambda;
  inst.ridge = ridge;
  inst.seed = seed;
  inst.provenance = ProblemInstance::Provenance::oracle_solved;
  inst.oracle = ProblemInstance::OracleKind::prox_gradient;

  const Eigen::Index rows = data.rows();
  const Eigen::Index base = rows / n_blocks, extra = rows % n_blocks;
  Eigen::Index start = 0;
  for (int b = 0; b < n_blocks; ++b) {
    const Eigen::Index count = base + (b < extra ? 1 : 0);
    const Mat chunk = data.middleRows(start, count);
    const Vec chunk_y = labels.segment(start, count);
    start += count;
    const bool last = (b + 1 == n_blocks);
    std::shared_ptr<const Cocoercive> c;
    if (last && ridge > 0.0) {
      c = make_quadratic_gradient(ridge * Mat::Identity(dim, dim),
                                  Vec::Zero(dim));
    }
    inst.spec.blocks.push_back(make_block(
        last ? make_l1_subdiff(lambda) : zero_mono(), nullptr, c,
        make_logistic_gradient(chunk, chunk_y), LinearMap::identity(dim)));
  }
  return inst;
}

ProblemInstance random_l1_logistic(int samples, int dim, int n_blocks,
                                   double lambda, double ridge, long seed) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat data(samples, dim);
  for (Eigen::Index j = 0; j < data.rows(); ++j) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      data(j, c) = gauss(rng) / std::sqrt(static_cast<double>(dim));
    }
  }
  Vec planted = Vec::Zero(dim);
  for (Eigen::Index c = 0; c < std::max<Eigen::Index>(1, dim / 2); ++c) {
    planted(c) = gauss(rng);
  }
  Vec labels(samples);
  for (Eigen::Index j = 0; j < labels.size(); ++j) {
    const double score = data.row(j).dot(planted) + 0.1 * gauss(rng);
    labels(j) = score >= 0.0 ? 1.0 : -1.0;
  }
  ProblemInstance inst =
      build_l1_logistic(std::move(data), std::move(labels), lambda, ridge,
                        n_blocks, seed);
  inst.name = "l1_logistic_seed" + std::to_string(seed);
  return inst;
}

BlockPoint oracle_solve(const ProblemInstance& inst, double tol) {
  switch (inst.oracle) {
    case ProblemInstance::OracleKind::scalar_bisection:
      return solve_scalar_bisection(inst, tol);
    case ProblemInstance::OracleKind::direct_linear:
      return solve_direct_linear(inst, tol);
    case ProblemInstance::OracleKind::prox_gradient:
      return solve_prox_gradient(inst, tol);
    case ProblemInstance::OracleKind::none:
      break;
  }
  throw OracleFailure("instance '" + inst.name + "' has no oracle");
}

BlockPoint reference_solve(const ProblemInstance& inst, double tol) {
  BlockPoint p = inst.known_solution ? *inst.known_solution
                                     : oracle_solve(inst, tol);
  const CertifyResult cert = certify_solution(inst, p, 1e-8);
  if (!cert.ok) {
    throw OracleFailure("reference solution for '" + inst.name +
                        "' failed certification");
  }
  return p;
}

}  // namespace projsplit
