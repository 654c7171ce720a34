#include "projsplit/operators.hpp"

#include <cmath>

#include "projsplit/errors.hpp"

namespace projsplit {

namespace {

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double sigmoid_prime(double t) {
  const double s = sigmoid(t);
  return s * (1.0 - s);
}

// max |sigma''| over the reals, attained at sigma = (3 +- sqrt(3))/6.
const double kMaxSigmoidSecond = 1.0 / (6.0 * std::sqrt(3.0));

void require_monotone_matrix(const Mat& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw ConfigError(std::string(who) + ": matrix must be square");
  }
  const Mat sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw ConfigError(std::string(who) +
                      ": symmetric part is not positive semidefinite");
  }
}

}  // namespace

Linearization linearize(const SmoothOperator& d, const Vec& u) {
  Linearization lin;
  lin.u = u;
  lin.value_at_u = d.eval(u);
  lin.jacobian_at_u = d.jacobian(u);
  return lin;
}

bool linearization_error_within_bound(const SmoothOperator& d, const Vec& z,
                                      const Vec& u) {
  const Linearization lin = linearize(d, u);
  const double err = (d.eval(z) - lin.eval(z)).norm();
  const double bound = 0.5 * d.hessian_lipschitz() * (z - u).squaredNorm();
  return err <= bound + 1e-12;
}

L1Subdifferential::L1Subdifferential(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0)) throw ConfigError("l1 weight lambda must be positive");
}

Vec L1Subdifferential::resolvent(double rho, const Vec& s) const {
  const double t = rho * lambda_;
  Vec out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double a = std::abs(s[i]) - t;
    out[i] = a > 0.0 ? (s[i] > 0.0 ? a : -a) : 0.0;
  }
  return out;
}

BoxNormalCone::BoxNormalCone(Vec lo, Vec hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) {
    throw ConfigError("box bounds must have equal length");
  }
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    if (lo_[i] > hi_[i]) throw ConfigError("box has lo > hi");
  }
}

Vec BoxNormalCone::resolvent(double, const Vec& s) const {
  if (s.size() != lo_.size()) throw DimensionError("box resolvent: bad dim");
  return s.cwiseMax(lo_).cwiseMin(hi_);
}

LinearMaxMonotone::LinearMaxMonotone(Mat m) : m_(std::move(m)) {
  require_monotone_matrix(m_, "LinearMaxMonotone");
}

Vec LinearMaxMonotone::resolvent(double rho, const Vec& s) const {
  const Mat lhs = Mat::Identity(m_.rows(), m_.cols()) + rho * m_;
  return lhs.partialPivLu().solve(s);
}

LinearMonotone::LinearMonotone(Mat m) : m_(std::move(m)) {
  require_monotone_matrix(m_, "make_linear_monotone");
  ell_ = operator_norm_bound(m_);
}

Vec LinearMonotone::eval(const Vec& x) const {
  if (x.size() != m_.cols()) throw DimensionError("LinearMonotone: bad dim");
  return m_ * x;
}

AffineMonotone::AffineMonotone(Mat j, Vec c)
    : j_(std::move(j)), c_(std::move(c)) {
  require_monotone_matrix(j_, "AffineMonotone");
  ell_ = operator_norm_bound(j_);
}

QuadraticGradient::QuadraticGradient(Mat q_mat, Vec q_vec)
    : q_mat_(std::move(q_mat)), q_vec_(std::move(q_vec)) {
  if (q_mat_.rows() != q_mat_.cols() || q_mat_.rows() != q_vec_.size()) {
    throw ConfigError("make_quadratic_gradient: inconsistent dims");
  }
  if (!q_mat_.isApprox(q_mat_.transpose(), 1e-12)) {
    throw ConfigError("make_quadratic_gradient: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(q_mat_);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin < -1e-10) {
    throw ConfigError("make_quadratic_gradient: Q must be PSD");
  }
  beta_ = lmax <= 0.0 ? kInf : 1.0 / lmax;
}

Vec QuadraticGradient::eval(const Vec& x) const {
  if (x.size() != q_vec_.size()) {
    throw DimensionError("QuadraticGradient: bad dim");
  }
  return q_mat_ * x + q_vec_;
}

Vec SigmoidOperator::eval(const Vec& x) const {
  return x.unaryExpr([](double t) { return sigmoid(t); });
}

Mat SigmoidOperator::jacobian(const Vec& x) const {
  const Vec d = x.unaryExpr([](double t) { return sigmoid_prime(t); });
  return Mat(d.asDiagonal());
}

double SigmoidOperator::hessian_lipschitz() const {
  return kMaxSigmoidSecond;
}

LogisticGradient::LogisticGradient(Mat data, Vec labels)
    : data_(std::move(data)), labels_(std::move(labels)) {
  if (data_.rows() != labels_.size()) {
    throw ConfigError("make_logistic_gradient: rows must match labels");
  }
  for (Eigen::Index j = 0; j < labels_.size(); ++j) {
    if (labels_[j] != 1.0 && labels_[j] != -1.0) {
      throw ConfigError("make_logistic_gradient: labels must be +-1");
    }
  }
  double cubes = 0.0;
  for (Eigen::Index j = 0; j < data_.rows(); ++j) {
    cubes += std::pow(data_.row(j).norm(), 3);
  }
  m_ = kMaxSigmoidSecond * cubes;
}

Vec LogisticGradient::eval(const Vec& z) const {
  if (z.size() != data_.cols()) throw DimensionError("logistic: bad dim");
  Vec g = Vec::Zero(z.size());
  for (Eigen::Index j = 0; j < data_.rows(); ++j) {
    const double t = -labels_[j] * data_.row(j).dot(z);
    g -= labels_[j] * sigmoid(t) * data_.row(j).transpose();
  }
  return g;
}

Mat LogisticGradient::jacobian(const Vec& z) const {
  if (z.size() != data_.cols()) throw DimensionError("logistic: bad dim");
  Mat h = Mat::Zero(z.size(), z.size());
  for (Eigen::Index j = 0; j < data_.rows(); ++j) {
    const double t = -labels_[j] * data_.row(j).dot(z);
    h += sigmoid_prime(t) * data_.row(j).transpose() * data_.row(j);
  }
  return h;
}

std::shared_ptr<const MaxMonotone> make_l1_subdiff(double lambda) {
  return std::make_shared<L1Subdifferential>(lambda);
}

std::shared_ptr<const MaxMonotone> make_box_normal_cone(Vec lo, Vec hi) {
  return std::make_shared<BoxNormalCone>(std::move(lo), std::move(hi));
}

std::shared_ptr<const LipschitzMonotone> make_linear_monotone(Mat m) {
  return std::make_shared<LinearMonotone>(std::move(m));
}

std::shared_ptr<const Cocoercive> make_quadratic_gradient(Mat q_mat,
                                                          Vec q_vec) {
  return std::make_shared<QuadraticGradient>(std::move(q_mat),
                                             std::move(q_vec));
}

std::shared_ptr<const SmoothOperator> make_logistic_gradient(Mat data,
                                                             Vec labels) {
  return std::make_shared<LogisticGradient>(std::move(data),
                                            std::move(labels));
}

Vec OperatorBlock::forward_sum(const Vec& x) const {
  Vec out = B->eval(x) + C->eval(x);
  if (D) out += D->eval(x);
  return out;
}

OperatorBlock make_block(std::shared_ptr<const MaxMonotone> a,
                         std::shared_ptr<const LipschitzMonotone> b,
                         std::shared_ptr<const Cocoercive> c,
                         std::shared_ptr<const SmoothOperator> d,
                         LinearMap g) {
  OperatorBlock blk{std::move(a), std::move(b), std::move(c), std::move(d),
                    std::move(g)};
  if (!blk.A) blk.A = std::make_shared<ZeroMaxMonotone>();
  if (!blk.B) blk.B = std::make_shared<ZeroLipschitz>();
  if (!blk.C) blk.C = std::make_shared<ZeroCocoercive>();
  if (blk.D && blk.D->hessian_lipschitz() == 0.0) {
    // m = 0 means D is affine; fold it into B so the block stays outside
    // the smooth index set.
    const Eigen::Index dim = blk.dim();
    const Vec zero = Vec::Zero(dim);
    auto affine = std::make_shared<AffineMonotone>(blk.D->jacobian(zero),
                                                   blk.D->eval(zero));
    blk.B = std::make_shared<SumLipschitz>(blk.B, affine);
    blk.D = nullptr;
  }
  blk.ell = blk.B->lipschitz();
  blk.beta = blk.C->beta();
  blk.m = blk.D ? blk.D->hessian_lipschitz() : 0.0;
  blk.in_smooth_set = blk.D != nullptr;
  return blk;
}

}  // namespace projsplit
