#pragma once

#include <limits>
#include <memory>
#include <optional>

#include "projsplit/hilbert.hpp"

namespace projsplit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// 1/beta with the convention 1/inf = 0.
inline double inv_or_zero(double beta) {
  return std::isinf(beta) ? 0.0 : 1.0 / beta;
}

/// Maximal monotone operator A, accessed only through its resolvent
/// J_{rho A} = (rho A + I)^{-1}.
class MaxMonotone {
 public:
  virtual ~MaxMonotone() = default;

  /// x with (s - x)/rho in A(x). Exact for the whole catalog.
  virtual Vec resolvent(double rho, const Vec& s) const = 0;

  /// If A(x) = M x, the matrix M (a zero matrix for A = 0). Enables a
  /// direct linear solve inside linearized resolvents.
  virtual std::optional<Mat> linear_part(Eigen::Index dim) const {
    (void)dim;
    return std::nullopt;
  }

  bool has_plain_resolvent() const { return true; }
  /// Usable inside a proximal-Newton block. True for every catalog member.
  virtual bool has_linearized_resolvent() const { return true; }
};

/// Monotone, ell-Lipschitz point-to-point operator B.
class LipschitzMonotone {
 public:
  virtual ~LipschitzMonotone() = default;
  virtual Vec eval(const Vec& x) const = 0;
  virtual double lipschitz() const = 0;
};

/// beta-cocoercive operator C; beta = inf means C is constant.
class Cocoercive {
 public:
  virtual ~Cocoercive() = default;
  virtual Vec eval(const Vec& x) const = 0;
  virtual double beta() const = 0;
};

/// Continuously differentiable monotone operator D with an m-Lipschitz
/// derivative.
class SmoothOperator {
 public:
  virtual ~SmoothOperator() = default;
  virtual Vec eval(const Vec& x) const = 0;
  virtual Mat jacobian(const Vec& x) const = 0;
  virtual double hessian_lipschitz() const = 0;
};

/// First-order model D_(u)(x) = D(u) + D'(u)(x - u).
struct Linearization {
  Vec u;
  Vec value_at_u;
  Mat jacobian_at_u;

  Vec eval(const Vec& x) const {
    return value_at_u + jacobian_at_u * (x - u);
  }
  /// Constant term of the affine form d0 + H x.
  Vec constant() const { return value_at_u - jacobian_at_u * u; }
};

Linearization linearize(const SmoothOperator& d, const Vec& u);

/// True iff ||D(z) - D_(u)(z)|| <= (m/2) ||z - u||^2 + 1e-12.
bool linearization_error_within_bound(const SmoothOperator& d, const Vec& z,
                                      const Vec& u);

// ---- concrete catalog ------------------------------------------------------

class ZeroMaxMonotone final : public MaxMonotone {
 public:
  Vec resolvent(double, const Vec& s) const override { return s; }
  std::optional<Mat> linear_part(Eigen::Index dim) const override {
    return Mat::Zero(dim, dim);
  }
};

/// A = subdifferential of lambda ||.||_1; resolvent is soft-thresholding.
class L1Subdifferential final : public MaxMonotone {
 public:
  explicit L1Subdifferential(double lambda);
  Vec resolvent(double rho, const Vec& s) const override;
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

/// Normal cone of a box [lo, hi]; resolvent clamps componentwise.
class BoxNormalCone final : public MaxMonotone {
 public:
  BoxNormalCone(Vec lo, Vec hi);
  Vec resolvent(double rho, const Vec& s) const override;
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }

 private:
  Vec lo_, hi_;
};

/// A(x) = M x with M + M^T PSD; resolvent solves (I + rho M) x = s.
class LinearMaxMonotone final : public MaxMonotone {
 public:
  explicit LinearMaxMonotone(Mat m);
  Vec resolvent(double rho, const Vec& s) const override;
  std::optional<Mat> linear_part(Eigen::Index) const override { return m_; }

 private:
  Mat m_;
};

class ZeroLipschitz final : public LipschitzMonotone {
 public:
  Vec eval(const Vec& x) const override { return Vec::Zero(x.size()); }
  double lipschitz() const override { return 0.0; }
};

/// B(x) = M x; ell is a power-iteration bound of ||M||.
class LinearMonotone final : public LipschitzMonotone {
 public:
  explicit LinearMonotone(Mat m);
  Vec eval(const Vec& x) const override;
  double lipschitz() const override { return ell_; }
  const Mat& matrix() const { return m_; }

 private:
  Mat m_;
  double ell_;
};

/// B1 + B2 (used when an affine D with m = 0 is folded into B).
class SumLipschitz final : public LipschitzMonotone {
 public:
  SumLipschitz(std::shared_ptr<const LipschitzMonotone> a,
               std::shared_ptr<const LipschitzMonotone> b)
      : a_(std::move(a)), b_(std::move(b)) {}
  Vec eval(const Vec& x) const override { return a_->eval(x) + b_->eval(x); }
  double lipschitz() const override {
    return a_->lipschitz() + b_->lipschitz();
  }

 private:
  std::shared_ptr<const LipschitzMonotone> a_, b_;
};

/// B(x) = J x + c with J + J^T PSD.
class AffineMonotone final : public LipschitzMonotone {
 public:
  AffineMonotone(Mat j, Vec c);
  Vec eval(const Vec& x) const override { return j_ * x + c_; }
  double lipschitz() const override { return ell_; }

 private:
  Mat j_;
  Vec c_;
  double ell_;
};

class ZeroCocoercive final : public Cocoercive {
 public:
  Vec eval(const Vec& x) const override { return Vec::Zero(x.size()); }
  double beta() const override { return kInf; }
};

/// C(x) = Q x + q with Q symmetric PSD; beta = 1/lambda_max(Q).
class QuadraticGradient final : public Cocoercive {
 public:
  QuadraticGradient(Mat q_mat, Vec q_vec);
  Vec eval(const Vec& x) const override;
  double beta() const override { return beta_; }

 private:
  Mat q_mat_;
  Vec q_vec_;
  double beta_;
};

/// Componentwise logistic sigmoid, D(x)_i = 1/(1+exp(-x_i)).
class SigmoidOperator final : public SmoothOperator {
 public:
  Vec eval(const Vec& x) const override;
  Mat jacobian(const Vec& x) const override;
  double hessian_lipschitz() const override;
};

/// Gradient of z -> sum_j log(1 + exp(-y_j a_j^T z)).
class LogisticGradient final : public SmoothOperator {
 public:
  LogisticGradient(Mat data, Vec labels);
  Vec eval(const Vec& z) const override;
  Mat jacobian(const Vec& z) const override;
  double hessian_lipschitz() const override { return m_; }
  const Mat& data() const { return data_; }
  const Vec& labels() const { return labels_; }

 private:
  Mat data_;
  Vec labels_;
  double m_;
};

// ---- catalog constructors --------------------------------------------------

std::shared_ptr<const MaxMonotone> make_l1_subdiff(double lambda);
std::shared_ptr<const MaxMonotone> make_box_normal_cone(Vec lo, Vec hi);
std::shared_ptr<const LipschitzMonotone> make_linear_monotone(Mat m);
std::shared_ptr<const Cocoercive> make_quadratic_gradient(Mat q_mat,
                                                          Vec q_vec);
std::shared_ptr<const SmoothOperator> make_logistic_gradient(Mat data,
                                                             Vec labels);

// ---- block -----------------------------------------------------------------

/// One tuple (A_i, B_i, C_i, D_i, G_i) with its constants. Constructed via
/// make_block, which computes (ell, beta, m) and folds an affine D (m = 0)
/// into B.
struct OperatorBlock {
  std::shared_ptr<const MaxMonotone> A;
  std::shared_ptr<const LipschitzMonotone> B;
  std::shared_ptr<const Cocoercive> C;
  std::shared_ptr<const SmoothOperator> D;  // null unless in_smooth_set
  LinearMap G;
  double ell = 0.0;
  double beta = kInf;
  double m = 0.0;
  bool in_smooth_set = false;

  Eigen::Index dim() const { return G.rows(); }
  /// B(x) + C(x) + D(x)
  Vec forward_sum(const Vec& x) const;
};

OperatorBlock make_block(std::shared_ptr<const MaxMonotone> a,
                         std::shared_ptr<const LipschitzMonotone> b,
                         std::shared_ptr<const Cocoercive> c,
                         std::shared_ptr<const SmoothOperator> d,
                         LinearMap g);

}  // namespace projsplit
