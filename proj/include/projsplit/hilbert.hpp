#pragma once

#include <Eigen/Dense>
#include <vector>

namespace projsplit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Throws if any entry is NaN or infinite.
void check_finite(const Vec& v, const char* what);

/// Upper bound on the spectral norm: power iteration on M^T M to relative
/// tolerance 1e-8, inflated by 1+1e-6 so the result stays a valid bound.
double operator_norm_bound(const Mat& m);

/// Dense bounded linear operator with a cached operator-norm bound.
class LinearMap {
 public:
  explicit LinearMap(Mat m);
  static LinearMap identity(Eigen::Index dim);

  Vec apply(const Vec& x) const;
  Vec apply_adjoint(const Vec& y) const;

  const Mat& matrix() const { return m_; }
  double norm_bound() const { return norm_bound_; }
  bool is_identity() const { return identity_; }
  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }

 private:
  Mat m_;
  double norm_bound_;
  bool identity_;
};

/// A point (z, w_1, ..., w_{n-1}) of the product space. The trailing w_n is
/// always derived, never stored.
struct BlockPoint {
  Vec z;
  std::vector<Vec> w;
};

/// gamma <z, z~> + sum_i <w_i, w_i~>
double gamma_inner(const BlockPoint& p, const BlockPoint& q, double gamma);
double gamma_norm(const BlockPoint& p, double gamma);

/// w_n = -sum_i G_i^* w_i. `maps` holds G_1..G_{n-1}; dim0 is the dimension
/// of the base space (needed for the empty-sum case n = 1).
Vec derived_wn(const BlockPoint& p, const std::vector<LinearMap>& maps,
               Eigen::Index dim0);

struct GraphProjection {
  Vec z_on, w_on;      // P(z, w), lies on the graph of G
  Vec z_perp, w_perp;  // P_perp(z, w)
};

/// Orthogonal projection onto the graph of G and its complement.
GraphProjection graph_project(const Vec& z, const Vec& w, const LinearMap& g);

}  // namespace projsplit
