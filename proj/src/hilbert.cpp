#include "projsplit/hilbert.hpp"

#include <cmath>
#include <random>
#include <string>

#include "projsplit/errors.hpp"

namespace projsplit {

void check_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    throw InternalInconsistency(std::string(what) + " contains NaN/Inf");
  }
}

double operator_norm_bound(const Mat& m) {
  if (m.size() == 0) return 0.0;
  const Mat gram = m.transpose() * m;
  const Eigen::Index n = gram.rows();
  if (gram.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  v.normalize();

  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Vec gv = gram * v;
    const double next = v.dot(gv);
    const double nrm = gv.norm();
    if (nrm == 0.0) return 0.0;
    v = gv / nrm;
    if (it > 0 && std::abs(next - lambda) <= 1e-8 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0)) * (1.0 + 1e-6);
}

LinearMap::LinearMap(Mat m) : m_(std::move(m)) {
  identity_ = m_.rows() == m_.cols() && m_.isIdentity(0.0);
  norm_bound_ = identity_ ? 1.0 : operator_norm_bound(m_);
}

LinearMap LinearMap::identity(Eigen::Index dim) {
  return LinearMap(Mat::Identity(dim, dim));
}

Vec LinearMap::apply(const Vec& x) const {
  if (x.size() != m_.cols()) throw DimensionError("LinearMap::apply: bad dim");
  if (identity_) return x;
  return m_ * x;
}

Vec LinearMap::apply_adjoint(const Vec& y) const {
  if (y.size() != m_.rows()) {
    throw DimensionError("LinearMap::apply_adjoint: bad dim");
  }
  if (identity_) return y;
  return m_.transpose() * y;
}

double gamma_inner(const BlockPoint& p, const BlockPoint& q, double gamma) {
  if (gamma <= 0.0) throw ConfigError("gamma must be positive");
  if (p.z.size() != q.z.size() || p.w.size() != q.w.size()) {
    throw DimensionError("gamma_inner: incompatible points");
  }
  double acc = gamma * p.z.dot(q.z);
  for (std::size_t i = 0; i < p.w.size(); ++i) {
    if (p.w[i].size() != q.w[i].size()) {
      throw DimensionError("gamma_inner: incompatible w block");
    }
    acc += p.w[i].dot(q.w[i]);
  }
  return acc;
}

double gamma_norm(const BlockPoint& p, double gamma) {
  return std::sqrt(gamma_inner(p, p, gamma));
}

Vec derived_wn(const BlockPoint& p, const std::vector<LinearMap>& maps,
               Eigen::Index dim0) {
  if (maps.size() != p.w.size()) {
    throw DimensionError("derived_wn: need one map per stored w block");
  }
  Vec wn = Vec::Zero(dim0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    wn -= maps[i].apply_adjoint(p.w[i]);
  }
  return wn;
}

GraphProjection graph_project(const Vec& z, const Vec& w, const LinearMap& g) {
  const Mat& m = g.matrix();
  if (z.size() != m.cols() || w.size() != m.rows()) {
    throw DimensionError("graph_project: incompatible dims");
  }
  // Both systems are I + M^T M style, symmetric positive definite.
  const Mat lhs_dom = Mat::Identity(m.cols(), m.cols()) + m.transpose() * m;
  const Mat lhs_cod = Mat::Identity(m.rows(), m.rows()) + m * m.transpose();

  GraphProjection out;
  const Vec zp = lhs_dom.ldlt().solve(z + m.transpose() * w);
  out.z_on = zp;
  out.w_on = m * zp;
  const Vec r = lhs_cod.ldlt().solve(m * z - w);
  out.z_perp = m.transpose() * r;
  out.w_perp = -r;
  return out;
}

}  // namespace projsplit
