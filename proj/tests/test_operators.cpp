#include <doctest.h>

#include <cmath>
#include <random>

#include "projsplit/errors.hpp"
#include "projsplit/operators.hpp"

using namespace projsplit;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }
}  // namespace

TEST_CASE("soft-thresholding resolvent") {
  const auto a = make_l1_subdiff(1.0);
  CHECK(a->resolvent(1.0, v1(3.0))(0) == doctest::Approx(2.0));
  CHECK(a->resolvent(1.0, v1(0.5))(0) == doctest::Approx(0.0));
  CHECK(make_l1_subdiff(1.0)->resolvent(2.0, v1(-5.0))(0) ==
        doctest::Approx(-3.0));
  CHECK_THROWS_AS(make_l1_subdiff(0.0), ConfigError);

  // resolvent identity: s - J(s) lies in rho * lambda * sign(J(s))
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-4.0, 4.0);
  for (int t = 0; t < 50; ++t) {
    const double s = unif(rng), rho = 0.1 + std::abs(unif(rng));
    const double x = a->resolvent(rho, v1(s))(0);
    const double sub = (s - x) / rho;
    if (x > 0.0) CHECK(sub == doctest::Approx(1.0));
    else if (x < 0.0) CHECK(sub == doctest::Approx(-1.0));
    else CHECK(std::abs(sub) <= 1.0 + 1e-12);
  }
}

TEST_CASE("box normal cone resolvent clamps") {
  const auto a = make_box_normal_cone(Vec::Zero(1), Vec::Ones(1));
  CHECK(a->resolvent(3.0, v1(7.0))(0) == doctest::Approx(1.0));
  CHECK(a->resolvent(0.5, v1(0.3))(0) == doctest::Approx(0.3));
  CHECK(a->resolvent(1.0, v1(-2.0))(0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(make_box_normal_cone(Vec::Ones(1), Vec::Zero(1)),
                  ConfigError);
}

TEST_CASE("resolvents are firmly nonexpansive") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss(0.0, 2.0);
  Mat skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;
  const std::vector<std::shared_ptr<const MaxMonotone>> ops = {
      make_l1_subdiff(0.7),
      make_box_normal_cone(Vec::Constant(2, -1.0), Vec::Ones(2)),
      std::make_shared<LinearMaxMonotone>(skew)};
  for (const auto& op : ops) {
    const Eigen::Index dim = 2;
    for (int t = 0; t < 30; ++t) {
      Vec s(dim), sp(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        s(i) = gauss(rng);
        sp(i) = gauss(rng);
      }
      Vec a = op->resolvent(1.3, s);
      Vec b = op->resolvent(1.3, sp);
      CHECK((a - b).squaredNorm() <= (a - b).dot(s - sp) + 1e-10);
    }
  }
}

TEST_CASE("linear monotone operator") {
  Mat skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;
  const auto b = make_linear_monotone(skew);
  Vec x(2);
  x << 1.0, 0.0;
  const Vec out = b->eval(x);
  CHECK(out(0) == doctest::Approx(0.0));
  CHECK(out(1) == doctest::Approx(-1.0));
  CHECK(b->lipschitz() == doctest::Approx(1.0).epsilon(1e-5));

  CHECK(make_linear_monotone(Mat::Zero(2, 2))->lipschitz() == 0.0);
  Mat bad(1, 1);
  bad << -1.0;
  CHECK_THROWS_AS(make_linear_monotone(bad), ConfigError);
}

TEST_CASE("quadratic gradient cocoercivity") {
  CHECK(make_quadratic_gradient(Mat::Identity(1, 1), Vec::Zero(1))->beta() ==
        doctest::Approx(1.0));
  const auto constant = make_quadratic_gradient(Mat::Zero(1, 1), v1(0.7));
  CHECK(std::isinf(constant->beta()));
  CHECK(constant->eval(v1(123.0))(0) == doctest::Approx(0.7));
  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = 0.5;
  const auto c = make_quadratic_gradient(diag, Vec::Zero(2));
  CHECK(c->beta() == doctest::Approx(0.5));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Vec x(2), y(2);
    for (int i = 0; i < 2; ++i) {
      x(i) = gauss(rng);
      y(i) = gauss(rng);
    }
    const Vec dc = c->eval(x) - c->eval(y);
    CHECK((x - y).dot(dc) >= c->beta() * dc.squaredNorm() - 1e-10);
  }
  Mat asym(2, 2);
  asym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(make_quadratic_gradient(asym, Vec::Zero(2)), ConfigError);
  Mat indef = -Mat::Identity(2, 2);
  CHECK_THROWS_AS(make_quadratic_gradient(indef, Vec::Zero(2)), ConfigError);
}

TEST_CASE("logistic gradient operator") {
  const auto d = make_logistic_gradient(Mat::Ones(1, 1), Vec::Ones(1));
  CHECK(d->eval(Vec::Zero(1))(0) == doctest::Approx(-0.5));
  CHECK(d->jacobian(Vec::Zero(1))(0, 0) == doctest::Approx(0.25));
  CHECK(d->hessian_lipschitz() ==
        doctest::Approx(1.0 / (6.0 * std::sqrt(3.0))));

  const auto zero = make_logistic_gradient(Mat::Zero(2, 3), Vec::Ones(2));
  CHECK(zero->eval(Vec::Ones(3)).norm() == doctest::Approx(0.0));
  CHECK(zero->hessian_lipschitz() == 0.0);

  CHECK_THROWS_AS(make_logistic_gradient(Mat::Ones(1, 1), v1(0.5)),
                  ConfigError);
}

TEST_CASE("linearization of smooth operators") {
  SigmoidOperator sig;
  const Linearization lin = linearize(sig, Vec::Zero(1));
  CHECK(lin.value_at_u(0) == doctest::Approx(0.5));
  CHECK(lin.jacobian_at_u(0, 0) == doctest::Approx(0.25));
  CHECK(lin.eval(v1(0.4))(0) == doctest::Approx(0.6));

  // an affine smooth operator is its own linearization at any base point
  const auto affine = make_logistic_gradient(Mat::Zero(1, 1), Vec::Ones(1));
  const Linearization alin = linearize(*affine, v1(2.0));
  CHECK(alin.eval(v1(-5.0)).isApprox(affine->eval(v1(-5.0)), 1e-14));

  // finite-difference consistency of the Jacobian
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat data(6, 3);
  Vec labels(6);
  for (Eigen::Index r = 0; r < 6; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) data(r, c) = gauss(rng);
    labels(r) = r % 2 == 0 ? 1.0 : -1.0;
  }
  const auto logi = make_logistic_gradient(data, labels);
  for (double h : {1e-4, 1e-5}) {
    Vec x(3), delta(3);
    for (int i = 0; i < 3; ++i) {
      x(i) = gauss(rng);
      delta(i) = gauss(rng);
    }
    delta.normalize();
    const Vec fd = (logi->eval(x + h * delta) - logi->eval(x)) / h;
    CHECK((fd - logi->jacobian(x) * delta).norm() <=
          logi->hessian_lipschitz() * h * 10.0 + 1e-9);
  }

  // remainder bound with unit displacements
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    Vec z(3), u(3);
    for (int i = 0; i < 3; ++i) {
      u(i) = 2.0 * unif(rng);
      z(i) = u(i) + unif(rng) / std::sqrt(3.0);
    }
    CHECK(linearization_error_within_bound(*logi, z, u));
  }
}

TEST_CASE("block assembly and the smooth index set") {
  const auto smooth = make_block(nullptr, nullptr, nullptr,
                                 std::make_shared<SigmoidOperator>(),
                                 LinearMap::identity(1));
  CHECK(smooth.in_smooth_set);
  CHECK(smooth.m == doctest::Approx(1.0 / (6.0 * std::sqrt(3.0))));
  CHECK(smooth.ell == 0.0);
  CHECK(std::isinf(smooth.beta));

  // affine D (m = 0) folds into B and leaves the smooth set
  const auto folded = make_block(
      nullptr, nullptr, nullptr,
      make_logistic_gradient(Mat::Zero(1, 1), Vec::Ones(1)),
      LinearMap::identity(1));
  CHECK_FALSE(folded.in_smooth_set);
  CHECK(folded.D == nullptr);
  CHECK(folded.m == 0.0);

  const auto plain = make_block(make_l1_subdiff(1.0), nullptr,
                                make_quadratic_gradient(Mat::Identity(1, 1),
                                                        Vec::Zero(1)),
                                nullptr, LinearMap::identity(1));
  CHECK_FALSE(plain.in_smooth_set);
  CHECK(plain.beta == doctest::Approx(1.0));
  CHECK(plain.forward_sum(v1(2.0))(0) == doctest::Approx(2.0));
}
