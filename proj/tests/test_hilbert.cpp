#include <doctest.h>

#include <random>

#include "projsplit/errors.hpp"
#include "projsplit/hilbert.hpp"

using namespace projsplit;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }
}  // namespace

TEST_CASE("weighted inner product") {
  CHECK(gamma_inner({v1(1.0), {}}, {v1(3.0), {}}, 2.0) == doctest::Approx(6.0));
  const BlockPoint p{v1(1.0), {v1(2.0)}};
  CHECK(gamma_inner(p, p, 1.0) == doctest::Approx(5.0));
  CHECK(gamma_inner({v1(2.0), {v1(0.0)}}, {v1(2.0), {v1(1.0)}}, 0.5) ==
        doctest::Approx(2.0));

  CHECK(gamma_inner(p, p, 1.0) > 0.0);
  const BlockPoint zero{Vec::Zero(1), {Vec::Zero(1)}};
  CHECK(gamma_inner(zero, zero, 1.0) == 0.0);
  CHECK_THROWS_AS(gamma_inner(p, {Vec::Zero(2), {v1(0.0)}}, 1.0),
                  DimensionError);
}

TEST_CASE("derived trailing dual block") {
  CHECK(derived_wn({v1(0.0), {}}, {}, 1) == Vec::Zero(1));
  const LinearMap id = LinearMap::identity(1);
  CHECK(derived_wn({v1(0.0), {v1(3.0)}}, {id}, 1)(0) == doctest::Approx(-3.0));
  CHECK(derived_wn({v1(0.0), {v1(1.0), v1(2.0)}}, {id, id}, 1)(0) ==
        doctest::Approx(-3.0));

  // linearity in the stored duals
  const LinearMap g(Mat::Constant(1, 1, 2.0));
  const Vec a = derived_wn({v1(0.0), {v1(1.0)}}, {g}, 1);
  const Vec b = derived_wn({v1(0.0), {v1(4.0)}}, {g}, 1);
  CHECK((derived_wn({v1(0.0), {v1(5.0)}}, {g}, 1) - a - b).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("graph projection worked values") {
  const LinearMap g2(Mat::Constant(1, 1, 2.0));
  GraphProjection p = graph_project(v1(1.0), v1(2.0), g2);
  CHECK(p.z_on(0) == doctest::Approx(1.0));
  CHECK(p.w_on(0) == doctest::Approx(2.0));
  CHECK(p.z_perp.norm() == doctest::Approx(0.0));
  CHECK(p.w_perp.norm() == doctest::Approx(0.0));

  p = graph_project(v1(1.0), v1(3.0), g2);
  CHECK(p.z_on(0) == doctest::Approx(1.4));
  CHECK(p.w_on(0) == doctest::Approx(2.8));
  CHECK(p.z_perp(0) == doctest::Approx(-0.4));
  CHECK(p.w_perp(0) == doctest::Approx(0.2));

  p = graph_project(v1(1.0), v1(3.0), LinearMap::identity(1));
  CHECK(p.z_on(0) == doctest::Approx(2.0));
  CHECK(p.w_on(0) == doctest::Approx(2.0));
  CHECK(p.z_perp(0) == doctest::Approx(-1.0));
  CHECK(p.w_perp(0) == doctest::Approx(1.0));
}

TEST_CASE("linear map adjoint and norm bound") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m(3, 2);
  for (Eigen::Index r = 0; r < 3; ++r) {
    for (Eigen::Index c = 0; c < 2; ++c) m(r, c) = gauss(rng);
  }
  const LinearMap g(m);
  for (int t = 0; t < 20; ++t) {
    Vec x(2), y(3);
    for (int i = 0; i < 2; ++i) x(i) = gauss(rng);
    for (int i = 0; i < 3; ++i) y(i) = gauss(rng);
    CHECK(g.apply(x).dot(y) == doctest::Approx(x.dot(g.apply_adjoint(y))));
    CHECK(g.apply(x).norm() <= g.norm_bound() * x.norm() + 1e-12);
  }
  CHECK(LinearMap::identity(4).is_identity());
  CHECK_FALSE(g.is_identity());
}
