#include <doctest.h>

#include <cmath>

#include "projsplit/errors.hpp"
#include "projsplit/resolvents.hpp"

using namespace projsplit;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }

Linearization zero_lin(Eigen::Index dim) {
  return Linearization{Vec::Zero(dim), Vec::Zero(dim), Mat::Zero(dim, dim)};
}
}  // namespace

TEST_CASE("plain resolvents") {
  CHECK(resolve_plain(*make_l1_subdiff(1.0), 1.0, v1(3.0))(0) ==
        doctest::Approx(2.0));
  CHECK(resolve_plain(ZeroMaxMonotone(), 0.3, v1(4.5))(0) ==
        doctest::Approx(4.5));
  CHECK(resolve_plain(*make_box_normal_cone(Vec::Zero(1), Vec::Ones(1)), 1.0,
                      v1(-2.0))(0) == doctest::Approx(0.0));
}

TEST_CASE("linearized resolvent worked values") {
  SigmoidOperator sig;
  const auto r = resolve_linearized(ZeroMaxMonotone(), 1.0,
                                    linearize(sig, Vec::Zero(1)), v1(1.0));
  CHECK(r.x(0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(r.report.method != InnerMethod::prox_gradient);

  const auto r2 =
      resolve_linearized(*make_l1_subdiff(1.0), 1.0, zero_lin(1), v1(3.0));
  CHECK(r2.x(0) == doctest::Approx(2.0));

  const auto r3 = resolve_linearized(
      ZeroMaxMonotone(), 1.0,
      Linearization{Vec::Zero(1), Vec::Zero(1), Mat::Identity(1, 1)}, v1(2.0));
  CHECK(r3.x(0) == doctest::Approx(1.0));
}

TEST_CASE("iterative inner solver meets its residual contract") {
  SigmoidOperator sig;
  const Linearization lin = linearize(sig, v1(0.3));
  const auto a = make_l1_subdiff(0.8);
  const double rho = 1.7;
  const Vec s = v1(2.4);
  const auto r = resolve_linearized(*a, rho, lin, s, 1e-11, 10000);
  CHECK(r.report.method == InnerMethod::prox_gradient);
  CHECK(r.report.final_residual <= 1e-11);

  // re-substitution: x must solve x = J_{rho A}(s - rho lin(x))
  const Vec back = a->resolvent(rho, s - rho * lin.eval(r.x));
  CHECK((r.x - back).norm() <= 1e-10);

  CHECK_THROWS_AS(resolve_linearized(*a, rho, lin, s, 1e-14, 2),
                  InnerSolveFailure);
}

TEST_CASE("graph membership test") {
  const auto blk_l1 = make_block(make_l1_subdiff(1.0), nullptr, nullptr,
                                 nullptr, LinearMap::identity(1));
  CHECK(graph_membership(blk_l1, v1(0.0), v1(0.5), 0.0));
  CHECK_FALSE(graph_membership(blk_l1, v1(0.0), v1(2.0), 1e-9));

  const auto blk_sig = make_block(nullptr, nullptr, nullptr,
                                  std::make_shared<SigmoidOperator>(),
                                  LinearMap::identity(1));
  CHECK(graph_membership(blk_sig, v1(0.0), v1(0.5), 0.0));
}
