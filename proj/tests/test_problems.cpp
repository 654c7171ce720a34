#include <doctest.h>

#include <cmath>

#include "projsplit/errors.hpp"
#include "projsplit/problems.hpp"

using namespace projsplit;

TEST_CASE("scalar suite ships certified solutions") {
  const auto suite = build_scalar_suite();
  REQUIRE(suite.size() == 3);
  for (const ProblemInstance& inst : suite) {
    const BlockPoint ref = reference_solve(inst);
    CHECK(certify_solution(inst, ref, 1e-8).ok);
  }
  CHECK(std::abs(reference_solve(suite[0]).z(0) - 1.0) <= 1e-12);
  CHECK(std::abs(reference_solve(suite[1]).z(0)) <= 1e-12);
}

TEST_CASE("certificate checker") {
  const auto suite = build_scalar_suite();
  CHECK(certify_solution(suite[0], BlockPoint{Vec::Constant(1, 1.0), {}}, 1e-9)
            .ok);
  const CertifyResult bad = certify_solution(
      suite[0], BlockPoint{Vec::Constant(1, 1.1), {}}, 1e-6);
  CHECK_FALSE(bad.ok);
  CHECK(bad.residuals[0] > 1e-6);

  // the zero problem accepts any point
  ProblemInstance zero;
  zero.name = "zero";
  zero.spec.dim0 = 2;
  zero.spec.blocks.push_back(
      make_block(nullptr, nullptr, nullptr, nullptr, LinearMap::identity(2)));
  CHECK(certify_solution(zero, BlockPoint{Vec::Constant(2, 7.0), {}}, 0.0).ok);
}

TEST_CASE("independent oracles") {
  const auto suite = build_scalar_suite();

  // monotone bisection reproduces the closed forms
  CHECK(std::abs(oracle_solve(suite[0], 1e-12).z(0) - 1.0) <= 1e-9);
  CHECK(std::abs(oracle_solve(suite[1], 1e-12).z(0)) <= 1e-9);

  // direct solve of the skew saddle satisfies the stationarity system
  const BlockPoint saddle = oracle_solve(suite[2], 1e-12);
  Vec total = Vec::Zero(2);
  for (const OperatorBlock& blk : suite[2].spec.blocks) {
    total += blk.forward_sum(saddle.z);
  }
  CHECK(total.norm() <= 1e-10);
  CHECK(certify_solution(suite[2], saddle, 1e-9).ok);

  // a stored known solution is returned unchanged
  CHECK(reference_solve(suite[0]).z(0) == suite[0].known_solution->z(0));
}

TEST_CASE("l1-logistic builder validation") {
  CHECK_THROWS_AS(build_l1_logistic(Mat::Ones(1, 1), Vec::Ones(1), 0.0, 0.0,
                                    1, 0),
                  ConfigError);
  CHECK_THROWS_AS(build_l1_logistic(Mat::Ones(1, 1), Vec::Constant(1, 0.5),
                                    1.0, 0.0, 1, 0),
                  ConfigError);
  CHECK_THROWS_AS(build_l1_logistic(Mat::Ones(501, 1), Vec::Ones(501), 1.0,
                                    0.0, 1, 0),
                  ConfigError);
  CHECK_THROWS_AS(build_l1_logistic(Mat::Ones(4, 1), Vec::Ones(4), 1.0, 0.0,
                                    5, 0),
                  ConfigError);
}

TEST_CASE("l1-logistic single sample with dominant penalty") {
  // |grad h(0)| = 0.5 <= lambda, so zero is stationary
  const ProblemInstance inst =
      build_l1_logistic(Mat::Ones(1, 1), Vec::Ones(1), 1.0, 0.0, 1, 0);
  const BlockPoint sol = oracle_solve(inst, 1e-13);
  CHECK(std::abs(sol.z(0)) <= 1e-10);
  CHECK(certify_solution(inst, sol, 1e-8).ok);
}

TEST_CASE("seeded multi-block logistic split") {
  const ProblemInstance inst = random_l1_logistic(10, 3, 2, 0.1, 0.05, 5);
  CHECK(inst.spec.n() == 2);
  const BlockPoint ref = reference_solve(inst);
  CHECK(certify_solution(inst, ref, 1e-8).ok);

  // the same seed reproduces the same instance
  const ProblemInstance again = random_l1_logistic(10, 3, 2, 0.1, 0.05, 5);
  CHECK(inst.data.isApprox(again.data));
  CHECK(inst.labels.isApprox(again.labels));
}
