#include <doctest.h>

#include <cmath>
#include <random>

#include "projsplit/engine.hpp"
#include "projsplit/errors.hpp"
#include "projsplit/problems.hpp"

using namespace projsplit;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }

ProblemSpec single_cocoercive() {
  ProblemSpec spec;
  spec.dim0 = 1;
  spec.blocks.push_back(make_block(
      nullptr, nullptr,
      make_quadratic_gradient(Mat::Identity(1, 1), Vec::Zero(1)), nullptr,
      LinearMap::identity(1)));
  return spec;
}
}  // namespace

TEST_CASE("problem validation") {
  ProblemSpec spec;
  spec.dim0 = 1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.blocks.push_back(make_block(nullptr, nullptr, nullptr, nullptr,
                                   LinearMap(Mat::Constant(1, 1, 2.0))));
  CHECK_THROWS_AS(spec.validate(), ConfigError);  // last G must be identity
  spec.blocks[0] = make_block(nullptr, nullptr, nullptr, nullptr,
                              LinearMap::identity(1));
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("separator assembly and projection") {
  const ProblemSpec spec = single_cocoercive();
  const BlockStepResult hf =
      half_forward_step(spec.blocks[0], v1(1.0), v1(0.0), 0.5);

  SeparatorState sep = separator_value(v1(1.0), {}, {hf}, spec, 1.0);
  CHECK(sep.v(0) == doctest::Approx(1.0));
  CHECK(sep.phi == doctest::Approx(0.4375).epsilon(1e-12));
  CHECK(sep.pi == doctest::Approx(1.0));

  // gamma scaling of the squared gradient norm
  CHECK(separator_value(v1(1.0), {}, {hf}, spec, 4.0).pi ==
        doctest::Approx(0.25));

  // the two separator formulas agree at the iterate
  CHECK(separator_at({v1(1.0), {}}, {hf}, spec) ==
        doctest::Approx(sep.phi).epsilon(1e-12));

  // affine gradient consistency in the weighted geometry
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const double dz = gauss(rng);
    const double lhs = separator_at({v1(1.0 + dz), {}}, {hf}, spec) -
                       separator_at({v1(1.0), {}}, {hf}, spec);
    const double rhs = gamma_inner({sep.v / 1.0, sep.u}, {v1(dz), {}}, 1.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }

  sep.tau = 1.0;
  const BlockPoint next = project_update({v1(1.0), {}}, sep, 1.0);
  CHECK(next.z(0) == doctest::Approx(0.5625).epsilon(1e-12));
  // exact projection lands on the hyperplane
  CHECK(separator_at(next, {hf}, spec) == doctest::Approx(0.0).epsilon(1e-10));

  SeparatorState nonpos = sep;
  nonpos.phi = -1.0;
  CHECK_THROWS_AS(project_update({v1(1.0), {}}, nonpos, 1.0),
                  InternalInconsistency);
}

TEST_CASE("outer loop solves the scalar instance") {
  const ProblemInstance inst = build_scalar_suite()[0];
  StepConfig cfg;
  StoppingRule stop;
  stop.tol = 1e-7;
  const BlockPoint ref = reference_solve(inst);
  const RunResult res = run(inst.spec, cfg, zero_point(inst.spec), stop, &ref);
  CHECK(res.converged);
  CHECK(std::abs(res.final_point.z(0) - 1.0) <= 1e-5);
  CHECK(res.iterations == static_cast<long>(res.trace.size()));
  CHECK(res.stats.violations == 0);
  CHECK(res.stats.max_fejer_increase <= 1e-10);
  CHECK(res.stats.max_separator_at_ref <= 1e-9);

  // the engine agrees with the independent oracle
  const BlockPoint oracle = oracle_solve(inst, 1e-12);
  CHECK(std::abs(res.final_point.z(0) - oracle.z(0)) <= 1e-5);
}

TEST_CASE("starting on the graph converges in zero iterations") {
  const ProblemInstance inst = build_scalar_suite()[0];
  StepConfig cfg;
  const RunResult res =
      run(inst.spec, cfg, BlockPoint{v1(1.0), {}}, StoppingRule{});
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.trace.empty());
  CHECK(res.residual == 0.0);
}

TEST_CASE("fault injection trips the monitored lower bound") {
  const ProblemInstance inst = build_scalar_suite()[0];
  StepConfig cfg;
  cfg.test_flip_delta_sign = true;
  bool caught = false;
  try {
    run(inst.spec, cfg, zero_point(inst.spec), StoppingRule{});
  } catch (const InvariantViolation& e) {
    caught = true;
    CHECK(e.check.find("Prop 4.2") != std::string::npos);
  }
  CHECK(caught);
}

TEST_CASE("dimension and parameter rejection") {
  const ProblemSpec spec = single_cocoercive();
  StepConfig cfg;
  CHECK_THROWS_AS(run(spec, cfg, BlockPoint{Vec::Zero(2), {}}, StoppingRule{}),
                  DimensionError);
  cfg.rho_per_block = {4.0};  // limit is 1/(1/(4 beta)) = 4, must be strict
  CHECK_THROWS_AS(run(spec, cfg, BlockPoint{Vec::Zero(1), {}}, StoppingRule{}),
                  ConfigError);
}

TEST_CASE("two-block saddle with skew coupling") {
  const ProblemInstance inst = build_scalar_suite()[2];
  StepConfig cfg;
  StoppingRule stop;
  stop.tol = 1e-8;
  const BlockPoint ref = reference_solve(inst);
  const RunResult res = run(inst.spec, cfg, zero_point(inst.spec), stop, &ref);
  CHECK(res.converged);
  CHECK((res.final_point.z - ref.z).norm() <= 1e-6);
  CHECK(res.stats.violations == 0);
}
