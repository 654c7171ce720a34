#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "projsplit/config.hpp"
#include "projsplit/errors.hpp"

using namespace projsplit;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json minimal() {
  return json{{"problem", {{"catalog", "scalar_suite_1"}}}};
}

}  // namespace

TEST_CASE("minimal config loads with defaults") {
  const RunConfig cfg = parse_config(minimal());
  CHECK(cfg.problem.name == "scalar_l1_quadratic");
  CHECK(cfg.solver.theta_lo == doctest::Approx(0.9));
  CHECK(cfg.stopping.tol == doctest::Approx(1e-7));
}

TEST_CASE("constraint violations name the field") {
  json j = minimal();
  j["solver"]["theta_hi"] = 2.0;
  try {
    parse_config(j);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("overline_theta must be < 2") !=
          std::string::npos);
  }

  j = minimal();
  j["solver"]["rho_per_block"] = {5.0};  // block limit is 4
  try {
    parse_config(j);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(A8)") != std::string::npos);
  }

  j = minimal();
  j["solver"]["gamma"] = -1.0;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = minimal();
  j["problem"]["catalog"] = "no_such_problem";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("infinity sentinel and inline problems") {
  const json j = json::parse(R"({
    "problem": {
      "name": "inline_l1",
      "dim0": 1,
      "blocks": [
        {"A": {"type": "l1", "lambda": 1.0},
         "C": {"type": "quadratic", "Q": [[1.0]], "q": [-2.0]}}
      ]
    },
    "solver": {"rho_nonsmooth": "inf"}
  })");
  const RunConfig cfg = parse_config(j);
  CHECK(cfg.problem.spec.n() == 1);
  CHECK(std::isinf(cfg.solver.rho_nonsmooth));
  CHECK(cfg.problem.oracle == ProblemInstance::OracleKind::none);

  json bad = j;
  bad["solver"]["rho_nonsmooth"] = "huge";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("run command writes trace and summary") {
  json j = minimal();
  j["output"]["trace_path"] = "test_trace.csv";
  j["output"]["summary_path"] = "test_summary.json";
  const RunConfig cfg = parse_config(j);
  const RunOutcome outcome = run_command(cfg);
  CHECK(outcome.exit_code == 0);

  const json summary = json::parse(slurp("test_summary.json"));
  CHECK(summary.at("converged").get<bool>());
  CHECK(summary.at("residual").get<double>() <= 1e-7);
  CHECK(summary.at("certificate").at("ok").get<bool>());

  const std::string trace = slurp("test_trace.csv");
  CHECK(trace.rfind("k,phi,pi,alpha,residual,rho_1,xres_1,yres_1,delta_1,"
                    "branch_1,inner_1\n", 0) == 0);
  const long rows = static_cast<long>(
      std::count(trace.begin(), trace.end(), '\n'));
  CHECK(rows == summary.at("iterations").get<long>() + 1);

  // byte-identical re-run
  run_command(cfg);
  CHECK(slurp("test_trace.csv") == trace);
  std::remove("test_trace.csv");
  std::remove("test_summary.json");
}

TEST_CASE("run command exit codes") {
  json j = minimal();
  j["stopping"]["max_iters"] = 1;
  CHECK(run_command(parse_config(j)).exit_code == 2);

  j = minimal();
  j["solver"]["test_flip_delta_sign"] = true;
  const RunOutcome out = run_command(parse_config(j));
  CHECK(out.exit_code == 3);
  CHECK(out.failure_message.find("Prop 4.2") != std::string::npos);
}

TEST_CASE("certify command") {
  {
    std::ofstream p("test_point.json");
    p << R"({"z": [1.0], "w": []})";
  }
  std::ostringstream out;
  CHECK(certify_command(parse_config(minimal()), "test_point.json", out) == 0);
  CHECK(out.str().find("certified") != std::string::npos);
  {
    std::ofstream p("test_point.json");
    p << R"({"z": [1.5], "w": []})";
  }
  std::ostringstream out2;
  CHECK(certify_command(parse_config(minimal()), "test_point.json", out2) == 2);
  std::remove("test_point.json");
}
