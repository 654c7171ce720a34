#include "projsplit/config.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "projsplit/errors.hpp"

namespace projsplit {

namespace {

using nlohmann::json;

double get_double(const json& j, const char* field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw ConfigError(std::string(field) +
                      ": only the string \"inf\" is accepted for infinity");
  }
  if (!j.is_number()) {
    throw ConfigError(std::string(field) + " must be a number");
  }
  return j.get<double>();
}

Vec parse_vec(const json& j, const char* field) {
  if (!j.is_array()) throw ConfigError(std::string(field) + " must be an array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = get_double(j[i], field);
  return v;
}

Mat parse_mat(const json& j, const char* field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ConfigError(std::string(field) + " must be a nested array");
  }
  const std::size_t rows = j.size(), cols = j[0].size();
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) {
      throw ConfigError(std::string(field) + " rows must have equal length");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = get_double(j[r][c], field);
  }
  return m;
}

std::shared_ptr<const MaxMonotone> parse_a(const json& j) {
  if (j.is_null()) return nullptr;
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") return nullptr;
  if (type == "l1") return make_l1_subdiff(get_double(j.at("lambda"), "A.lambda"));
  if (type == "box") {
    return make_box_normal_cone(parse_vec(j.at("lo"), "A.lo"),
                                parse_vec(j.at("hi"), "A.hi"));
  }
  if (type == "linear") {
    return std::make_shared<LinearMaxMonotone>(parse_mat(j.at("matrix"), "A.matrix"));
  }
  throw ConfigError("unknown A type '" + type + "'");
}

std::shared_ptr<const LipschitzMonotone> parse_b(const json& j) {
  if (j.is_null()) return nullptr;
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") return nullptr;
  if (type == "linear_monotone") {
    return make_linear_monotone(parse_mat(j.at("matrix"), "B.matrix"));
  }
  throw ConfigError("unknown B type '" + type + "'");
}

std::shared_ptr<const Cocoercive> parse_c(const json& j) {
  if (j.is_null()) return nullptr;
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") return nullptr;
  if (type == "quadratic") {
    return make_quadratic_gradient(parse_mat(j.at("Q"), "C.Q"),
                                   parse_vec(j.at("q"), "C.q"));
  }
  throw ConfigError("unknown C type '" + type + "'");
}

std::shared_ptr<const SmoothOperator> parse_d(const json& j) {
  if (j.is_null()) return nullptr;
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") return nullptr;
  if (type == "sigmoid") return std::make_shared<SigmoidOperator>();
  if (type == "logistic") {
    return make_logistic_gradient(parse_mat(j.at("data"), "D.data"),
                                  parse_vec(j.at("labels"), "D.labels"));
  }
  throw ConfigError("unknown D type '" + type + "'");
}

ProblemInstance parse_problem(const json& j) {
  if (j.contains("catalog")) {
    std::string name = j.at("catalog").get<std::string>();
    if (name == "scalar_suite_1") name = "scalar_l1_quadratic";
    if (name == "scalar_suite_2") name = "scalar_box_sigmoid";
    if (name == "scalar_suite_3") name = "skew_saddle";
    for (ProblemInstance& inst : build_scalar_suite()) {
      if (inst.name == name) return std::move(inst);
    }
    if (name == "l1_logistic") {
      const double lambda = get_double(j.at("lambda"), "problem.lambda");
      const double ridge =
          j.contains("ridge") ? get_double(j.at("ridge"), "problem.ridge") : 0.0;
      const int n_blocks = j.value("n_blocks", 1);
      const long seed = j.value("seed", 0L);
      if (j.contains("data")) {
        return build_l1_logistic(parse_mat(j.at("data"), "problem.data"),
                                 parse_vec(j.at("labels"), "problem.labels"),
                                 lambda, ridge, n_blocks, seed);
      }
      return random_l1_logistic(j.at("samples").get<int>(),
                                j.at("dim").get<int>(), n_blocks, lambda,
                                ridge, seed);
    }
    throw ConfigError("unknown catalog problem '" + name + "'");
  }
  if (!j.contains("blocks")) {
    throw ConfigError("problem needs either 'catalog' or 'blocks'");
  }
  ProblemInstance inst;
  inst.name = j.value("name", std::string("inline"));
  inst.spec.dim0 = j.at("dim0").get<Eigen::Index>();
  for (const json& bj : j.at("blocks")) {
    LinearMap g = (!bj.contains("G") || bj.at("G").is_string())
                      ? LinearMap::identity(inst.spec.dim0)
                      : LinearMap(parse_mat(bj.at("G"), "block.G"));
    inst.spec.blocks.push_back(
        make_block(parse_a(bj.value("A", json())), parse_b(bj.value("B", json())),
                   parse_c(bj.value("C", json())), parse_d(bj.value("D", json())),
                   std::move(g)));
  }
  inst.provenance = ProblemInstance::Provenance::oracle_solved;
  inst.oracle = ProblemInstance::OracleKind::none;
  inst.spec.validate();
  return inst;
}

void write_trace(const std::string& path, const RunResult& res,
                 Eigen::Index n) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw ConfigError("cannot open trace path '" + path + "'");
  std::fputs("k,phi,pi,alpha,residual", f);
  for (Eigen::Index i = 1; i <= n; ++i) {
    std::fprintf(f, ",rho_%lld,xres_%lld,yres_%lld,delta_%lld,branch_%lld,inner_%lld",
                 static_cast<long long>(i), static_cast<long long>(i),
                 static_cast<long long>(i), static_cast<long long>(i),
                 static_cast<long long>(i), static_cast<long long>(i));
  }
  std::fputc('\n', f);
  for (const IterationRecord& r : res.trace) {
    std::fprintf(f, "%ld,%.17g,%.17g,%.17g,%.17g", r.k, r.phi, r.pi, r.alpha,
                 r.residual);
    for (const auto& b : r.blocks) {
      std::fprintf(f, ",%.17g,%.17g,%.17g,%.17g,%d,%d", b.rho, b.xres, b.yres,
                   b.delta, b.branch, b.inner);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

json summary_json(const RunConfig& cfg, const RunResult& res,
                  const BlockPoint* reference) {
  json s;
  s["problem"] = cfg.problem.name;
  s["converged"] = res.converged;
  s["iterations"] = res.iterations;
  s["residual"] = res.residual;
  s["branch_counts"] = {{"graph_shortcut", res.stats.shortcut_steps},
                        {"half_forward", res.stats.half_forward_steps},
                        {"proximal_newton", res.stats.proximal_newton_steps}};
  s["monitor_violations"] = res.stats.violations;
  s["max_psi_evals"] = res.stats.max_psi_evals;

  const Eigen::Index n = cfg.problem.spec.n();
  json rho_stats = json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    double lo = kInf, hi = 0.0;
    for (const auto& r : res.trace) {
      lo = std::min(lo, r.blocks[i].rho);
      hi = std::max(hi, r.blocks[i].rho);
    }
    rho_stats.push_back({{"min", res.trace.empty() ? 0.0 : lo},
                         {"max", res.trace.empty() ? 0.0 : hi}});
  }
  s["rho_per_block"] = rho_stats;

  if (reference) {
    const CertifyResult cert =
        certify_solution(cfg.problem, res.final_point, 1e-6);
    s["certificate"] = {{"ok", cert.ok}, {"residuals", cert.residuals}};
  }
  return s;
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  cfg.problem = parse_problem(j.at("problem"));

  const json solver = j.value("solver", json::object());
  auto opt = [&](const char* key, double& field) {
    if (solver.contains(key)) field = get_double(solver.at(key), key);
  };
  opt("theta_lo", cfg.solver.theta_lo);
  opt("theta_hi", cfg.solver.theta_hi);
  opt("rho_hat", cfg.solver.rho_hat);
  opt("delta_hat", cfg.solver.delta_hat);
  opt("tau_lo", cfg.solver.tau_lo);
  opt("tau_hi", cfg.solver.tau_hi);
  opt("tau", cfg.solver.tau);
  opt("gamma", cfg.solver.gamma);
  opt("rho_nonsmooth", cfg.solver.rho_nonsmooth);
  opt("shortcut_tol", cfg.solver.shortcut_tol);
  opt("inner_tol", cfg.solver.inner_tol);
  if (solver.contains("max_inner_iters")) {
    cfg.solver.max_inner_iters = solver.at("max_inner_iters").get<int>();
  }
  if (solver.contains("max_psi_evals")) {
    cfg.solver.max_psi_evals = solver.at("max_psi_evals").get<int>();
  }
  if (solver.contains("rho_per_block")) {
    for (const json& v : solver.at("rho_per_block")) {
      cfg.solver.rho_per_block.push_back(get_double(v, "rho_per_block"));
    }
  }
  if (solver.contains("test_flip_delta_sign")) {
    cfg.solver.test_flip_delta_sign =
        solver.at("test_flip_delta_sign").get<bool>();
  }
  if (!(cfg.solver.theta_hi < 2.0)) {
    throw ConfigError("overline_theta must be < 2");
  }
  if (!(cfg.solver.theta_lo > 0.0)) {
    throw ConfigError("underline_theta must be > 0");
  }
  cfg.solver.validate();

  // Proximal-parameter bound for every non-smooth block.
  const auto& blocks = cfg.problem.spec.blocks;
  for (std::size_t i = 0; i < cfg.solver.rho_per_block.size(); ++i) {
    if (i >= blocks.size()) {
      throw ConfigError("rho_per_block longer than the block list");
    }
    const double rho = cfg.solver.rho_per_block[i];
    if (rho <= 0.0) continue;  // zero/negative = use the default
    if (!blocks[i].in_smooth_set && rho >= nonsmooth_rho_limit(blocks[i])) {
      throw ConfigError("rho_per_block[" + std::to_string(i + 1) +
                        "] violates (A8): need rho < 1/(1/(4 beta) + ell)");
    }
  }

  if (j.contains("stopping")) {
    const json& st = j.at("stopping");
    if (st.contains("tol")) cfg.stopping.tol = get_double(st.at("tol"), "tol");
    if (st.contains("max_iters")) {
      cfg.stopping.max_iters = st.at("max_iters").get<long>();
    }
    if (!(cfg.stopping.tol > 0.0)) throw ConfigError("tol must be positive");
    if (cfg.stopping.max_iters <= 0) {
      throw ConfigError("max_iters must be positive");
    }
  }
  if (j.contains("output")) {
    cfg.trace_path = j.at("output").value("trace_path", std::string());
    cfg.summary_path = j.at("output").value("summary_path", std::string());
  }
  if (j.contains("assertions")) {
    cfg.solver.assertions = j.at("assertions").get<bool>();
  }
  cfg.seed = j.value("seed", 0L);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  try {
    return parse_config(j);
  } catch (const json::exception& e) {
    throw ConfigError("config schema error: " + std::string(e.what()));
  }
}

RunOutcome run_command(const RunConfig& cfg) {
  RunOutcome out;
  try {
    BlockPoint reference;
    const BlockPoint* ref_ptr = nullptr;
    if (cfg.problem.known_solution ||
        cfg.problem.oracle != ProblemInstance::OracleKind::none) {
      reference = reference_solve(cfg.problem);
      ref_ptr = &reference;
    }
    const RunResult res = run(cfg.problem.spec, cfg.solver,
                              zero_point(cfg.problem.spec), cfg.stopping,
                              ref_ptr);
    if (!cfg.trace_path.empty()) {
      write_trace(cfg.trace_path, res, cfg.problem.spec.n());
    }
    if (!cfg.summary_path.empty()) {
      std::ofstream s(cfg.summary_path);
      if (!s) {
        throw ConfigError("cannot open summary path '" + cfg.summary_path + "'");
      }
      s << summary_json(cfg, res, ref_ptr).dump(2) << '\n';
    }
    out.exit_code = res.converged ? 0 : 2;
  } catch (const std::runtime_error& e) {
    out.exit_code = 3;
    out.failure_message = e.what();
  }
  return out;
}

int certify_command(const RunConfig& cfg, const std::string& point_path,
                    std::ostream& os, double tol) {
  std::ifstream in(point_path);
  if (!in) throw ConfigError("cannot open point file '" + point_path + "'");
  json j;
  in >> j;
  BlockPoint p;
  p.z = parse_vec(j.at("z"), "z");
  if (j.contains("w")) {
    for (const json& wj : j.at("w")) p.w.push_back(parse_vec(wj, "w"));
  }
  const CertifyResult cert = certify_solution(cfg.problem, p, tol);
  for (std::size_t i = 0; i < cert.residuals.size(); ++i) {
    os << "block " << (i + 1) << " residual " << cert.residuals[i] << '\n';
  }
  os << (cert.ok ? "certified" : "not certified") << " at tol " << tol << '\n';
  return cert.ok ? 0 : 2;
}

}  // namespace projsplit
