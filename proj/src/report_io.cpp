#include "lagflow/report_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace lagflow {

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json grid_json(const Grid& g) {
  Json rows = Json::array();
  for (const auto& row : g) rows.push_back(Json(std::vector<int>(row.begin(), row.end())));
  return rows;
}

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw SolverError(ErrorCode::InvalidInput, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

Json to_json(const SolveReport& r) {
  return {{"status", to_string(r.status)},
          {"iterations", r.iterations},
          {"t", num(r.final_state.t)},
          {"final_hinf", num(r.final_hinf)},
          {"final_xdot_inf", num(r.final_xdot_inf)},
          {"final_f", r.f_history.empty() ? Json(nullptr) : num(r.f_history.back())},
          {"wall_time", r.wall_time},
          {"message", r.message},
          {"x", to_json(r.final_state.x)},
          {"lambda", to_json(r.final_state.lambda)}};
}

Json to_json(const SweepResult& r, bool include_runs) {
  Json j;
  j["experiment"] = "quadratic-sweep";
  j["config"] = {{"n", r.config.n},
                 {"m_values", r.config.m_values},
                 {"runs", r.config.runs},
                 {"eta", r.config.eta},
                 {"seed", r.config.seed},
                 {"tol", r.config.tol},
                 {"safety", r.config.safety},
                 {"branch", r.config.branch == TuningBranch::KiRhoPlusKpBeta2 ? "beta2" : "beta1"}};
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"m", row.m},
                    {"runs", row.runs},
                    {"mean_pdgd", num(row.mean_pdgd)},
                    {"mean_pi", num(row.mean_pi)},
                    {"gain", num(row.gain)},
                    {"mean_kp", num(row.mean_kp)},
                    {"failures_pdgd", row.failures_pdgd},
                    {"failures_pi", row.failures_pi}});
  }
  j["rows"] = rows;
  if (include_runs) {
    Json runs = Json::array();
    for (const auto& run : r.runs) {
      runs.push_back({{"m", run.m},
                      {"run", run.run},
                      {"kp", num(run.kp)},
                      {"dt_pdgd", num(run.dt_pdgd)},
                      {"dt_pi", num(run.dt_pi)},
                      {"iters_pdgd", run.iters_pdgd},
                      {"iters_pi", run.iters_pi},
                      {"ok_pdgd", run.ok_pdgd},
                      {"ok_pi", run.ok_pi},
                      {"error", run.error}});
    }
    j["runs"] = runs;
  }
  return j;
}

Json to_json(const ShidokuResult& r) {
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    Json jr = to_json(run.report);
    jr["run"] = run.run;
    jr["grid"] = grid_json(run.grid);
    jr["success"] = run.success;
    jr["matches_oracle"] = run.matches_oracle;
    runs.push_back(jr);
  }
  return {{"experiment", "shidoku"},
          {"config",
           {{"runs", r.config.runs},
            {"seed", r.config.seed},
            {"kp", r.config.kp},
            {"ki", r.config.ki},
            {"dt", r.config.dt},
            {"t_max", r.config.t_max}}},
          {"oracle", grid_json(r.oracle)},
          {"successes", r.successes},
          {"mean_iterations", r.mean_iterations},
          {"runs", runs}};
}

Json to_json(const SysIdResult& r) {
  return {{"experiment", "sysid"},
          {"config",
           {{"N", r.config.N},
            {"seed", r.config.seed},
            {"noise_std", r.config.noise_std},
            {"gain", r.config.gain},
            {"dt", r.config.dt},
            {"t_max", r.config.t_max}}},
          {"theta_hat", to_json(r.theta_hat)},
          {"theta_true", to_json(r.theta_true)},
          {"theta_error", num(r.theta_error)},
          {"final_hinf", num(r.final_hinf)},
          {"report", to_json(r.report)}};
}

Json to_json(const ChemicalResult& r) {
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    runs.push_back({{"run", run.run},
                    {"status", to_string(run.report.status)},
                    {"iterations", run.report.iterations},
                    {"objective", num(run.objective)},
                    {"final_hinf", num(run.final_hinf)},
                    {"bounds_ok", run.bounds_ok},
                    {"feasible", run.feasible},
                    {"wall_time", run.report.wall_time},
                    {"message", run.report.message}});
  }
  return {{"experiment", "chemical"},
          {"config",
           {{"runs", r.config.runs},
            {"seed", r.config.seed},
            {"gain", r.config.gain},
            {"dt", r.config.dt},
            {"t_max", r.config.t_max},
            {"feasibility_tol", r.config.feasibility_tol}}},
          {"feasible", r.feasible},
          {"best", num(r.best)},
          {"mean", num(r.mean)},
          {"stddev", num(r.stddev)},
          {"runs", runs}};
}

Json to_json(const LTIStabilityReport& r) {
  Json eig = Json::array();
  for (const auto& e : r.eigenvalues) eig.push_back({num(e.real()), num(e.imag())});
  return {{"eigenvalues", eig},
          {"hurwitz", r.hurwitz},
          {"spectral_abscissa", num(r.spectral_abscissa)},
          {"suggested_dt", num(r.suggested_dt)}};
}

Json to_json(const ZeroDynamicsReport& r) {
  Json red = Json::array();
  for (Eigen::Index i = 0; i < r.reduced_hessian.rows(); ++i) {
    red.push_back(to_json(Vector(r.reduced_hessian.row(i).transpose())));
  }
  return {{"reduced_hessian", red},
          {"min_eig", num(r.min_eig)},
          {"second_order_sufficient", r.second_order_sufficient}};
}

Json to_json(const ValidationReport& r) {
  return {{"samples", r.samples},
          {"max_grad_rel_error", num(r.max_grad_rel_error)},
          {"max_jac_rel_error", num(r.max_jac_rel_error)},
          {"min_gram_eigenvalue", num(r.min_gram_eigenvalue)},
          {"grad_ok", r.grad_ok},
          {"jacobian_ok", r.jacobian_ok},
          {"shape_ok", r.shape_ok},
          {"rank_ok", r.rank_ok},
          {"tolerance", r.tolerance},
          {"passed", r.passed()}};
}

Json to_json(const TuningParams& t) {
  return {{"beta1", t.beta1}, {"beta2", t.beta2}, {"alpha1", t.alpha1}, {"alpha2", t.alpha2},
          {"kp", t.kp},       {"rho", t.rho},     {"ki", t.ki},         {"mu", t.mu},
          {"branch", t.branch == TuningBranch::KiRhoPlusKpBeta2 ? "beta2" : "beta1"}};
}

void write_json(const std::string& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorCode::InvalidInput, "cannot open '" + path + "'");
  return Json::parse(in);
}

void write_trajectory_csv(const std::string& path, const SolveReport& r) {
  auto out = open_out(path);
  const bool states = !r.states.empty();
  out << "t,f,hinf,xdotinf";
  if (states) {
    for (Eigen::Index i = 0; i < r.states.front().x.size(); ++i) out << ",x" << i;
    for (Eigen::Index i = 0; i < r.states.front().lambda.size(); ++i) out << ",l" << i;
  }
  out << '\n';
  out.precision(17);
  for (std::size_t k = 0; k < r.t_history.size(); ++k) {
    out << r.t_history[k] << ',' << r.f_history[k] << ',' << r.hinf_history[k] << ','
        << r.xdot_inf_history[k];
    if (states) {
      for (Eigen::Index i = 0; i < r.states[k].x.size(); ++i) out << ',' << r.states[k].x[i];
      for (Eigen::Index i = 0; i < r.states[k].lambda.size(); ++i)
        out << ',' << r.states[k].lambda[i];
    }
    out << '\n';
  }
}

}  // namespace lagflow
