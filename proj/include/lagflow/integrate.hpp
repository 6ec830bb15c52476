#pragma once

#include <string>
#include <vector>

#include "lagflow/controllers.hpp"

namespace lagflow {

enum class Method { Euler, RK4 };
enum class Status { Converged, MaxTimeReached, Diverged, SingularGram };

const char* to_string(Method m);
const char* to_string(Status s);
Method parse_method(const std::string& name);

struct IntegratorConfig {
  Method method = Method::Euler;
  double dt = 1e-3;
  double t_max = 10.0;
  double stop_constraint_tol = 1e-7;
  double stop_stationarity_tol = 1e-6;
  int record_stride = 1;
  double divergence_bound = 1e9;
  /// Also keep x and lambda at every recorded sample.
  bool record_states = false;

  void check() const;
};

struct SolveReport {
  Status status = Status::MaxTimeReached;
  JointState final_state;
  long iterations = 0;
  std::vector<double> t_history;
  std::vector<double> f_history;
  std::vector<double> hinf_history;
  std::vector<double> xdot_inf_history;
  /// Filled only when IntegratorConfig::record_states is set.
  std::vector<JointState> states;
  double final_hinf = 0.0;
  double final_xdot_inf = 0.0;
  double wall_time = 0.0;
  std::string message;
};

/// Fixed-step simulation of the closed loop. For FL the multiplier in
/// z0 is ignored and final_state.lambda holds the algebraic multiplier.
/// Non-finite or out-of-bound states end the run as Diverged; a singular
/// Gram matrix ends it with status SingularGram.
SolveReport integrate(const ProblemDef& p, Controller controller, const GainConfig& g,
                      const JointState& z0, const IntegratorConfig& cfg);

/// safety * min_i 2 |Re mu_i| / |mu_i|^2 over the eigenvalues of A.
/// Throws NotHurwitz if some Re mu_i >= 0.
double stable_step_size(const Matrix& A, double safety);

struct LtiEulerResult {
  bool converged = false;
  bool diverged = false;
  long iterations = 0;
  Vector z;
};

/// Euler iteration z <- z + dt (A z + b) until ||z - z_star||_inf <= tol,
/// the state leaves the divergence bound, or max_iterations is reached.
LtiEulerResult euler_lti(const Matrix& A, const Vector& b, const Vector& z0, const Vector& z_star,
                         double dt, double tol, long max_iterations, double divergence_bound = 1e9);

}  // namespace lagflow
