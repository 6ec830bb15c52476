#pragma once

#include <complex>
#include <vector>

#include "lagflow/controllers.hpp"

namespace lagflow {

enum class TuningBranch { KiRhoPlusKpBeta2, KiRhoPlusKpBeta1 };

/// Gain-tuning quantities for PI on problems whose curvature B(x) satisfies
/// beta1 I <= B <= beta2 I and whose constraint Gram matrix satisfies
/// alpha1 I <= C C^T <= alpha2 I.
struct TuningParams {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double kp = 0.0;
  double rho = 0.0;
  double ki = 0.0;
  double mu = 0.0;
  TuningBranch branch = TuningBranch::KiRhoPlusKpBeta2;

  GainConfig gains() const;
};

/// rho = kp (beta2 - beta1)^2 / beta1, twice the smallest admissible value,
/// so that mu = min{kp alpha1, beta1} > 0. With beta1 == beta2, rho = kp beta1.
/// Throws InvalidBounds on nonpositive inputs or beta1 > beta2.
TuningParams tune_pi_gains(double beta1, double beta2, double alpha1, double kp,
                           TuningBranch branch, double alpha2 = 0.0);

/// Decay rate min{kp alpha1, 2 beta1 - kp (beta2 - beta1)^2 / rho}.
double pi_rate(double beta1, double beta2, double alpha1, double kp, double rho);

/// Solves rho = kp (beta2 - beta1)^2 / (2 beta1), ki = rho + kp beta for kp.
/// With beta1 == beta2, kp = ki / beta and rho takes the floor kp beta1.
struct KpRho {
  double kp;
  double rho;
};
KpRho kp_from_ki(double beta1, double beta2, double ki, TuningBranch branch);

struct LyapunovReport {
  std::vector<double> t;
  std::vector<double> V;
  /// V(t) <= V(0) exp(-mu t) + slack at every sample.
  bool bound_holds = true;
  int violations = 0;
  double worst_excess = 0.0;
  /// Least-squares slope of log V against t, negated. NaN with fewer than two
  /// positive samples.
  double empirical_rate = 0.0;
};

/// V = rho ||x - x*||^2 + ||lambda - lambda*||^2 along a sampled trajectory.
LyapunovReport lyapunov_monitor(const std::vector<JointState>& traj, const JointState& z_star,
                                double rho, double mu, double slack = 1e-9);

struct LTIStabilityReport {
  Matrix A;
  Vector b;
  std::vector<std::complex<double>> eigenvalues;
  bool hurwitz = false;
  double spectral_abscissa = 0.0;
  /// Euler step from stable_step_size with safety 0.9; 0 when not Hurwitz.
  double suggested_dt = 0.0;
};

/// Closed loop z' = A z + b of PI on a quadratic problem, with
/// A = [-W, -C^T; ki C - kp C W, -kp C C^T] and b = (0, ki d).
Matrix closed_loop_matrix(const QuadraticProblem& q, double kp, double ki);
LTIStabilityReport lti_closed_loop(const QuadraticProblem& q, const GainConfig& g);

inline constexpr double kHurwitzThreshold = -1e-12;

struct ZeroDynamicsReport {
  Matrix jh_perp;
  Matrix reduced_hessian;
  double min_eig = 0.0;
  bool second_order_sufficient = false;
};

/// Throws NotStationary when ||grad_x L||_inf > tol and RankDeficient when
/// the constraint Jacobian loses rank.
ZeroDynamicsReport zero_dynamics_check(const ProblemDef& p, const Vector& x_star,
                                       const Vector& lambda_star, double tol = 1e-5);

struct KktSolution {
  Vector x_star;
  Vector lambda_star;
};

/// Direct solve of [W C^T; C 0] (x, lambda) = (0, -d). Throws SingularKKT.
KktSolution kkt_oracle(const QuadraticProblem& q);

}  // namespace lagflow
