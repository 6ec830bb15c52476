#pragma once

#include "lagflow/problem.hpp"

namespace lagflow {

enum class Controller { PDGD, PI, FL };

const char* to_string(Controller c);
/// Accepts "pdgd", "pi" or "fl" (case-insensitive). Throws InvalidInput.
Controller parse_controller(const std::string& name);

struct GainConfig {
  double kp = 0.0;
  double ki = 1.0;
  /// Outer-loop gains K_1..K_m for feedback linearization.
  Vector fl_outer;
  /// Added to the Gram matrix J J^T before factorization.
  double regularization = 0.0;

  /// Throws InvalidInput when a gain is out of range for controller `c`
  /// on a problem with m constraints.
  void check(Controller c, int m) const;
  static GainConfig uniform_fl(int m, double k);
};

struct Derivatives {
  Vector xdot;
  /// Multiplier rate for PI/PDGD; empty for FL.
  Vector lambdadot;
  /// Algebraic multiplier for FL; empty for PI/PDGD.
  Vector lambda_value;
};

/// -grad f(x) - J(x)^T lambda.
Vector plant_rhs(const ProblemDef& p, const Vector& x, const Vector& lambda);

/// xdot = -grad_x L, lambdadot = -kp J grad_x L + ki h.
Derivatives pi_rhs(const ProblemDef& p, const JointState& z, const GainConfig& g);

/// Solves (J J^T + eps I) lambda = -J grad f - v by Cholesky; throws
/// SingularGram when the factorization fails.
Vector fl_control(const ProblemDef& p, const Vector& x, const Vector& v, double eps);

/// v = -K o h(x), lambda = fl_control(x, v), xdot = plant_rhs(x, lambda).
Derivatives fl_rhs(const ProblemDef& p, const Vector& x, const GainConfig& g);

}  // namespace lagflow
