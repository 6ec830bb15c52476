#include "lagflow/controllers.hpp"

#include <algorithm>
#include <cctype>

namespace lagflow {

namespace {

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw SolverError(ErrorCode::NonFiniteEvaluation, what);
  }
}

bool solve_spd(const Matrix& A, const Vector& b, Vector& out) {
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) {
    return false;
  }
  out = llt.solve(b);
  return out.allFinite();
}

}  // namespace

const char* to_string(Controller c) {
  switch (c) {
    case Controller::PDGD: return "pdgd";
    case Controller::PI: return "pi";
    case Controller::FL: return "fl";
  }
  return "unknown";
}

Controller parse_controller(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "pdgd") return Controller::PDGD;
  if (s == "pi") return Controller::PI;
  if (s == "fl") return Controller::FL;
  throw SolverError(ErrorCode::InvalidInput, "unknown controller '" + name + "'");
}

void GainConfig::check(Controller c, int m) const {
  if (c == Controller::FL) {
    if (fl_outer.size() != m) {
      throw SolverError(ErrorCode::DimensionMismatch, "fl_outer must have one gain per constraint");
    }
    if (m > 0 && !(fl_outer.minCoeff() > 0.0)) {
      throw SolverError(ErrorCode::InvalidInput, "fl_outer gains must be positive");
    }
    if (!(regularization >= 0.0)) {
      throw SolverError(ErrorCode::InvalidInput, "regularization must be nonnegative");
    }
    return;
  }
  if (!(ki > 0.0)) {
    throw SolverError(ErrorCode::InvalidInput, "ki must be positive");
  }
  if (!(kp >= 0.0)) {
    throw SolverError(ErrorCode::InvalidInput, "kp must be nonnegative");
  }
}

GainConfig GainConfig::uniform_fl(int m, double k) {
  GainConfig g;
  g.fl_outer = Vector::Constant(m, k);
  return g;
}

Vector plant_rhs(const ProblemDef& p, const Vector& x, const Vector& lambda) {
  if (x.size() != p.n || lambda.size() != p.m) {
    throw SolverError(ErrorCode::DimensionMismatch, "plant_rhs state size");
  }
  Vector xdot = -lagrangian_gradient(p, x, lambda);
  require_finite(xdot, "plant_rhs");
  return xdot;
}

Derivatives pi_rhs(const ProblemDef& p, const JointState& z, const GainConfig& g) {
  if (z.x.size() != p.n || z.lambda.size() != p.m) {
    throw SolverError(ErrorCode::DimensionMismatch, "pi_rhs state size");
  }
  Derivatives d;
  const Vector gl = lagrangian_gradient(p, z.x, z.lambda);
  d.xdot = -gl;
  d.lambdadot = g.ki * p.h(z.x);
  if (g.kp != 0.0 && p.m > 0) {
    d.lambdadot.noalias() -= g.kp * (p.jacobian_at(z.x) * gl);
  }
  require_finite(d.xdot, "pi_rhs");
  require_finite(d.lambdadot, "pi_rhs");
  return d;
}

Vector fl_control(const ProblemDef& p, const Vector& x, const Vector& v, double eps) {
  if (p.m > p.n) {
    throw SolverError(ErrorCode::InvalidInput, "feedback linearization needs m <= n");
  }
  if (v.size() != p.m) {
    throw SolverError(ErrorCode::DimensionMismatch, "fl_control input size");
  }
  const Matrix J = p.jacobian_at(x);
  const Vector gf = p.gradient(x);
  require_finite(gf, "gradient");
  if (!J.allFinite()) {
    throw SolverError(ErrorCode::NonFiniteEvaluation, "jacobian");
  }
  Matrix gram = Matrix::Zero(p.m, p.m);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(J);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  const Vector rhs = -(J * gf) - v;

  Vector lambda;
  Matrix A = gram;
  A.diagonal().array() += eps;
  if (solve_spd(A, rhs, lambda)) {
    return lambda;
  }
  throw SolverError(ErrorCode::SingularGram, "Gram matrix is not positive definite");
}

Derivatives fl_rhs(const ProblemDef& p, const Vector& x, const GainConfig& g) {
  if (g.fl_outer.size() != p.m) {
    throw SolverError(ErrorCode::DimensionMismatch, "fl_outer size");
  }
  const Vector y = p.h(x);
  require_finite(y, "constraints");
  const Vector v = -(g.fl_outer.array() * y.array()).matrix();
  Derivatives d;
  d.lambda_value = fl_control(p, x, v, g.regularization);
  d.xdot = plant_rhs(p, x, d.lambda_value);
  return d;
}

}  // namespace lagflow
