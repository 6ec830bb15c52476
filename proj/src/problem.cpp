#include "lagflow/problem.hpp"

#include <algorithm>
#include <cmath>

#include "lagflow/derivatives.hpp"

namespace lagflow {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorCode::InvalidBound: return "InvalidBound";
    case ErrorCode::SingularGram: return "SingularGram";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::InvalidBounds: return "InvalidBounds";
    case ErrorCode::NotStationary: return "NotStationary";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SingularKKT: return "SingularKKT";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

double ProblemDef::f(const Vector& x) const { return cost(x); }

Vector ProblemDef::gradient(const Vector& x) const {
  if (grad) {
    return grad(x);
  }
  return eval_gradient_fd(*this, x);
}

Vector ProblemDef::h(const Vector& x) const {
  if (m == 0) {
    return Vector::Zero(0);
  }
  return constraints(x);
}

Matrix ProblemDef::jacobian_at(const Vector& x) const {
  if (m == 0) {
    return Matrix::Zero(0, n);
  }
  if (jacobian) {
    return jacobian(x);
  }
  return eval_jacobian_fd(*this, x);
}

Matrix ProblemDef::hessian_at(const Vector& x, const Vector& lambda) const {
  if (lagrangian_hessian) {
    return lagrangian_hessian(x, lambda);
  }
  return eval_lagrangian_hessian_fd(*this, x, lambda);
}

Vector JointState::stacked() const {
  Vector z(x.size() + lambda.size());
  z << x, lambda;
  return z;
}

bool JointState::finite() const { return x.allFinite() && lambda.allFinite(); }

void QuadraticProblem::check() const {
  if (W.rows() != W.cols()) {
    throw SolverError(ErrorCode::InvalidInput, "W must be square");
  }
  if (C.cols() != W.rows() || C.rows() != d.size()) {
    throw SolverError(ErrorCode::InvalidInput, "C must be m x n and d of length m");
  }
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SolverError(ErrorCode::InvalidInput, "W is not symmetric");
  }
}

ProblemDef QuadraticProblem::to_problem(std::string label) const {
  check();
  ProblemDef p;
  p.n = n();
  p.m = m();
  p.label = std::move(label);
  // Captured by value so the ProblemDef owns its data.
  const Matrix Wc = W;
  const Matrix Cc = C;
  const Vector dc = d;
  p.cost = [Wc](const Vector& x) { return 0.5 * x.dot(Wc * x); };
  p.grad = [Wc](const Vector& x) -> Vector { return Wc * x; };
  p.constraints = [Cc, dc](const Vector& x) -> Vector { return Cc * x + dc; };
  p.jacobian = [Cc](const Vector&) -> Matrix { return Cc; };
  p.lagrangian_hessian = [Wc](const Vector&, const Vector&) -> Matrix { return Wc; };
  return p;
}

Vector lagrangian_gradient(const ProblemDef& p, const Vector& x, const Vector& lambda) {
  Vector g = p.gradient(x);
  if (p.m > 0) {
    g.noalias() += p.jacobian_at(x).transpose() * lambda;
  }
  return g;
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace lagflow
