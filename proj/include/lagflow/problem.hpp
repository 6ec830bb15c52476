#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lagflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  NonFiniteEvaluation,
  InvalidBound,
  SingularGram,
  NotHurwitz,
  InvalidBounds,
  NotStationary,
  RankDeficient,
  SingularKKT,
  InvalidInput,
  DimensionMismatch,
};

const char* to_string(ErrorCode code);

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Equality-constrained problem  min f(x)  s.t.  h(x) = 0.
///
/// Evaluators must be pure: a ProblemDef is shared read-only across
/// concurrent solver runs. `grad`, `jacobian` and `lagrangian_hessian` are
/// optional; the accessor methods fall back to central differences.
struct ProblemDef {
  int n = 0;
  int m = 0;
  std::string label;

  std::function<double(const Vector&)> cost;
  std::function<Vector(const Vector&)> grad;
  std::function<Vector(const Vector&)> constraints;
  std::function<Matrix(const Vector&)> jacobian;
  std::function<Matrix(const Vector&, const Vector&)> lagrangian_hessian;

  double f(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Vector h(const Vector& x) const;
  Matrix jacobian_at(const Vector& x) const;
  /// Hessian of L(x, lambda) = f(x) + lambda^T h(x) with respect to x.
  Matrix hessian_at(const Vector& x, const Vector& lambda) const;
};

/// Stacked primal-dual state z = (x, lambda) at simulation time t.
struct JointState {
  Vector x;
  Vector lambda;
  double t = 0.0;

  Vector stacked() const;
  bool finite() const;
};

/// min 1/2 x^T W x  s.t.  C x + d = 0.
struct QuadraticProblem {
  Matrix W;
  Matrix C;
  Vector d;

  int n() const { return static_cast<int>(W.rows()); }
  int m() const { return static_cast<int>(C.rows()); }

  /// Throws InvalidInput on inconsistent shapes or an asymmetric W.
  void check() const;
  ProblemDef to_problem(std::string label = "quadratic") const;
};

/// Gradient of the Lagrangian with respect to x.
Vector lagrangian_gradient(const ProblemDef& p, const Vector& x, const Vector& lambda);

double inf_norm(const Vector& v);

}  // namespace lagflow
