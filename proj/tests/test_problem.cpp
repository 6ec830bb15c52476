#include <gtest/gtest.h>

#include "lagflow/problem.hpp"
#include "oracles.hpp"

using namespace lagflow;

namespace {

QuadraticProblem small_quadratic() {
  QuadraticProblem q;
  q.W = Matrix(2, 2);
  q.W << 2, 1, 1, 3;
  q.C = Matrix(1, 2);
  q.C << 1, -1;
  q.d = Vector::Constant(1, 0.5);
  return q;
}

}  // namespace

TEST(QuadraticProblem, EvaluatorsMatchDefinition) {
  const QuadraticProblem q = small_quadratic();
  const ProblemDef p = q.to_problem();
  Vector x(2);
  x << 1.0, -2.0;
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ(p.m, 1);
  EXPECT_DOUBLE_EQ(p.f(x), 0.5 * (2 * 1 + 2 * 1 * -2 * 1 + 3 * 4));
  EXPECT_TRUE(p.gradient(x).isApprox(q.W * x));
  EXPECT_DOUBLE_EQ(p.h(x)[0], 1.0 + 2.0 + 0.5);
  EXPECT_TRUE(p.jacobian_at(x).isApprox(q.C));
  EXPECT_TRUE(p.hessian_at(x, Vector::Ones(1)).isApprox(q.W));
}

TEST(QuadraticProblem, RejectsAsymmetricW) {
  QuadraticProblem q = small_quadratic();
  q.W(0, 1) += 1e-6;
  try {
    q.check();
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(QuadraticProblem, AcceptsRoundoffAsymmetry) {
  QuadraticProblem q = small_quadratic();
  q.W(0, 1) += 1e-15;
  EXPECT_NO_THROW(q.check());
}

TEST(QuadraticProblem, RejectsShapeMismatch) {
  QuadraticProblem q = small_quadratic();
  q.d = Vector::Zero(2);
  EXPECT_THROW(q.check(), SolverError);
  q = small_quadratic();
  q.C = Matrix::Zero(1, 3);
  EXPECT_THROW(q.to_problem(), SolverError);
}

TEST(ProblemDef, FallsBackToFiniteDifferences) {
  ProblemDef p;
  p.n = 2;
  p.m = 1;
  p.cost = [](const Vector& x) { return x[0] * x[0] + 3 * x[1]; };
  p.constraints = [](const Vector& x) { return Vector::Constant(1, x[0] * x[1]); };
  Vector x(2);
  x << 1.5, -0.5;
  EXPECT_NEAR(p.gradient(x)[0], 3.0, 1e-7);
  EXPECT_NEAR(p.gradient(x)[1], 3.0, 1e-7);
  EXPECT_NEAR(p.jacobian_at(x)(0, 0), -0.5, 1e-7);
  EXPECT_NEAR(p.jacobian_at(x)(0, 1), 1.5, 1e-7);
  const Matrix H = p.hessian_at(x, Vector::Constant(1, 2.0));
  EXPECT_NEAR(H(0, 0), 2.0, 1e-4);
  EXPECT_NEAR(H(0, 1), 2.0, 1e-4);
  EXPECT_NEAR(H(1, 1), 0.0, 1e-4);
}

TEST(ProblemDef, UnconstrainedHasEmptyOutputs) {
  ProblemDef p;
  p.n = 3;
  p.m = 0;
  p.cost = [](const Vector& x) { return x.squaredNorm(); };
  const Vector x = Vector::Ones(3);
  EXPECT_EQ(p.h(x).size(), 0);
  EXPECT_EQ(p.jacobian_at(x).rows(), 0);
  EXPECT_EQ(p.jacobian_at(x).cols(), 3);
  EXPECT_NEAR((lagrangian_gradient(p, x, Vector()) - 2 * x).norm(), 0.0, 1e-6);
}

TEST(ProblemDef, LagrangianGradient) {
  const QuadraticProblem q = small_quadratic();
  const ProblemDef p = q.to_problem();
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const Vector x = oracle::randn(2, rng), l = oracle::randn(1, rng);
    EXPECT_LE((lagrangian_gradient(p, x, l) - (q.W * x + q.C.transpose() * l)).norm(), 1e-12);
  }
}

TEST(JointState, StackedAndFinite) {
  JointState z{Vector::Ones(2), Vector::Constant(1, 3.0), 0.5};
  const Vector s = z.stacked();
  ASSERT_EQ(s.size(), 3);
  EXPECT_DOUBLE_EQ(s[2], 3.0);
  EXPECT_TRUE(z.finite());
  z.lambda[0] = std::nan("");
  EXPECT_FALSE(z.finite());
}

TEST(Problem, InfNorm) {
  Vector v(3);
  v << 1, -4, 2;
  EXPECT_DOUBLE_EQ(inf_norm(v), 4.0);
  EXPECT_DOUBLE_EQ(inf_norm(Vector()), 0.0);
}
