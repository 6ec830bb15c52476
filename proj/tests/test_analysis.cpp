#include <gtest/gtest.h>

#include "lagflow/analysis.hpp"
#include "lagflow/integrate.hpp"
#include "oracles.hpp"

using namespace lagflow;

namespace {

QuadraticProblem scalar_q(double w) {
  QuadraticProblem q;
  q.W = Matrix::Constant(1, 1, w);
  q.C = Matrix::Constant(1, 1, 1.0);
  q.d = Vector::Zero(1);
  return q;
}

QuadraticProblem diag2(double a, double b) {
  QuadraticProblem q;
  q.W = Matrix::Zero(2, 2);
  q.W(0, 0) = a;
  q.W(1, 1) = b;
  q.C = Matrix(1, 2);
  q.C << 0, 2;
  q.d = Vector::Zero(1);
  return q;
}

struct RandomQp {
  QuadraticProblem q;
  double beta1, beta2, alpha1, alpha2;
};

RandomQp random_qp(int n, int m, std::mt19937_64& rng) {
  RandomQp r;
  r.q.W = oracle::spd(n, 1.0, 4.0, rng);
  r.q.C = oracle::randn(m, n, rng);
  r.q.d = oracle::randn(m, rng);
  r.beta1 = 1.0;
  r.beta2 = 4.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(r.q.C * r.q.C.transpose());
  r.alpha1 = es.eigenvalues()(0);
  r.alpha2 = es.eigenvalues()(m - 1);
  return r;
}

}  // namespace

TEST(Tuning, EqualBoundsUseFloor) {
  const TuningParams t = tune_pi_gains(2.0, 2.0, 0.5, 3.0, TuningBranch::KiRhoPlusKpBeta2);
  EXPECT_DOUBLE_EQ(t.rho, 6.0);
  EXPECT_DOUBLE_EQ(t.ki, 12.0);
  EXPECT_DOUBLE_EQ(t.mu, std::min(1.5, 4.0));
}

TEST(Tuning, InflatedRhoKeepsRatePositive) {
  const double b1 = 1.0, b2 = 3.0, kp = 2.0, a1 = 0.7;
  const double rho_min = kp * (b2 - b1) * (b2 - b1) / (2 * b1);
  for (auto branch : {TuningBranch::KiRhoPlusKpBeta2, TuningBranch::KiRhoPlusKpBeta1}) {
    const TuningParams t = tune_pi_gains(b1, b2, a1, kp, branch);
    EXPECT_GE(t.rho, rho_min);
    EXPECT_DOUBLE_EQ(t.rho, 8.0);
    EXPECT_DOUBLE_EQ(t.ki, t.rho + kp * (branch == TuningBranch::KiRhoPlusKpBeta2 ? b2 : b1));
    EXPECT_DOUBLE_EQ(t.mu, std::min(kp * a1, 2 * b1 - kp * (b2 - b1) * (b2 - b1) / t.rho));
    EXPECT_DOUBLE_EQ(t.mu, std::min(1.4, 1.0));
    EXPECT_GT(t.mu, 0.0);
  }
  // At the minimal rho the rate collapses to zero.
  EXPECT_DOUBLE_EQ(pi_rate(b1, b2, a1, kp, rho_min), 0.0);
}

TEST(Tuning, InvariantsOverRandomInputs) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.01, 10.0);
  for (int k = 0; k < 500; ++k) {
    double b1 = U(rng), b2 = U(rng);
    if (b1 > b2) std::swap(b1, b2);
    const double a1 = U(rng), kp = U(rng);
    const auto branch = k % 2 ? TuningBranch::KiRhoPlusKpBeta1 : TuningBranch::KiRhoPlusKpBeta2;
    const TuningParams t = tune_pi_gains(b1, b2, a1, kp, branch);
    EXPECT_GE(t.rho, kp * (b2 - b1) * (b2 - b1) / (2 * b1) * (1 - 1e-12));
    EXPECT_NEAR(t.ki, t.rho + kp * (k % 2 ? b1 : b2), 1e-12 * t.ki);
    EXPECT_GT(t.mu, 0.0);
  }
}

TEST(Tuning, InvalidBounds) {
  for (auto f : {+[] { tune_pi_gains(2.0, 1.0, 1.0, 1.0, TuningBranch::KiRhoPlusKpBeta2); },
                 +[] { tune_pi_gains(0.0, 1.0, 1.0, 1.0, TuningBranch::KiRhoPlusKpBeta2); },
                 +[] { tune_pi_gains(1.0, 2.0, -1.0, 1.0, TuningBranch::KiRhoPlusKpBeta2); },
                 +[] { tune_pi_gains(1.0, 2.0, 1.0, 0.0, TuningBranch::KiRhoPlusKpBeta2); },
                 +[] { kp_from_ki(3.0, 1.0, 1.0, TuningBranch::KiRhoPlusKpBeta1); },
                 +[] { kp_from_ki(1.0, 3.0, 0.0, TuningBranch::KiRhoPlusKpBeta1); }}) {
    try {
      f();
      FAIL();
    } catch (const SolverError& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidBounds);
    }
  }
}

TEST(KpFromKi, HandExample) {
  const KpRho r = kp_from_ki(1.0, 2.0, 20.0, TuningBranch::KiRhoPlusKpBeta2);
  EXPECT_DOUBLE_EQ(r.kp, 8.0);
  EXPECT_DOUBLE_EQ(r.rho, 4.0);
  EXPECT_DOUBLE_EQ(r.rho, r.kp * 1.0 / 2.0);
  EXPECT_DOUBLE_EQ(20.0, r.rho + r.kp * 2.0);
}

TEST(KpFromKi, EqualBounds) {
  const KpRho r = kp_from_ki(5.0, 5.0, 20.0, TuningBranch::KiRhoPlusKpBeta1);
  EXPECT_DOUBLE_EQ(r.kp, 4.0);
  EXPECT_DOUBLE_EQ(r.rho, 20.0);
}

TEST(KpFromKi, JointEqualitiesHold) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.1, 50.0);
  for (int k = 0; k < 200; ++k) {
    double b1 = U(rng), b2 = U(rng);
    if (b1 > b2) std::swap(b1, b2);
    const double ki = U(rng);
    const KpRho r = kp_from_ki(b1, b2, ki, TuningBranch::KiRhoPlusKpBeta2);
    EXPECT_NEAR(r.rho, r.kp * (b2 - b1) * (b2 - b1) / (2 * b1), 1e-10 * std::max(1.0, r.rho));
    EXPECT_NEAR(ki, r.rho + r.kp * b2, 1e-10 * ki);
  }
}

TEST(Corollary, RateExceedsPrimalDualBoundForLargeGains) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.5, 5.0);
  for (int k = 0; k < 50; ++k) {
    double b1 = U(rng), b2 = U(rng), a1 = U(rng), a2 = U(rng);
    if (b1 > b2) std::swap(b1, b2);
    if (a1 > a2) std::swap(a1, a2);
    const double floor = a1 * b1 / (4 * a2);
    ASSERT_GT(2 * b1, floor);
    // rho grows faster than kp so the second term of the rate tends to 2 beta1.
    auto rate = [&](double kp) { return pi_rate(b1, b2, a1, kp, kp * kp * (1 + (b2 - b1) * (b2 - b1))); };
    double kp0 = 1e-3;
    while (rate(kp0) < floor) kp0 *= 1.1;
    for (double kp = kp0; kp < 1e4; kp *= 1.7) EXPECT_GE(rate(kp), floor);
    EXPECT_NEAR(rate(1e8), 2 * b1, 1e-6);
  }
}

TEST(Lyapunov, ConstantAtOptimum) {
  JointState zs{Vector::Ones(3), Vector::Zero(1), 0.0};
  std::vector<JointState> traj;
  for (int k = 0; k < 5; ++k) traj.push_back({zs.x, zs.lambda, 0.1 * k});
  const LyapunovReport r = lyapunov_monitor(traj, zs, 2.0, 1.0);
  EXPECT_TRUE(r.bound_holds);
  for (double v : r.V) EXPECT_EQ(v, 0.0);
}

TEST(Lyapunov, DecayOnRandomConvexQuadratic) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    const RandomQp rq = random_qp(8, 3, rng);
    const TuningParams t = tune_pi_gains(rq.beta1, rq.beta2, rq.alpha1, 1.0,
                                         TuningBranch::KiRhoPlusKpBeta2, rq.alpha2);
    const auto [xs, ls] = oracle::kkt(rq.q.W, rq.q.C, rq.q.d);
    IntegratorConfig ic;
    ic.method = Method::RK4;
    ic.dt = 1e-3;
    ic.t_max = 5.0;
    ic.record_states = true;
    ic.record_stride = 10;
    ic.stop_constraint_tol = 1e-300;
    const SolveReport r = integrate(rq.q.to_problem(), Controller::PI, t.gains(),
                                    {oracle::randn(8, rng), oracle::randn(3, rng), 0.0}, ic);
    const LyapunovReport lr = lyapunov_monitor(r.states, {xs, ls, 0.0}, t.rho, t.mu);
    EXPECT_TRUE(lr.bound_holds) << "worst excess " << lr.worst_excess;
    EXPECT_GE(lr.empirical_rate, t.mu);
  }
}

TEST(Lyapunov, WeakIntegralGainIsFlagged) {
  std::mt19937_64 rng(15);
  const RandomQp rq = random_qp(8, 3, rng);
  TuningParams t = tune_pi_gains(rq.beta1, rq.beta2, rq.alpha1, 1.0,
                                 TuningBranch::KiRhoPlusKpBeta2, rq.alpha2);
  GainConfig weak = t.gains();
  weak.ki = 0.01 * t.ki;
  const auto [xs, ls] = oracle::kkt(rq.q.W, rq.q.C, rq.q.d);
  IntegratorConfig ic;
  ic.method = Method::RK4;
  ic.dt = 1e-3;
  ic.t_max = 5.0;
  ic.record_states = true;
  ic.record_stride = 10;
  ic.stop_constraint_tol = 1e-300;
  const SolveReport r = integrate(rq.q.to_problem(), Controller::PI, weak,
                                  {oracle::randn(8, rng), oracle::randn(3, rng), 0.0}, ic);
  const LyapunovReport lr = lyapunov_monitor(r.states, {xs, ls, 0.0}, t.rho, t.mu);
  EXPECT_TRUE(!lr.bound_holds || lr.empirical_rate < t.mu);
}

TEST(Lti, ScalarClosedFormGrid) {
  for (double w : {0.5, 1.0, 2.0, 4.0})
    for (double kp : {0.0, 0.3, 1.0, 3.0, 7.0})
      for (double ki : {0.01, 0.25, 1.0, 5.0, 20.0}) {
        GainConfig g;
        g.kp = kp;
        g.ki = ki;
        const LTIStabilityReport r = lti_closed_loop(scalar_q(w), g);
        const auto roots = oracle::scalar_roots(w, kp, ki);
        ASSERT_EQ(r.eigenvalues.size(), 2u);
        for (const auto& root : roots) {
          double best = 1e300;
          for (const auto& e : r.eigenvalues) best = std::min(best, std::abs(e - root));
          EXPECT_LE(best, 1e-10);
        }
        EXPECT_EQ(r.hurwitz, r.spectral_abscissa < -1e-12);
      }
}

TEST(Lti, IndefiniteDichotomy) {
  for (double ki : {0.1, 1.0, 10.0, 100.0}) {
    GainConfig g;
    g.ki = ki;
    g.kp = 0.0;
    EXPECT_FALSE(lti_closed_loop(diag2(1, -1), g).hurwitz);
    for (double kp : {0.3, 1.0, 5.0}) {
      g.kp = kp;
      const LTIStabilityReport r = lti_closed_loop(diag2(1, -1), g);
      EXPECT_TRUE(r.hurwitz);
      EXPECT_GT(r.suggested_dt, 0.0);
      // Closed form: -1 and the roots of mu^2 - (1 - 4kp) mu + 4 ki.
      const std::complex<double> disc = std::sqrt(std::complex<double>((1 - 4 * kp) * (1 - 4 * kp) - 16 * ki));
      for (const auto& root : {std::complex<double>(-1, 0), (1 - 4 * kp + disc) / 2.0, (1 - 4 * kp - disc) / 2.0}) {
        double best = 1e300;
        for (const auto& e : r.eigenvalues) best = std::min(best, std::abs(e - root));
        EXPECT_LE(best, 1e-9);
      }
    }
  }
}

TEST(Lti, DoubleEigenvalue) {
  GainConfig g;
  g.ki = 0.25;
  const LTIStabilityReport r = lti_closed_loop(scalar_q(1.0), g);
  for (const auto& e : r.eigenvalues) EXPECT_NEAR(std::abs(e - std::complex<double>(-0.5, 0)), 0.0, 1e-7);
  EXPECT_TRUE(r.hurwitz);
}

TEST(Lti, ForcingTerm) {
  std::mt19937_64 rng(2);
  const RandomQp rq = random_qp(4, 2, rng);
  GainConfig g;
  g.kp = 0.3;
  g.ki = 2.0;
  const LTIStabilityReport r = lti_closed_loop(rq.q, g);
  const auto [xs, ls] = oracle::kkt(rq.q.W, rq.q.C, rq.q.d);
  Vector zs(6);
  zs << xs, ls;
  EXPECT_LE(inf_norm(r.A * zs + r.b), 1e-10);
}

TEST(Lti, HurwitzAgreesWithTimeDomain) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int stable = 0, unstable = 0;
  for (int k = 0; k < 40; ++k) {
    QuadraticProblem q;
    q.W = oracle::randn(3, 3, rng);
    q.W = (0.5 * (q.W + q.W.transpose())).eval() + 3.0 * U(rng) * Matrix::Identity(3, 3);
    q.C = oracle::randn(1, 3, rng);
    q.d = oracle::randn(1, rng);
    GainConfig g;
    g.kp = 2.0 * U(rng);
    g.ki = 0.1 + 3.0 * U(rng);
    const LTIStabilityReport r = lti_closed_loop(q, g);
    if (std::abs(r.spectral_abscissa) < 1e-2) continue;
    IntegratorConfig ic;
    ic.method = Method::RK4;
    ic.dt = 1e-2;
    ic.t_max = 3000.0;
    const SolveReport s = integrate(q.to_problem(), Controller::PI, g, {oracle::randn(3, rng), oracle::randn(1, rng), 0.0}, ic);
    if (r.hurwitz) {
      ++stable;
      ASSERT_EQ(s.status, Status::Converged);
      const auto [xs, ls] = oracle::kkt(q.W, q.C, q.d);
      EXPECT_LE((s.final_state.x - xs).cwiseAbs().maxCoeff(), 1e-4);
    } else {
      ++unstable;
      EXPECT_EQ(s.status, Status::Diverged);
    }
  }
  EXPECT_GT(stable, 3);
  EXPECT_GT(unstable, 3);
}

TEST(ZeroDynamics, SquaredNormSingleConstraint) {
  ProblemDef p;
  p.n = 2;
  p.m = 1;
  p.cost = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.grad = [](const Vector& x) -> Vector { return x; };
  p.constraints = [](const Vector& x) { return Vector::Constant(1, x[0]); };
  p.jacobian = [](const Vector&) -> Matrix { return (Matrix(1, 2) << 1, 0).finished(); };
  const ZeroDynamicsReport r = zero_dynamics_check(p, Vector::Zero(2), Vector::Zero(1));
  ASSERT_EQ(r.jh_perp.rows(), 1);
  EXPECT_NEAR(std::abs(r.jh_perp(0, 1)), 1.0, 1e-12);
  EXPECT_NEAR(r.reduced_hessian(0, 0), 1.0, 1e-5);
  EXPECT_TRUE(r.second_order_sufficient);
}

TEST(ZeroDynamics, IndefiniteButConstrainedMinimum) {
  const QuadraticProblem q = diag2(1, -1);
  const ZeroDynamicsReport r = zero_dynamics_check(q.to_problem(), Vector::Zero(2), Vector::Zero(1));
  EXPECT_NEAR(r.reduced_hessian(0, 0), 1.0, 1e-12);
  EXPECT_TRUE(r.second_order_sufficient);
  const ZeroDynamicsReport neg = zero_dynamics_check(diag2(-1, 1).to_problem(), Vector::Zero(2), Vector::Zero(1));
  EXPECT_NEAR(neg.reduced_hessian(0, 0), -1.0, 1e-12);
  EXPECT_FALSE(neg.second_order_sufficient);
}

TEST(ZeroDynamics, NullSpaceBasisIsOrthonormal) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 30; ++k) {
    const int n = 3 + k % 6, m = 1 + k % 3;
    const RandomQp rq = random_qp(n, m, rng);
    const auto [xs, ls] = oracle::kkt(rq.q.W, rq.q.C, rq.q.d);
    const ZeroDynamicsReport r = zero_dynamics_check(rq.q.to_problem(), xs, ls);
    ASSERT_EQ(r.jh_perp.rows(), n - m);
    EXPECT_LE((rq.q.C * r.jh_perp.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((r.jh_perp * r.jh_perp.transpose() - Matrix::Identity(n - m, n - m)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(r.second_order_sufficient);
  }
}

TEST(ZeroDynamics, Errors) {
  const QuadraticProblem q = diag2(1, -1);
  try {
    zero_dynamics_check(q.to_problem(), Vector::Ones(2), Vector::Zero(1));
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStationary);
  }
  QuadraticProblem r;
  r.W = Matrix::Identity(3, 3);
  r.C = Matrix(2, 3);
  r.C << 1, 0, 0, 2, 0, 0;
  r.d = Vector::Zero(2);
  try {
    zero_dynamics_check(r.to_problem(), Vector::Zero(3), Vector::Zero(2));
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
}

TEST(Kkt, HandSolve) {
  QuadraticProblem q;
  q.W = Matrix::Identity(2, 2);
  q.C = Matrix(1, 2);
  q.C << 1, 0;
  q.d = Vector::Constant(1, -1.0);
  const KktSolution s = kkt_oracle(q);
  EXPECT_NEAR(s.x_star[0], 1.0, 1e-14);
  EXPECT_NEAR(s.x_star[1], 0.0, 1e-14);
  EXPECT_NEAR(s.lambda_star[0], -1.0, 1e-14);
}

TEST(Kkt, ZeroOffset) {
  std::mt19937_64 rng(1);
  RandomQp rq = random_qp(5, 2, rng);
  rq.q.d.setZero();
  const KktSolution s = kkt_oracle(rq.q);
  EXPECT_LE(s.x_star.cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(s.lambda_star.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Kkt, ResidualsAndAgreementWithElimination) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 50; ++k) {
    const RandomQp rq = random_qp(6 + k % 5, 1 + k % 4, rng);
    const KktSolution s = kkt_oracle(rq.q);
    EXPECT_LE(inf_norm(rq.q.W * s.x_star + rq.q.C.transpose() * s.lambda_star), 1e-10);
    EXPECT_LE(inf_norm(rq.q.C * s.x_star + rq.q.d), 1e-10);
    const auto [xs, ls] = oracle::kkt(rq.q.W, rq.q.C, rq.q.d);
    EXPECT_LE((s.x_star - xs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Kkt, Singular) {
  QuadraticProblem q;
  q.W = Matrix::Zero(2, 2);
  q.C = Matrix(1, 2);
  q.C << 1, 0;
  q.d = Vector::Zero(1);
  try {
    kkt_oracle(q);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularKKT);
  }
}
