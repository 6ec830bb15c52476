#include "lagflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lagflow/integrate.hpp"

namespace lagflow {

namespace {

void check_bounds(double beta1, double beta2) {
  if (!(beta1 > 0.0) || !(beta2 > 0.0)) {
    throw SolverError(ErrorCode::InvalidBounds, "beta1 and beta2 must be positive");
  }
  if (beta1 > beta2) {
    throw SolverError(ErrorCode::InvalidBounds, "beta1 must not exceed beta2");
  }
}

double branch_beta(double beta1, double beta2, TuningBranch branch) {
  return branch == TuningBranch::KiRhoPlusKpBeta2 ? beta2 : beta1;
}

}  // namespace

GainConfig TuningParams::gains() const {
  GainConfig g;
  g.kp = kp;
  g.ki = ki;
  return g;
}

double pi_rate(double beta1, double beta2, double alpha1, double kp, double rho) {
  const double gap = beta2 - beta1;
  return std::min(kp * alpha1, 2.0 * beta1 - kp * gap * gap / rho);
}

TuningParams tune_pi_gains(double beta1, double beta2, double alpha1, double kp,
                           TuningBranch branch, double alpha2) {
  check_bounds(beta1, beta2);
  if (!(alpha1 > 0.0) || !(kp > 0.0)) {
    throw SolverError(ErrorCode::InvalidBounds, "alpha1 and kp must be positive");
  }
  TuningParams t;
  t.beta1 = beta1;
  t.beta2 = beta2;
  t.alpha1 = alpha1;
  t.alpha2 = alpha2 > 0.0 ? alpha2 : alpha1;
  t.kp = kp;
  t.branch = branch;
  const double gap = beta2 - beta1;
  t.rho = gap == 0.0 ? kp * beta1 : kp * gap * gap / beta1;
  t.ki = t.rho + kp * branch_beta(beta1, beta2, branch);
  t.mu = pi_rate(beta1, beta2, alpha1, kp, t.rho);
  return t;
}

KpRho kp_from_ki(double beta1, double beta2, double ki, TuningBranch branch) {
  check_bounds(beta1, beta2);
  if (!(ki > 0.0)) {
    throw SolverError(ErrorCode::InvalidBounds, "ki must be positive");
  }
  const double beta = branch_beta(beta1, beta2, branch);
  const double gap = beta2 - beta1;
  if (gap == 0.0) {
    KpRho r;
    r.kp = ki / beta;
    r.rho = r.kp * beta1;
    return r;
  }
  const double c = gap * gap / (2.0 * beta1);
  KpRho r;
  r.kp = ki / (beta + c);
  r.rho = r.kp * c;
  return r;
}

LyapunovReport lyapunov_monitor(const std::vector<JointState>& traj, const JointState& z_star,
                                double rho, double mu, double slack) {
  LyapunovReport rep;
  if (traj.empty()) {
    rep.empirical_rate = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const double t0 = traj.front().t;
  double st = 0, sv = 0, stt = 0, stv = 0;
  int count = 0;
  for (const JointState& z : traj) {
    const double v = rho * (z.x - z_star.x).squaredNorm() + (z.lambda - z_star.lambda).squaredNorm();
    rep.t.push_back(z.t);
    rep.V.push_back(v);
    if (v > 0.0) {
      const double tt = z.t - t0, lv = std::log(v);
      st += tt;
      sv += lv;
      stt += tt * tt;
      stv += tt * lv;
      ++count;
    }
  }
  const double v0 = rep.V.front();
  for (std::size_t i = 0; i < rep.V.size(); ++i) {
    const double excess = rep.V[i] - v0 * std::exp(-mu * (rep.t[i] - t0));
    rep.worst_excess = std::max(rep.worst_excess, excess);
    if (excess > slack) {
      ++rep.violations;
    }
  }
  rep.bound_holds = rep.violations == 0;
  const double denom = count * stt - st * st;
  rep.empirical_rate = (count >= 2 && denom > 0.0) ? -(count * stv - st * sv) / denom
                                                   : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

Matrix closed_loop_matrix(const QuadraticProblem& q, double kp, double ki) {
  q.check();
  const int n = q.n(), m = q.m();
  Matrix A(n + m, n + m);
  A.topLeftCorner(n, n) = -q.W;
  A.topRightCorner(n, m) = -q.C.transpose();
  A.bottomLeftCorner(m, n) = ki * q.C - kp * q.C * q.W;
  A.bottomRightCorner(m, m) = -kp * q.C * q.C.transpose();
  return A;
}

LTIStabilityReport lti_closed_loop(const QuadraticProblem& q, const GainConfig& g) {
  LTIStabilityReport rep;
  rep.A = closed_loop_matrix(q, g.kp, g.ki);
  rep.b = Vector::Zero(q.n() + q.m());
  rep.b.tail(q.m()) = g.ki * q.d;
  Eigen::EigenSolver<Matrix> es(rep.A, false);
  rep.spectral_abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& mu : es.eigenvalues()) {
    rep.eigenvalues.push_back(mu);
    rep.spectral_abscissa = std::max(rep.spectral_abscissa, mu.real());
  }
  rep.hurwitz = rep.spectral_abscissa < kHurwitzThreshold;
  rep.suggested_dt = rep.hurwitz ? stable_step_size(rep.A, 0.9) : 0.0;
  return rep;
}

ZeroDynamicsReport zero_dynamics_check(const ProblemDef& p, const Vector& x_star,
                                       const Vector& lambda_star, double tol) {
  if (inf_norm(lagrangian_gradient(p, x_star, lambda_star)) > tol) {
    throw SolverError(ErrorCode::NotStationary, "point is not stationary");
  }
  const int n = p.n, m = p.m;
  ZeroDynamicsReport rep;
  if (m == 0) {
    rep.jh_perp = Matrix::Identity(n, n);
  } else {
    const Matrix J = p.jacobian_at(x_star);
    Eigen::ColPivHouseholderQR<Matrix> rank(J);
    if (m > n || rank.rank() < m) {
      throw SolverError(ErrorCode::RankDeficient, "constraint Jacobian is rank deficient");
    }
    // The trailing n - m columns of Q from J^T = QR span null(J).
    Eigen::HouseholderQR<Matrix> qr(J.transpose());
    const Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
    rep.jh_perp = Q.rightCols(n - m).transpose();
  }
  if (rep.jh_perp.rows() == 0) {
    rep.reduced_hessian = Matrix::Zero(0, 0);
    rep.min_eig = std::numeric_limits<double>::infinity();
    rep.second_order_sufficient = true;
    return rep;
  }
  const Matrix H = p.hessian_at(x_star, lambda_star);
  Matrix R = rep.jh_perp * H * rep.jh_perp.transpose();
  rep.reduced_hessian = 0.5 * (R + R.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(rep.reduced_hessian, Eigen::EigenvaluesOnly);
  rep.min_eig = es.eigenvalues().minCoeff();
  rep.second_order_sufficient = rep.min_eig > 0.0;
  return rep;
}

KktSolution kkt_oracle(const QuadraticProblem& q) {
  q.check();
  const int n = q.n(), m = q.m();
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = q.W;
  K.topRightCorner(n, m) = q.C.transpose();
  K.bottomLeftCorner(m, n) = q.C;
  Vector rhs = Vector::Zero(n + m);
  rhs.tail(m) = -q.d;
  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible()) {
    throw SolverError(ErrorCode::SingularKKT, "KKT matrix is singular");
  }
  const Vector sol = lu.solve(rhs);
  return {sol.head(n), sol.tail(m)};
}

}  // namespace lagflow
