#include <cmath>

#include "lagflow/benchmarks.hpp"

namespace lagflow {

Vector sysid_theta_true() {
  Vector t(5);
  t << 0.5, -0.3, -0.7, -0.35, 0.8;
  return t;
}

ProblemDef sysid_problem(const SysIdData& data) {
  const int N = data.N;
  if (N < 3 || data.u.size() != N || data.y_meas.size() != N) {
    throw SolverError(ErrorCode::InvalidInput, "sysid data must have N >= 3 samples");
  }
  if (data.u.minCoeff() <= 0.0) {
    throw SolverError(ErrorCode::InvalidInput, "sysid input must be strictly positive");
  }
  const Vector u = data.u;
  const Vector ym = data.y_meas;
  const Vector log_u = u.array().log().matrix();

  ProblemDef p;
  p.n = N + 5;
  p.m = N - 2;
  p.label = "sysid";
  p.cost = [ym](const Vector& x) { return (x.tail(ym.size()) - ym).squaredNorm(); };
  p.grad = [ym](const Vector& x) -> Vector {
    Vector g = Vector::Zero(x.size());
    g.tail(ym.size()) = 2.0 * (x.tail(ym.size()) - ym);
    return g;
  };
  // Row r is the equation for sample k = r + 2 (zero-based).
  p.constraints = [u, N](const Vector& x) -> Vector {
    Vector h(N - 2);
    const double* y = x.data() + 5;
    for (int k = 2; k < N; ++k) {
      const double yp = y[k - 1];
      h[k - 2] = y[k] - x[0] * std::exp(-yp * yp) - x[1] * u[k - 1] * u[k - 1] -
                 x[2] * u[k - 2] * yp - x[3] * std::pow(u[k - 2], x[4]);
    }
    return h;
  };
  p.jacobian = [u, log_u, N](const Vector& x) -> Matrix {
    Matrix J = Matrix::Zero(N - 2, N + 5);
    const double* y = x.data() + 5;
    for (int k = 2; k < N; ++k) {
      const int r = k - 2;
      const double yp = y[k - 1];
      const double e = std::exp(-yp * yp);
      const double pw = std::pow(u[k - 2], x[4]);
      J(r, 0) = -e;
      J(r, 1) = -u[k - 1] * u[k - 1];
      J(r, 2) = -u[k - 2] * yp;
      J(r, 3) = -pw;
      J(r, 4) = -x[3] * log_u[k - 2] * pw;
      J(r, 5 + k) = 1.0;
      J(r, 5 + k - 1) = 2.0 * x[0] * yp * e - x[2] * u[k - 2];
    }
    return J;
  };
  return p;
}

SysIdProblem make_sysid(int N, std::uint64_t seed, double noise_std) {
  if (N < 3) {
    throw SolverError(ErrorCode::InvalidInput, "make_sysid needs N >= 3");
  }
  if (!(noise_std >= 0.0)) {
    throw SolverError(ErrorCode::InvalidInput, "noise_std must be nonnegative");
  }
  SysIdData d;
  d.N = N;
  d.theta_true = sysid_theta_true();
  std::mt19937_64 rng = stream_rng(seed, 0x5157, 0);
  std::uniform_real_distribution<double> input(0.2, 2.0);
  d.u = Vector::NullaryExpr(N, [&] { return input(rng); });
  const Vector& t = d.theta_true;
  d.y_true = Vector::Zero(N);
  for (int k = 2; k < N; ++k) {
    const double yp = d.y_true[k - 1];
    d.y_true[k] = t[0] * std::exp(-yp * yp) + t[1] * d.u[k - 1] * d.u[k - 1] +
                  t[2] * d.u[k - 2] * yp + t[3] * std::pow(d.u[k - 2], t[4]);
  }
  std::normal_distribution<double> noise(0.0, 1.0);
  d.y_meas = d.y_true;
  if (noise_std > 0.0) {
    for (int k = 0; k < N; ++k) d.y_meas[k] += noise_std * noise(rng);
  }
  SysIdProblem out;
  out.problem = sysid_problem(d);
  out.data = std::move(d);
  return out;
}

SysIdResult run_sysid(const SysIdConfig& cfg) {
  const SysIdProblem sp = make_sysid(cfg.N, cfg.seed, cfg.noise_std);
  const ProblemDef& p = sp.problem;

  std::mt19937_64 rng = stream_rng(cfg.seed, 0x5157, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  JointState z0;
  z0.x = Vector::NullaryExpr(p.n, [&] { return normal(rng); });
  z0.lambda = Vector::Zero(p.m);

  IntegratorConfig ic;
  ic.method = Method::Euler;
  ic.dt = cfg.dt;
  ic.t_max = cfg.t_max;
  ic.record_stride = cfg.record_stride;

  SysIdResult res;
  res.config = cfg;
  res.report = integrate(p, Controller::FL, GainConfig::uniform_fl(p.m, cfg.gain), z0, ic);
  res.theta_true = sp.data.theta_true;
  res.theta_hat = res.report.final_state.x.head(5);
  res.theta_error = (res.theta_hat - res.theta_true).norm();
  res.final_hinf = res.report.final_hinf;
  return res;
}

}  // namespace lagflow
