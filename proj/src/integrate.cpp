#include "lagflow/integrate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace lagflow {

const char* to_string(Method m) { return m == Method::Euler ? "euler" : "rk4"; }

const char* to_string(Status s) {
  switch (s) {
    case Status::Converged: return "Converged";
    case Status::MaxTimeReached: return "MaxTimeReached";
    case Status::Diverged: return "Diverged";
    case Status::SingularGram: return "SingularGram";
  }
  return "Unknown";
}

Method parse_method(const std::string& name) {
  if (name == "euler" || name == "Euler") return Method::Euler;
  if (name == "rk4" || name == "RK4") return Method::RK4;
  throw SolverError(ErrorCode::InvalidInput, "unknown integrator '" + name + "'");
}

void IntegratorConfig::check() const {
  if (!(dt > 0.0) || !(t_max > dt)) {
    throw SolverError(ErrorCode::InvalidInput, "need 0 < dt < t_max");
  }
  if (!(stop_constraint_tol > 0.0) || !(stop_stationarity_tol > 0.0)) {
    throw SolverError(ErrorCode::InvalidInput, "stop tolerances must be positive");
  }
  if (record_stride < 1 || !(divergence_bound > 0.0)) {
    throw SolverError(ErrorCode::InvalidInput, "bad record_stride or divergence_bound");
  }
}

namespace {

// The evolved state is (x, lambda) for PI/PDGD and x alone for FL.
struct Flow {
  const ProblemDef& p;
  Controller controller;
  const GainConfig& g;

  Vector operator()(const Vector& s, Vector* lambda_out = nullptr) const {
    if (controller == Controller::FL) {
      Derivatives d = fl_rhs(p, s, g);
      if (lambda_out) *lambda_out = d.lambda_value;
      return d.xdot;
    }
    JointState z{s.head(p.n), s.tail(p.m), 0.0};
    Derivatives d = pi_rhs(p, z, g);
    Vector out(p.n + p.m);
    out << d.xdot, d.lambdadot;
    return out;
  }
};

}  // namespace

SolveReport integrate(const ProblemDef& p, Controller controller, const GainConfig& g,
                      const JointState& z0, const IntegratorConfig& cfg) {
  cfg.check();
  GainConfig gains = g;
  if (controller == Controller::PDGD) {
    gains.kp = 0.0;
  }
  gains.check(controller, p.m);
  if (z0.x.size() != p.n || (controller != Controller::FL && z0.lambda.size() != p.m)) {
    throw SolverError(ErrorCode::DimensionMismatch, "initial state size");
  }
  if (controller == Controller::FL && p.m > p.n) {
    throw SolverError(ErrorCode::InvalidInput, "feedback linearization needs m <= n");
  }

  const auto start = std::chrono::steady_clock::now();
  const bool fl = controller == Controller::FL;
  const Flow flow{p, controller, gains};
  SolveReport rep;

  Vector s = fl ? Vector(z0.x) : z0.stacked();
  Vector lambda = fl ? Vector::Zero(p.m) : Vector(z0.lambda);
  Vector ds;
  double t = z0.t;
  long k = 0;

  auto unpack = [&](const Vector& state) -> JointState {
    if (fl) return {state, lambda, t};
    return {state.head(p.n), state.tail(p.m), t};
  };
  auto record = [&](const JointState& z, double hinf, double xinf) {
    rep.t_history.push_back(t);
    rep.f_history.push_back(p.f(z.x));
    rep.hinf_history.push_back(hinf);
    rep.xdot_inf_history.push_back(xinf);
    if (cfg.record_states) rep.states.push_back(z);
  };
  auto finish = [&](Status st, const std::string& msg) {
    rep.status = st;
    rep.message = msg;
    rep.iterations = k;
    rep.final_state = unpack(s);
    rep.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  };

  auto eval = [&](const Vector& state) -> Vector {
    return fl ? flow(state, &lambda) : flow(state);
  };

  double hinf = 0.0, xinf = 0.0;
  rep.final_hinf = std::numeric_limits<double>::quiet_NaN();
  rep.final_xdot_inf = std::numeric_limits<double>::quiet_NaN();
  try {
    ds = eval(s);
    hinf = inf_norm(p.h(s.head(p.n)));
    xinf = inf_norm(ds.head(p.n));
    rep.final_hinf = hinf;
    rep.final_xdot_inf = xinf;
    record(unpack(s), hinf, xinf);

    const double eps_t = 1e-9 * cfg.dt;
    while (true) {
      if (cfg.method == Method::Euler) {
        s += cfg.dt * ds;
      } else {
        const Vector k1 = ds;
        const Vector k2 = flow(s + 0.5 * cfg.dt * k1);
        const Vector k3 = flow(s + 0.5 * cfg.dt * k2);
        const Vector k4 = flow(s + cfg.dt * k3);
        s += (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      ++k;
      t = z0.t + static_cast<double>(k) * cfg.dt;

      if (!s.allFinite() || inf_norm(s) > cfg.divergence_bound) {
        rep.final_hinf = std::numeric_limits<double>::quiet_NaN();
        rep.final_xdot_inf = std::numeric_limits<double>::quiet_NaN();
        return finish(Status::Diverged, "state left the divergence bound");
      }
      ds = eval(s);
      hinf = inf_norm(p.h(s.head(p.n)));
      xinf = inf_norm(ds.head(p.n));
      rep.final_hinf = hinf;
      rep.final_xdot_inf = xinf;

      const bool converged = hinf <= cfg.stop_constraint_tol && xinf <= cfg.stop_stationarity_tol;
      const bool timeout = t >= z0.t + cfg.t_max - eps_t;
      if (converged || timeout || k % cfg.record_stride == 0) {
        record(unpack(s), hinf, xinf);
      }
      if (converged) return finish(Status::Converged, "");
      if (timeout) return finish(Status::MaxTimeReached, "");
    }
  } catch (const SolverError& e) {
    if (e.code() == ErrorCode::SingularGram) {
      return finish(Status::SingularGram, e.what());
    }
    if (e.code() == ErrorCode::NonFiniteEvaluation) {
      rep.final_hinf = std::numeric_limits<double>::quiet_NaN();
      rep.final_xdot_inf = std::numeric_limits<double>::quiet_NaN();
      return finish(Status::Diverged, e.what());
    }
    throw;
  }
}

double stable_step_size(const Matrix& A, double safety) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw SolverError(ErrorCode::InvalidInput, "stable_step_size needs a nonempty square matrix");
  }
  if (!(safety > 0.0) || safety > 1.0) {
    throw SolverError(ErrorCode::InvalidInput, "safety must lie in (0, 1]");
  }
  Eigen::EigenSolver<Matrix> es(A, false);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& mu : es.eigenvalues()) {
    if (mu.real() >= 0.0) {
      throw SolverError(ErrorCode::NotHurwitz, "eigenvalue with nonnegative real part");
    }
    best = std::min(best, 2.0 * std::abs(mu.real()) / std::norm(mu));
  }
  return safety * best;
}

LtiEulerResult euler_lti(const Matrix& A, const Vector& b, const Vector& z0, const Vector& z_star,
                         double dt, double tol, long max_iterations, double divergence_bound) {
  const long k = A.rows();
  Matrix step = Matrix::Identity(k, k) + dt * A;
  const Vector c = dt * b;
  LtiEulerResult r;
  r.z = z0;
  Vector next(k);
  while (r.iterations < max_iterations) {
    next.noalias() = step * r.z;
    r.z = next + c;
    ++r.iterations;
    const double dev = (r.z - z_star).cwiseAbs().maxCoeff();
    if (dev <= tol) {
      r.converged = true;
      return r;
    }
    if (!std::isfinite(dev) || r.z.cwiseAbs().maxCoeff() > divergence_bound) {
      r.diverged = true;
      return r;
    }
  }
  return r;
}

}  // namespace lagflow
