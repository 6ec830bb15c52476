#include "lagflow/derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lagflow {

namespace {

double step_for(double xi, double step) { return step > 0.0 ? step : default_fd_step(xi); }

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw SolverError(ErrorCode::NonFiniteEvaluation, what);
  }
}

double relative_error(const Matrix& analytic, const Matrix& approx) {
  if (analytic.size() == 0) {
    return 0.0;
  }
  const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return (analytic - approx).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

double default_fd_step(double xi) { return std::max(1e-6, 1e-7 * std::abs(xi)); }

Vector eval_gradient_fd(const ProblemDef& p, const Vector& x, double step) {
  require_finite(x, "gradient probe point");
  Vector g(p.n);
  Vector probe = x;
  for (int i = 0; i < p.n; ++i) {
    const double s = step_for(x[i], step);
    probe[i] = x[i] + s;
    const double fp = p.cost(probe);
    probe[i] = x[i] - s;
    const double fm = p.cost(probe);
    probe[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw SolverError(ErrorCode::NonFiniteEvaluation, "cost probe");
    }
    g[i] = (fp - fm) / (2.0 * s);
  }
  return g;
}

Matrix eval_jacobian_fd(const ProblemDef& p, const Vector& x, double step) {
  require_finite(x, "jacobian probe point");
  Matrix J(p.m, p.n);
  Vector probe = x;
  for (int i = 0; i < p.n; ++i) {
    const double s = step_for(x[i], step);
    probe[i] = x[i] + s;
    const Vector hp = p.constraints(probe);
    probe[i] = x[i] - s;
    const Vector hm = p.constraints(probe);
    probe[i] = x[i];
    require_finite(hp, "constraint probe");
    require_finite(hm, "constraint probe");
    J.col(i) = (hp - hm) / (2.0 * s);
  }
  return J;
}

Matrix eval_lagrangian_hessian_fd(const ProblemDef& p, const Vector& x, const Vector& lambda,
                                  double step) {
  require_finite(x, "hessian probe point");
  Matrix H(p.n, p.n);
  Vector probe = x;
  for (int i = 0; i < p.n; ++i) {
    // First derivatives are differenced once more, so use a coarser step.
    const double s = step > 0.0 ? step : std::max(1e-5, 1e-6 * std::abs(x[i]));
    probe[i] = x[i] + s;
    const Vector gp = lagrangian_gradient(p, probe, lambda);
    probe[i] = x[i] - s;
    const Vector gm = lagrangian_gradient(p, probe, lambda);
    probe[i] = x[i];
    require_finite(gp, "lagrangian gradient probe");
    require_finite(gm, "lagrangian gradient probe");
    H.col(i) = (gp - gm) / (2.0 * s);
  }
  return 0.5 * (H + H.transpose());
}

ValidationReport validate_problem(const ProblemDef& p, int samples, std::uint64_t seed,
                                  const PointSampler& sampler, double tolerance) {
  ValidationReport report;
  report.samples = samples;
  report.tolerance = tolerance;
  report.min_gram_eigenvalue = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const bool rank_applicable = p.m > 0 && p.m <= p.n;

  for (int s = 0; s < samples; ++s) {
    Vector x;
    if (sampler) {
      x = sampler(rng);
    } else {
      x = Vector::NullaryExpr(p.n, [&] { return unit(rng); });
    }

    if (p.grad) {
      const Vector analytic = p.grad(x);
      if (analytic.size() != p.n) {
        report.shape_ok = false;
      } else {
        report.max_grad_rel_error =
            std::max(report.max_grad_rel_error, relative_error(analytic, eval_gradient_fd(p, x)));
      }
    }

    if (p.m > 0) {
      const Matrix J = p.jacobian_at(x);
      if (J.rows() != p.m || J.cols() != p.n) {
        report.shape_ok = false;
        continue;
      }
      if (p.jacobian) {
        report.max_jac_rel_error =
            std::max(report.max_jac_rel_error, relative_error(J, eval_jacobian_fd(p, x)));
      }
      Matrix gram = J * J.transpose();
      const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(gram, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff();
      report.min_gram_eigenvalue = std::min(report.min_gram_eigenvalue, lmin);
      if (rank_applicable && lmin <= 1e-12 * std::max(1.0, gram.trace())) {
        report.rank_ok = false;
      }
    }
  }

  if (!std::isfinite(report.min_gram_eigenvalue)) {
    report.min_gram_eigenvalue = 0.0;
  }
  report.grad_ok = report.max_grad_rel_error <= tolerance;
  report.jacobian_ok = report.max_jac_rel_error <= tolerance;
  return report;
}

}  // namespace lagflow
