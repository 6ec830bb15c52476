#pragma once

#include <cstdint>
#include <random>

#include "lagflow/problem.hpp"

namespace lagflow {

/// Per-component step max(1e-6, 1e-7 |x_i|).
double default_fd_step(double xi);

/// Central-difference gradient of p.cost. A nonpositive `step` selects the
/// per-component default. Throws NonFiniteEvaluation on NaN/Inf probes.
Vector eval_gradient_fd(const ProblemDef& p, const Vector& x, double step = 0.0);

/// Central-difference Jacobian of p.constraints (m x n).
Matrix eval_jacobian_fd(const ProblemDef& p, const Vector& x, double step = 0.0);

/// Central-difference Hessian of the Lagrangian built from analytic (or FD)
/// first derivatives, symmetrized.
Matrix eval_lagrangian_hessian_fd(const ProblemDef& p, const Vector& x, const Vector& lambda,
                                  double step = 0.0);

struct ValidationReport {
  int samples = 0;
  double max_grad_rel_error = 0.0;
  double max_jac_rel_error = 0.0;
  /// Smallest eigenvalue of J_h J_h^T over all samples.
  double min_gram_eigenvalue = 0.0;
  bool grad_ok = true;
  bool jacobian_ok = true;
  bool shape_ok = true;
  bool rank_ok = true;
  double tolerance = 1e-4;

  bool passed() const { return grad_ok && jacobian_ok && shape_ok && rank_ok; }
};

/// Draws sample points; the default sampler is uniform on [-1, 1]^n.
using PointSampler = std::function<Vector(std::mt19937_64& rng)>;

/// Compares analytic derivatives against central differences at `samples`
/// random points and records the Gram-matrix rank proxy.
ValidationReport validate_problem(const ProblemDef& p, int samples, std::uint64_t seed,
                                  const PointSampler& sampler = {}, double tolerance = 1e-4);

}  // namespace lagflow
