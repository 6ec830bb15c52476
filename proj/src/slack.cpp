#include "lagflow/slack.hpp"

#include <cmath>

namespace lagflow {

std::vector<SlackTransform::Side> SlackTransform::sides() const {
  std::vector<Side> out;
  out.reserve(2 * bounds.size());
  for (const Bound& b : bounds) {
    if (std::isfinite(b.lower)) {
      out.push_back({b.index, b.lower, false});
    }
    if (std::isfinite(b.upper)) {
      out.push_back({b.index, b.upper, true});
    }
  }
  return out;
}

Vector SlackTransform::lift_point(const Vector& x) const {
  const auto s = sides();
  Vector lifted(base.n + static_cast<int>(s.size()));
  lifted.head(base.n) = x.head(base.n);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double xi = x[s[k].index];
    const double g = s[k].upper ? xi - s[k].value : s[k].value - xi;
    lifted[base.n + static_cast<int>(k)] = g <= 0.0 ? std::sqrt(-g) : 0.0;
  }
  return lifted;
}

bool SlackTransform::bounds_satisfied(const Vector& x, double tol) const {
  for (const Bound& b : bounds) {
    const double xi = x[b.index];
    if (xi < b.lower - tol || xi > b.upper + tol) {
      return false;
    }
  }
  return true;
}

ProblemDef lift_with_slacks(const SlackTransform& t) {
  for (const Bound& b : t.bounds) {
    if (b.index < 0 || b.index >= t.base.n) {
      throw SolverError(ErrorCode::InvalidBound, "bound index out of range");
    }
    if (!(b.lower < b.upper)) {
      throw SolverError(ErrorCode::InvalidBound, "lower bound must be below upper bound");
    }
  }

  const ProblemDef base = t.base;
  const auto sides = t.sides();
  const int n0 = base.n;
  const int m0 = base.m;
  const int s = static_cast<int>(sides.size());

  ProblemDef p;
  p.n = n0 + s;
  p.m = m0 + s;
  p.label = base.label + "+slacks";

  p.cost = [base, n0](const Vector& x) { return base.cost(x.head(n0)); };
  p.grad = [base, n0, s](const Vector& x) -> Vector {
    Vector g = Vector::Zero(n0 + s);
    g.head(n0) = base.gradient(x.head(n0));
    return g;
  };
  p.constraints = [base, sides, n0, m0, s](const Vector& x) -> Vector {
    Vector h(m0 + s);
    if (m0 > 0) {
      h.head(m0) = base.h(x.head(n0));
    }
    for (int k = 0; k < s; ++k) {
      const auto& side = sides[k];
      const double xi = x[side.index];
      const double z = x[n0 + k];
      h[m0 + k] = (side.upper ? xi - side.value : side.value - xi) + z * z;
    }
    return h;
  };
  p.jacobian = [base, sides, n0, m0, s](const Vector& x) -> Matrix {
    Matrix J = Matrix::Zero(m0 + s, n0 + s);
    if (m0 > 0) {
      J.topLeftCorner(m0, n0) = base.jacobian_at(x.head(n0));
    }
    for (int k = 0; k < s; ++k) {
      J(m0 + k, sides[k].index) = sides[k].upper ? 1.0 : -1.0;
      J(m0 + k, n0 + k) = 2.0 * x[n0 + k];
    }
    return J;
  };
  if (base.lagrangian_hessian || base.grad) {
    p.lagrangian_hessian = [base, n0, m0, s](const Vector& x, const Vector& lambda) -> Matrix {
      Matrix H = Matrix::Zero(n0 + s, n0 + s);
      H.topLeftCorner(n0, n0) = base.hessian_at(x.head(n0), lambda.head(m0));
      for (int k = 0; k < s; ++k) {
        H(n0 + k, n0 + k) = 2.0 * lambda[m0 + k];
      }
      return H;
    };
  }
  return p;
}

}  // namespace lagflow
