#pragma once

#include <limits>
#include <vector>

#include "lagflow/problem.hpp"

namespace lagflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Bound {
  int index = 0;
  double lower = -kInf;
  double upper = kInf;
};

/// Lifts box bounds into equality constraints with squared slacks.
///
/// Each finite side contributes one slack variable z and one constraint,
/// appended in bound order with the lower side first:
///   lower l:  (l - x_i) + z^2 = 0
///   upper u:  (x_i - u) + z^2 = 0
/// Slack variables start at `slack_offset() == base.n` in the lifted vector.
struct SlackTransform {
  ProblemDef base;
  std::vector<Bound> bounds;

  struct Side {
    int index;
    double value;
    bool upper;
  };

  int slack_offset() const { return base.n; }
  std::vector<Side> sides() const;
  int slack_count() const { return static_cast<int>(sides().size()); }

  /// Appends slack values to a base point: sqrt(residual) where the bound
  /// holds, 0 on a violated side.
  Vector lift_point(const Vector& x) const;
  /// First base.n coordinates of a lifted point.
  Vector project(const Vector& lifted) const { return lifted.head(base.n); }
  /// True when every original bound holds within `tol`.
  bool bounds_satisfied(const Vector& x, double tol) const;
};

/// Throws InvalidBound when lower >= upper or an index is out of range.
ProblemDef lift_with_slacks(const SlackTransform& t);

}  // namespace lagflow
