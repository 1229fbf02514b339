#pragma once

#include "polylip/linalg.hpp"

namespace polylip {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Vec x;
  double value = 0.0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

/// Dense two-phase simplex (Bland's rule) for
///   maximize c'x  s.t.  A x <= b,  C x = d,  x free.
/// Sized for desk-scale problems (tens of rows and columns).
LpResult lp_maximize(const Vec& c, const Mat& a, const Vec& b, const Mat& ceq, const Vec& d);

/// Feasibility only; returns a feasible point when one exists.
LpResult lp_feasible_point(const Mat& a, const Vec& b, const Mat& ceq, const Vec& d);

}  // namespace polylip
