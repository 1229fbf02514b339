#pragma once

#include "polylip/linalg.hpp"

namespace polylip {

struct NnlsResult {
  Vec x;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||E x - f|| subject to x >= 0.
NnlsResult nnls(const Mat& e, const Vec& f);

struct LdpResult {
  bool feasible = false;
  Vec y;
};

/// Least-distance programming: min ||y|| s.t. G y >= h, via the classic
/// reduction to NNLS.
LdpResult least_distance(const Mat& g, const Vec& h);

}  // namespace polylip
