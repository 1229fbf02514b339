#include "polylip/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

Vec solve_passive(const Mat& e, const Vec& f, const std::vector<bool>& passive) {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(passive.size()); ++j)
    if (passive[j]) idx.push_back(j);
  Vec z = Vec::Zero(e.cols());
  if (idx.empty()) return z;
  Mat sub(e.rows(), static_cast<int>(idx.size()));
  for (int k = 0; k < static_cast<int>(idx.size()); ++k) sub.col(k) = e.col(idx[k]);
  Vec s = sub.completeOrthogonalDecomposition().solve(f);
  for (int k = 0; k < static_cast<int>(idx.size()); ++k) z(idx[k]) = s(k);
  return z;
}

}  // namespace

NnlsResult nnls(const Mat& e, const Vec& f) {
  const int n = static_cast<int>(e.cols());
  NnlsResult out;
  out.x = Vec::Zero(n);
  std::vector<bool> passive(n, false);
  if (n == 0 || e.rows() == 0) {
    out.residual_norm = f.norm();
    out.converged = true;
    return out;
  }
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff()) * std::max(1.0, f.norm());
  const double eps = 1e-13 * scale;
  const int max_outer = 3 * n + 30;
  Vec& x = out.x;
  int outer = 0;
  for (; outer < max_outer; ++outer) {
    Vec w = e.transpose() * (f - e * x);
    int t = -1;
    double best = eps;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        t = j;
      }
    }
    if (t < 0) break;
    passive[t] = true;
    for (int inner = 0; inner < 3 * n + 30; ++inner) {
      Vec z = solve_passive(e, f, passive);
      bool ok = true;
      for (int j = 0; j < n; ++j)
        if (passive[j] && z(j) <= 0) ok = false;
      if (ok) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (int j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0) {
          double denom = x(j) - z(j);
          if (denom > 0) alpha = std::min(alpha, x(j) / denom);
        }
      }
      x = x + alpha * (z - x);
      for (int j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= eps) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  for (int j = 0; j < n; ++j) x(j) = std::max(0.0, x(j));
  out.converged = outer < max_outer;
  out.residual_norm = (e * x - f).norm();
  return out;
}

LdpResult least_distance(const Mat& g, const Vec& h) {
  const int m = static_cast<int>(g.rows());
  const int d = static_cast<int>(g.cols());
  LdpResult out;
  if (m == 0) {
    out.feasible = true;
    out.y = Vec::Zero(d);
    return out;
  }
  Mat e(d + 1, m);
  e.topRows(d) = g.transpose();
  e.row(d) = h.transpose();
  Vec f = Vec::Zero(d + 1);
  f(d) = 1.0;
  NnlsResult r = nnls(e, f);
  Vec res = e * r.x - f;
  if (res.norm() <= 1e-12 || std::abs(res(d)) <= 1e-12) {
    out.feasible = false;
    return out;
  }
  out.feasible = true;
  out.y = -res.head(d) / res(d);
  return out;
}

}  // namespace polylip
