#include "polylip/lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "polylip/errors.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr int kMaxPivots = 200000;

// Tableau with an explicit objective row holding z_j - c_j (maximization).
class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Mat::Zero(rows, cols + 1)), obj_(Vec::Zero(cols + 1)), basis_(rows, -1) {}

  Mat& t() { return t_; }
  Vec& obj() { return obj_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(t_.rows()); }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double rhs(int i) const { return t_(i, t_.cols() - 1); }

  void pivot(int r, int c) {
    double p = t_(r, c);
    t_.row(r) /= p;
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    double f = obj_(c);
    if (f != 0.0) obj_ -= f * t_.row(r).transpose();
    basis_[r] = c;
  }

  // Runs Bland-rule iterations over the allowed columns. Returns false when
  // the objective is unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    for (int iter = 0; iter < kMaxPivots; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (allowed[j] && obj_(j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < rows(); ++i) {
        double a = t_(i, enter);
        if (a <= kPivotEps) continue;
        double ratio = rhs(i) / a;
        if (leave < 0 || ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw BudgetError("simplex pivot limit exceeded");
  }

  void drop_row(int r) {
    Mat nt(t_.rows() - 1, t_.cols());
    int k = 0;
    for (int i = 0; i < t_.rows(); ++i)
      if (i != r) nt.row(k++) = t_.row(i);
    t_ = nt;
    basis_.erase(basis_.begin() + r);
  }

 private:
  Mat t_;
  Vec obj_;
  std::vector<int> basis_;
};

}  // namespace

LpResult lp_maximize(const Vec& c, const Mat& a, const Vec& b, const Mat& ceq, const Vec& d) {
  const int n = static_cast<int>(c.size());
  const int k = static_cast<int>(a.rows());
  const int l = static_cast<int>(ceq.rows());
  // Columns: x+ (n), x- (n), slacks (k), artificials (one per row needing it).
  std::vector<int> needs_art;
  for (int i = 0; i < k; ++i)
    if (b(i) < 0) needs_art.push_back(i);
  for (int i = 0; i < l; ++i) needs_art.push_back(k + i);
  const int n_art = static_cast<int>(needs_art.size());
  const int art0 = 2 * n + k;
  const int cols = art0 + n_art;
  Tableau tab(k + l, cols);
  Mat& t = tab.t();
  for (int i = 0; i < k; ++i) {
    double sign = b(i) < 0 ? -1.0 : 1.0;
    t.block(i, 0, 1, n) = sign * a.row(i);
    t.block(i, n, 1, n) = -sign * a.row(i);
    t(i, 2 * n + i) = sign;
    t(i, cols) = sign * b(i);
    if (sign > 0) tab.basis()[i] = 2 * n + i;
  }
  for (int i = 0; i < l; ++i) {
    double sign = d(i) < 0 ? -1.0 : 1.0;
    t.block(k + i, 0, 1, n) = sign * ceq.row(i);
    t.block(k + i, n, 1, n) = -sign * ceq.row(i);
    t(k + i, cols) = sign * d(i);
  }
  for (int j = 0; j < n_art; ++j) {
    int r = needs_art[j];
    t(r, art0 + j) = 1.0;
    tab.basis()[r] = art0 + j;
  }

  double scale = 1.0;
  if (k > 0) scale = std::max(scale, b.cwiseAbs().maxCoeff());
  if (l > 0) scale = std::max(scale, d.cwiseAbs().maxCoeff());

  LpResult result;
  std::vector<bool> allowed(cols, true);
  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials).
    Vec& obj = tab.obj();
    obj.setZero();
    for (int j = 0; j < n_art; ++j) obj(art0 + j) = 1.0;
    for (int i = 0; i < tab.rows(); ++i)
      if (tab.basis()[i] >= art0) obj -= t.row(i).transpose();
    tab.optimize(allowed);
    double infeas = -obj(cols);
    if (infeas > tolerance().tau() * scale) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive remaining artificials out of the basis.
    for (int i = tab.rows() - 1; i >= 0; --i) {
      if (tab.basis()[i] < art0) continue;
      int enter = -1;
      double best = kPivotEps;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(t(i, j)) > best) {
          best = std::abs(t(i, j));
          enter = j;
        }
      }
      if (enter >= 0) {
        tab.pivot(i, enter);
      } else {
        tab.drop_row(i);
      }
    }
    for (int j = art0; j < cols; ++j) allowed[j] = false;
  }

  // Phase 2.
  Vec cost = Vec::Zero(cols);
  cost.head(n) = c;
  cost.segment(n, n) = -c;
  Vec& obj = tab.obj();
  obj.setZero();
  obj.head(cols) = -cost;
  for (int i = 0; i < tab.rows(); ++i) {
    int bj = tab.basis()[i];
    if (cost(bj) != 0.0) obj += cost(bj) * t.row(i).transpose();
  }
  if (!tab.optimize(allowed)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  Vec xfull = Vec::Zero(cols);
  for (int i = 0; i < tab.rows(); ++i) xfull(tab.basis()[i]) = tab.rhs(i);
  result.status = LpStatus::kOptimal;
  result.x = xfull.head(n) - xfull.segment(n, n);
  result.value = c.dot(result.x);
  return result;
}

LpResult lp_feasible_point(const Mat& a, const Vec& b, const Mat& ceq, const Vec& d) {
  int n = static_cast<int>(a.rows() > 0 ? a.cols() : ceq.cols());
  return lp_maximize(Vec::Zero(n), a, b, ceq, d);
}

}  // namespace polylip
