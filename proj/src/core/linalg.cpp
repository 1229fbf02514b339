#include "polylip/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

double rank_threshold(const Eigen::VectorXd& singular) {
  double top = singular.size() > 0 ? singular(0) : 0.0;
  return tolerance().tau() * std::max(1.0, top);
}

}  // namespace

Mat null_space(const Mat& a, int cols) {
  if (a.rows() == 0 || cols == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  double thr = rank_threshold(s);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Mat column_basis(const Mat& a) {
  if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU);
  const Eigen::VectorXd& s = svd.singularValues();
  double thr = rank_threshold(s);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return svd.matrixU().leftCols(rank);
}

Mat complement_basis(const Mat& basis, int n) {
  if (basis.cols() == 0) return Mat::Identity(n, n);
  return null_space(basis.transpose(), n);
}

int numeric_rank(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const Eigen::VectorXd& s = svd.singularValues();
  double thr = rank_threshold(s);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return rank;
}

Mat vstack(const Mat& top, const Mat& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  Mat out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

Mat hstack(const Mat& left, const Mat& right) {
  if (left.cols() == 0) return right;
  if (right.cols() == 0) return left;
  Mat out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

Vec vcat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

Mat select_rows(const Mat& a, const std::vector<int>& rows) {
  Mat out(static_cast<int>(rows.size()), a.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<int>(i)) = a.row(rows[i]);
  return out;
}

Vec select_entries(const Vec& v, const std::vector<int>& idx) {
  Vec out(static_cast<int>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<int>(i)) = v(idx[i]);
  return out;
}

Mat columns_of(const std::vector<Vec>& vs, int n) {
  Mat out(n, static_cast<int>(vs.size()));
  for (size_t i = 0; i < vs.size(); ++i) out.col(static_cast<int>(i)) = vs[i];
  return out;
}

std::vector<Vec> columns(const Mat& a) {
  std::vector<Vec> out;
  out.reserve(a.cols());
  for (int j = 0; j < a.cols(); ++j) out.emplace_back(a.col(j));
  return out;
}

bool all_finite(const Mat& a) { return a.allFinite(); }

}  // namespace polylip
