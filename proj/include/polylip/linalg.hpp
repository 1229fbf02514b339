#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace polylip {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Orthonormal basis (columns) of the null space of `a` (a has `cols` columns).
Mat null_space(const Mat& a, int cols);

// Orthonormal basis (columns) of the span of the columns of `a`.
Mat column_basis(const Mat& a);

// Orthonormal basis of the orthogonal complement of span(basis) in R^n.
Mat complement_basis(const Mat& basis, int n);

int numeric_rank(const Mat& a);

// Stacks matrices with the same column count.
Mat vstack(const Mat& top, const Mat& bottom);
Mat hstack(const Mat& left, const Mat& right);
Vec vcat(const Vec& a, const Vec& b);

// Rows of `a` listed in `rows`.
Mat select_rows(const Mat& a, const std::vector<int>& rows);
Vec select_entries(const Vec& v, const std::vector<int>& idx);

// Matrix whose columns are the given vectors (n rows even when empty).
Mat columns_of(const std::vector<Vec>& vs, int n);
std::vector<Vec> columns(const Mat& a);

bool all_finite(const Mat& a);

}  // namespace polylip
