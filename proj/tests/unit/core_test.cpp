#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "polylip/linalg.hpp"
#include "polylip/lp.hpp"
#include "polylip/nnls.hpp"

using namespace polylip;

namespace {

// Max of c'x over a bounded {Ax <= b} by trying every square subsystem.
double brute_force_max(const Vec& c, const Mat& a, const Vec& b) {
  int n = static_cast<int>(a.cols());
  int k = static_cast<int>(a.rows());
  double best = -kInf;
  std::vector<int> idx(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Mat sub = select_rows(a, idx);
      if (std::abs(sub.determinant()) < 1e-10) return;
      Vec x = sub.lu().solve(select_entries(b, idx));
      if (((a * x - b).array() <= 1e-9).all()) best = std::max(best, c.dot(x));
      return;
    }
    for (int i = start; i < k; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST(Lp, BoxMaximum) {
  Mat a(4, 2);
  a << 1, 0, -1, 0, 0, 1, 0, -1;
  Vec b(4);
  b << 1, 0, 2, 1;
  Vec c(2);
  c << 1, 1;
  LpResult r = lp_maximize(c, a, b, Mat(0, 2), Vec(0));
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.value, 3.0, 1e-9);
}

TEST(Lp, DetectsInfeasibleAndUnbounded) {
  Mat a(2, 1);
  a << 1, -1;
  Vec b(2);
  b << -1, -1;
  EXPECT_EQ(lp_maximize(Vec::Ones(1), a, b, Mat(0, 1), Vec(0)).status, LpStatus::kInfeasible);
  Mat a2(1, 1);
  a2 << -1;
  Vec b2(1);
  b2 << 0;
  EXPECT_EQ(lp_maximize(Vec::Ones(1), a2, b2, Mat(0, 1), Vec(0)).status, LpStatus::kUnbounded);
}

TEST(Lp, EqualityConstraints) {
  Mat a(3, 3);
  a = -Mat::Identity(3, 3);
  Vec b = Vec::Zero(3);
  Mat c(1, 3);
  c << 1, 1, 1;
  Vec d(1);
  d << 1;
  Vec obj(3);
  obj << 1, 3, 2;
  LpResult r = lp_maximize(obj, a, b, c, d);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.value, 3.0, 1e-9);
  EXPECT_NEAR(r.x(1), 1.0, 1e-9);
}

TEST(Lp, RandomPolytopesMatchVertexEnumeration) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + trial % 3;
    int k = n + 3 + trial % 4;
    Mat a(k, n);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    Vec b(k);
    for (int i = 0; i < k; ++i) b(i) = 0.5 + std::abs(g(rng));
    // Bound the set with a box.
    Mat box(2 * n, n);
    box << Mat::Identity(n, n), -Mat::Identity(n, n);
    a = vstack(a, box);
    b = vcat(b, Vec::Constant(2 * n, 3.0));
    Vec c(n);
    for (int j = 0; j < n; ++j) c(j) = g(rng);
    LpResult r = lp_maximize(c, a, b, Mat(0, n), Vec(0));
    ASSERT_TRUE(r.optimal());
    EXPECT_NEAR(r.value, brute_force_max(c, a, b), 1e-8);
    EXPECT_LE((a * r.x - b).maxCoeff(), 1e-9);
  }
}

TEST(Nnls, SatisfiesKktConditions) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    int rows = 2 + trial % 5;
    int cols = 1 + trial % 6;
    Mat e(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) e(i, j) = g(rng);
    Vec f(rows);
    for (int i = 0; i < rows; ++i) f(i) = g(rng);
    NnlsResult r = nnls(e, f);
    ASSERT_TRUE(r.converged);
    Vec w = e.transpose() * (f - e * r.x);
    for (int j = 0; j < cols; ++j) {
      EXPECT_GE(r.x(j), 0.0);
      EXPECT_LE(w(j), 1e-8);
      if (r.x(j) > 1e-9) EXPECT_NEAR(w(j), 0.0, 1e-8);
    }
  }
}

TEST(Ldp, NearestPointOfHalfspaceIntersection) {
  // y1 >= 1, y2 >= 2 gives (1,2).
  Mat g = Mat::Identity(2, 2);
  Vec h(2);
  h << 1, 2;
  LdpResult r = least_distance(g, h);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.y(0), 1.0, 1e-10);
  EXPECT_NEAR(r.y(1), 2.0, 1e-10);
  // y >= 1 and -y >= 0 is empty.
  Mat g2(2, 1);
  g2 << 1, -1;
  Vec h2(2);
  h2 << 1, 0;
  EXPECT_FALSE(least_distance(g2, h2).feasible);
}
