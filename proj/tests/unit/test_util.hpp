#pragma once

#include <functional>
#include <random>
#include <vector>

#include "polylip/geometry.hpp"

namespace testutil {

using polylip::Mat;
using polylip::Vec;

inline polylip::Vec vec2(double a, double b) {
  polylip::Vec v(2);
  v << a, b;
  return v;
}

inline Vec gaussian_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline Mat gaussian_mat(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> g;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

// Random cone in G-form: a few rays and optionally a lineality direction.
inline polylip::PolyCone random_cone(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> nr(0, n + 2);
  std::vector<Vec> rays, lin;
  int k = nr(rng);
  for (int i = 0; i < k; ++i) rays.push_back(gaussian_vec(rng, n));
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) lin.push_back(gaussian_vec(rng, n));
  return polylip::PolyCone::from_g(n, rays, lin);
}

// Random bounded polytope: random halfspaces around the origin plus a box.
inline polylip::HPolyhedron random_polytope(std::mt19937_64& rng, int n, int extra) {
  Mat a = gaussian_mat(rng, extra, n);
  std::uniform_real_distribution<double> u(0.3, 1.5);
  Vec b(extra);
  for (int i = 0; i < extra; ++i) b(i) = u(rng) * a.row(i).norm();
  Mat box(2 * n, n);
  box << Mat::Identity(n, n), -Mat::Identity(n, n);
  return polylip::HPolyhedron(polylip::vstack(a, box), polylip::vcat(b, Vec::Constant(2 * n, 2.0)));
}

// Vertices by trying every square subsystem (independent of the library's
// double description code).
inline std::vector<Vec> brute_vertices(const Mat& a, const Vec& b) {
  int n = static_cast<int>(a.cols());
  int k = static_cast<int>(a.rows());
  std::vector<Vec> out;
  std::vector<int> idx(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Mat sub = polylip::select_rows(a, idx);
      if (std::abs(sub.determinant()) < 1e-9) return;
      Vec x = sub.lu().solve(polylip::select_entries(b, idx));
      if (((a * x - b).array() > 1e-9).any()) return;
      for (auto& o : out)
        if ((o - x).norm() < 1e-8) return;
      out.push_back(x);
      return;
    }
    for (int i = start; i < k; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

inline Vec point_in_polytope(std::mt19937_64& rng, const std::vector<Vec>& verts) {
  std::gamma_distribution<double> gam(1.0, 1.0);
  Vec w(verts.size());
  for (size_t i = 0; i < verts.size(); ++i) w(i) = gam(rng);
  w /= w.sum();
  Vec x = Vec::Zero(verts[0].size());
  for (size_t i = 0; i < verts.size(); ++i) x += w(i) * verts[i];
  return x;
}

}  // namespace testutil
