#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "polylip/errors.hpp"
#include "polylip/geometry.hpp"
#include "test_util.hpp"

using namespace polylip;
using testutil::gaussian_vec;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

HPolyhedron unit_square() { return HPolyhedron::box(Vec::Zero(2), Vec::Ones(2)); }

}  // namespace

TEST(Polar, OrthantAndZero) {
  PolyCone k = PolyCone::orthant(2);
  PolyCone p = k.polar();
  EXPECT_TRUE(p.contains(v2(-1, -2)));
  EXPECT_FALSE(p.contains(v2(1, -2)));
  EXPECT_TRUE(p.equals(PolyCone::from_g(2, {v2(-1, 0), v2(0, -1)}, {})));
  PolyCone z = PolyCone::zero(3).polar();
  EXPECT_TRUE(z.equals(PolyCone::whole(3)));
}

TEST(Polar, TwoRayConeAgainstGrid) {
  PolyCone k = PolyCone::from_g(2, {v2(1, 1), v2(1, -1)}, {});
  PolyCone p = k.polar();
  EXPECT_TRUE(p.equals(PolyCone::from_g(2, {v2(-1, 1), v2(-1, -1)}, {})));
  // v is in the polar iff <v, x> <= 0 on a dense set of rays of K.
  for (int i = 0; i < 72; ++i) {
    double th = 2 * M_PI * i / 72.0 + 0.01;
    Vec v = v2(std::cos(th), std::sin(th));
    bool in = true;
    for (int j = 0; j <= 200; ++j) {
      double s = -1.0 + 2.0 * j / 200.0;
      if (v.dot(v2(1, s)) > 1e-12) in = false;
    }
    EXPECT_EQ(in, p.contains(v)) << th;
  }
}

TEST(Polar, InvolutionOnRandomCones) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 3;
    PolyCone k = testutil::random_cone(rng, n);
    PolyCone pp = k.polar().polar();
    EXPECT_TRUE(pp.equals(k)) << "case " << t;
  }
}

TEST(Cone, HAndGFormsDescribeTheSameSet) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + t % 3;
    Mat a = testutil::gaussian_mat(rng, n + 2, n);
    PolyCone h = PolyCone::from_h(n, a, Mat(0, n));
    PolyCone g = PolyCone::from_g(n, h.rays(), columns(h.lineality()));
    for (int s = 0; s < 30; ++s) {
      Vec v = gaussian_vec(rng, n);
      EXPECT_EQ(h.contains(v), g.contains(v));
    }
  }
}

TEST(TangentCone, HalflineAndHalfspace) {
  Mat a(1, 1);
  a << -1;
  HPolyhedron rplus(a, Vec::Zero(1));
  EXPECT_TRUE(tangent_cone(rplus, Vec::Zero(1)).equals(PolyCone::from_g(1, {Vec::Ones(1)}, {})));
  EXPECT_TRUE(tangent_cone(rplus, Vec::Ones(1)).equals(PolyCone::whole(1)));
  Vec av = v3(1, 2, -1);
  HPolyhedron half(Mat(av.transpose()), Vec::Constant(1, 3.0));
  Vec x = av * (3.0 / av.squaredNorm());
  PolyCone t = tangent_cone(half, x);
  EXPECT_TRUE(t.equals(PolyCone::from_h(3, Mat(av.transpose()), Mat(0, 3))));
  EXPECT_THROW(tangent_cone(rplus, -Vec::Ones(1)), DomainError);
}

TEST(NormalCone, InteriorAndLcpDomain) {
  EXPECT_TRUE(normal_cone_convex(unit_square(), v2(0.5, 0.5)).is_zero());
  // dom S = R_+ x R.
  Mat a(1, 2);
  a << -1, 0;
  HPolyhedron dom(a, Vec::Zero(1));
  for (double t : {-3.0, 0.0, 2.5}) {
    PolyCone n = normal_cone_convex(dom, v2(0, t));
    EXPECT_TRUE(n.equals(PolyCone::from_g(2, {v2(-1, 0)}, {})));
  }
}

TEST(NormalCone, RandomPolytopeVertexMaximizes) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    HPolyhedron p = testutil::random_polytope(rng, 3, 4);
    auto verts = testutil::brute_vertices(p.A(), p.b());
    const Vec& x = verts[t % verts.size()];
    PolyCone n = normal_cone_convex(p, x);
    for (int s = 0; s < 50; ++s) {
      Vec v = gaussian_vec(rng, 3);
      double best = -kInf;
      for (auto& w : verts) best = std::max(best, v.dot(w));
      bool maximizes = v.dot(x) >= best - 1e-9;
      EXPECT_EQ(maximizes, n.contains(v));
    }
    for (const Vec& r : n.rays()) {
      double best = -kInf;
      for (auto& w : verts) best = std::max(best, r.dot(w));
      EXPECT_NEAR(r.dot(x), best, 1e-9);
    }
  }
}

TEST(NormalCone, MutuallyPolarWithTangentCone) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 3;
    HPolyhedron p = testutil::random_polytope(rng, n, 3);
    auto fs = faces(p);
    const Face& f = fs[t % fs.size()];
    PolyCone tc = tangent_cone(p, f.relint);
    PolyCone nc = normal_cone_convex(p, f.relint);
    EXPECT_TRUE(tc.polar().equals(nc)) << t;
    EXPECT_TRUE(nc.polar().equals(tc)) << t;
  }
}

TEST(Faces, SquareAndOrthant) {
  auto fs = faces(unit_square());
  EXPECT_EQ(fs.size(), 9u);
  int vertices = 0, edges = 0;
  for (auto& f : fs) {
    if (f.dim() == 0) ++vertices;
    if (f.dim() == 1) ++edges;
  }
  EXPECT_EQ(vertices, 4);
  EXPECT_EQ(edges, 4);
  HPolyhedron orth(-Mat::Identity(2, 2), Vec::Zero(2));
  EXPECT_EQ(faces(orth).size(), 4u);
}

TEST(Faces, CutCubeMatchesVertexEnumeration) {
  Mat a(7, 3);
  a << Mat::Identity(3, 3), -Mat::Identity(3, 3), 1, 1, 1;
  Vec b(7);
  b << 1, 1, 1, 0, 0, 0, 2.5;
  HPolyhedron p(a, b);
  auto verts = testutil::brute_vertices(p.A(), p.b());
  // Oracle: counts from the vertex list.
  auto tight = [&](const Vec& x) {
    std::vector<int> t;
    for (int i = 0; i < p.A().rows(); ++i)
      if (std::abs(p.A().row(i).dot(x) - p.b()(i)) < 1e-9) t.push_back(i);
    return t;
  };
  int edges = 0;
  for (size_t i = 0; i < verts.size(); ++i)
    for (size_t j = i + 1; j < verts.size(); ++j) {
      auto ti = tight(verts[i]), tj = tight(verts[j]);
      std::vector<int> c;
      std::set_intersection(ti.begin(), ti.end(), tj.begin(), tj.end(), std::back_inserter(c));
      if (numeric_rank(select_rows(p.A(), c)) == 2) ++edges;
    }
  int facets = 0;
  for (int i = 0; i < p.A().rows(); ++i) {
    std::vector<Vec> on;
    for (auto& v : verts)
      if (std::abs(p.A().row(i).dot(v) - p.b()(i)) < 1e-9) on.push_back(v);
    if (on.size() >= 3) {
      Mat d(3, static_cast<int>(on.size()) - 1);
      for (size_t k = 1; k < on.size(); ++k) d.col(static_cast<int>(k) - 1) = on[k] - on[0];
      if (numeric_rank(d) == 2) ++facets;
    }
  }
  EXPECT_EQ(verts.size(), 10u);
  auto fs = faces(p);
  EXPECT_EQ(static_cast<int>(fs.size()), 1 + facets + edges + static_cast<int>(verts.size()));
  int v0 = 0;
  for (auto& f : fs)
    if (f.dim() == 0) ++v0;
  EXPECT_EQ(v0, 10);
}

TEST(Faces, RelativeInteriorsPartition) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 2;
    HPolyhedron p = testutil::random_polytope(rng, n, 2);
    auto verts = testutil::brute_vertices(p.A(), p.b());
    auto fs = faces(p);
    // Mix interior points with points snapped to faces.
    Vec x = testutil::point_in_polytope(rng, verts);
    if (t % 3 == 1) x = verts[t % verts.size()];
    if (t % 3 == 2) x = 0.5 * (verts[0] + verts[t % verts.size()]);
    int hits = 0;
    for (auto& f : fs)
      if (f.relint_contains(x)) ++hits;
    EXPECT_EQ(hits, 1) << t;
    for (auto& f : fs) EXPECT_TRUE(f.relint_contains(f.relint));
  }
}

TEST(FaceOfRelint, SquareCases) {
  HPolyhedron sq = unit_square();
  EXPECT_TRUE(face_of_relint(sq, v2(0.3, 0.6)).active.empty());
  Face edge = face_of_relint(sq, v2(1.0, 0.5));
  EXPECT_EQ(edge.active.size(), 1u);
  EXPECT_EQ(edge.dim(), 1);
  Face corner = face_of_relint(sq, v2(1.0, 1.0));
  EXPECT_EQ(corner.dim(), 0);
  EXPECT_THROW(face_of_relint(sq, v2(2, 0)), DomainError);
}

TEST(ProjectCone, Examples) {
  PolyCone k = PolyCone::from_g(1, {Vec::Ones(1)}, {});
  EXPECT_NEAR(project_cone(k, Vec::Constant(1, -3.0)).p(0), 0.0, 1e-12);
  PolyCone q = PolyCone::orthant(2).polar();
  Vec v = v2(-1, -2);
  EXPECT_NEAR((project_cone(q, v).p - v).norm(), 0.0, 1e-12);
  // Halfspace {<a,w> <= 0}: reflection onto the hyperplane, checked on a grid.
  Vec a = v2(1, 2);
  PolyCone h = PolyCone::from_h(2, Mat(a.transpose()), Mat(0, 2));
  Vec w = v2(2, 1);
  Vec p = project_cone(h, w).p;
  EXPECT_NEAR((p - (w - a * (a.dot(w) / a.squaredNorm()))).norm(), 0.0, 1e-12);
  double best = kInf;
  for (int i = -400; i <= 400; ++i) {
    for (int j = -400; j <= 400; ++j) {
      Vec g = v2(i * 0.01, j * 0.01);
      if (a.dot(g) <= 0) best = std::min(best, (g - w).norm());
    }
  }
  EXPECT_NEAR((p - w).norm(), best, 0.01);
}

TEST(ProjectCone, MoreauDecomposition) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 4;
    PolyCone k = testutil::random_cone(rng, n);
    Vec v = gaussian_vec(rng, n);
    Vec p = project_cone(k, v).p;
    Vec q = project_cone(k.polar(), v).p;
    EXPECT_NEAR((p + q - v).norm(), 0.0, 1e-9) << t;
    EXPECT_NEAR(p.dot(q), 0.0, 1e-9) << t;
    EXPECT_TRUE(k.contains(p));
    EXPECT_TRUE(k.polar().contains(q));
  }
}

TEST(ProjectCone, NormMatchesMaximalTangentAscent) {
  // |proj_T(x*)| = max(max over unit w in T of <x*, w>, 0).
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 2;
    HPolyhedron p = testutil::random_polytope(rng, n, 3);
    auto fs = faces(p);
    PolyCone tc = tangent_cone(p, fs[t % fs.size()].relint);
    Vec xs = gaussian_vec(rng, n);
    double lhs = project_cone(tc, xs).p.norm();
    double best = 0.0;
    // Sparse nonnegative combinations of generators reach every face of T.
    std::vector<Vec> gens = tc.rays();
    for (int j = 0; j < tc.lineality().cols(); ++j) {
      gens.push_back(tc.lineality().col(j));
      gens.push_back(-tc.lineality().col(j));
    }
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    std::uniform_real_distribution<double> wt(0.0, 1.0);
    for (int s = 0; s < 4000 && !gens.empty(); ++s) {
      Vec w = Vec::Zero(n);
      int terms = 1 + s % n;
      for (int q = 0; q < terms; ++q) w += wt(rng) * gens[pick(rng)];
      if (w.norm() < 1e-12) continue;
      w.normalize();
      ASSERT_TRUE(tc.contains(w));
      best = std::max(best, xs.dot(w));
    }
    // Local refinement by random moves that stay in T (membership only).
    Vec cur = Vec::Zero(n);
    for (int s = 0; s < 4000 && !gens.empty(); ++s) {
      Vec w = gens[s % gens.size()];
      if (xs.dot(w) > xs.dot(cur)) cur = w;
    }
    double step = 0.2;
    int fails = 0;
    for (int s = 0; s < 6000 && cur.norm() > 0.5; ++s) {
      Vec w = cur + step * gaussian_vec(rng, n);
      w.normalize();
      if (tc.contains(w) && xs.dot(w) > xs.dot(cur)) {
        cur = w;
        fails = 0;
      } else if (++fails > 40) {
        step *= 0.5;
        fails = 0;
      }
    }
    if (cur.norm() > 0.5) best = std::max(best, xs.dot(cur));
    for (const Vec& r : tc.rays()) best = std::max(best, xs.dot(r));
    EXPECT_LE(best, lhs + 1e-7);
    EXPECT_NEAR(best, lhs, 1e-4 * std::max(1.0, xs.norm()));
  }
}

TEST(ProjectPolyhedron, AgreesWithEnumeration) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 3;
    HPolyhedron p = testutil::random_polytope(rng, n, 3);
    Vec v = 3.0 * gaussian_vec(rng, n);
    Vec x = project_polyhedron(p, v);
    Vec y = project_polyhedron_enumerative(p, v);
    EXPECT_NEAR((x - y).norm(), 0.0, 1e-8) << t;
  }
  HPolyhedron sq = unit_square();
  EXPECT_NEAR((project_polyhedron(sq, v2(0.2, 0.7)) - v2(0.2, 0.7)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((project_polyhedron(sq, v2(3, 4)) - v2(1, 1)).norm(), 0.0, 1e-12);
  EXPECT_THROW(project_polyhedron(HPolyhedron::empty_set(2), v2(0, 0)), DomainError);
}

TEST(Excess, Conventions) {
  HPolyhedron b = HPolyhedron::point(Vec::Zero(2));
  EXPECT_EQ(excess(HPolyhedron::empty_set(2), b), 0.0);
  EXPECT_NEAR(excess(unit_square(), b), std::sqrt(2.0), 1e-12);
  Mat a(1, 2);
  a << 0, -1;
  HPolyhedron upper(a, Vec::Zero(1));
  EXPECT_EQ(excess(upper, b), kInf);
  // Recession direction of A inside that of B: finite.
  Mat a2(2, 2);
  a2 << 0, -1, 1, 0;
  HPolyhedron strip(a2, Vec::Constant(2, 1.0));
  EXPECT_TRUE(std::isfinite(excess(upper.intersect(HPolyhedron::box(v2(-1, -5), v2(1, 5))), strip)));
}

TEST(Excess, FaceAgainstHorizonFaceBySampling) {
  // D = conv{(0,0),(1,2),(3,1)} + cone{(1,0)}; x = (0,1).
  VRep vr;
  vr.n = 2;
  vr.vertices = {v2(0, 0), v2(1, 2), v2(3, 1)};
  vr.rays = {v2(1, 0)};
  vr.lineality = Mat(2, 0);
  HPolyhedron d = vrep_to_hrep(vr);
  Vec x = v2(0, 1);
  SupportResult fd = support(d, x);
  HPolyhedron dinf = HPolyhedron(horizon_cone(d).ineq(), Vec::Zero(horizon_cone(d).ineq().rows()));
  SupportResult fi = support(dinf, x);
  ASSERT_TRUE(fd.face && fi.face);
  double e = excess(fd.face->polyhedron(), fi.face->polyhedron());
  // F_{D,x} = {(s, 2) : s >= 1}; F_{D^inf,x} = R_+ (1,0); sample sup distance.
  double best = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    Vec z = v2(1.0 + i * 0.01, 2.0);
    best = std::max(best, distance(z, fi.face->polyhedron()));
  }
  EXPECT_NEAR(e, best, 1e-9);
  EXPECT_NEAR(e, 2.0, 1e-9);
}

TEST(Support, Examples) {
  HPolyhedron box = HPolyhedron::box(-Vec::Ones(2), Vec::Ones(2));
  SupportResult r = support(box, v2(1, 1));
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  ASSERT_TRUE(r.face);
  EXPECT_EQ(r.face->dim(), 0);
  EXPECT_NEAR((r.face->relint - v2(1, 1)).norm(), 0.0, 1e-9);
  SupportResult z = support(box, v2(0, 0));
  EXPECT_EQ(z.value, 0.0);
  EXPECT_EQ(z.face->dim(), 2);
  Mat a(3, 2);
  a << 1, 0, -1, 0, 0, -1;
  HPolyhedron up(a, Vec::Ones(3));
  SupportResult u = support(up, v2(0, 1));
  EXPECT_EQ(u.value, kInf);
  EXPECT_FALSE(u.face.has_value());
}

TEST(Horizon, BoundedAndRay) {
  EXPECT_TRUE(horizon_cone(unit_square()).is_zero());
  Mat a(2, 2);
  a << -1, 0, 0, -1;
  HPolyhedron shifted = HPolyhedron(a, v2(-1, 0)).intersect(HPolyhedron(Mat(v2(0, 1).transpose()), Vec::Ones(1)));
  PolyCone h = horizon_cone(shifted);
  EXPECT_TRUE(h.equals(PolyCone::from_g(2, {v2(1, 0)}, {})));
  // Definition check: lambda_k x_k with x_k far out in P.
  Vec xk = v2(1e12, 0.5);
  EXPECT_TRUE(h.contains(xk / 1e12));
}

TEST(VRep, CubeAndOrthant) {
  VRep c = hrep_to_vrep(HPolyhedron::box(Vec::Zero(3), Vec::Ones(3)));
  EXPECT_EQ(c.vertices.size(), 8u);
  EXPECT_TRUE(c.rays.empty());
  VRep o = hrep_to_vrep(HPolyhedron(-Mat::Identity(3, 3), Vec::Zero(3)));
  EXPECT_EQ(o.vertices.size(), 1u);
  EXPECT_EQ(o.rays.size(), 3u);
  for (auto& r : o.rays) EXPECT_NEAR(r.maxCoeff(), 1.0, 1e-12);
}

TEST(VRep, RandomRoundTrip) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 40; ++t) {
    int n = 4;
    HPolyhedron p = testutil::random_polytope(rng, n, 4);
    if (t % 2) {
      // Drop the box rows on one side to get an unbounded instance.
      Mat a = p.A().topRows(p.num_ineq() - 1);
      Vec b = p.b().head(p.num_ineq() - 1);
      p = HPolyhedron(a, b);
    }
    HPolyhedron q = vrep_to_hrep(hrep_to_vrep(p));
    for (int s = 0; s < 200; ++s) {
      Vec x = 2.5 * gaussian_vec(rng, n);
      EXPECT_EQ(p.contains(x), q.contains(x)) << t;
    }
  }
}

TEST(ConeUnion, PrunesContainedPieces) {
  ConeUnion u(2);
  u.add(PolyCone::from_g(2, {v2(1, 0)}, {}));
  u.add(PolyCone::orthant(2));
  EXPECT_EQ(u.pieces().size(), 1u);
  u.add(PolyCone::from_g(2, {v2(0, 1)}, {}));
  EXPECT_EQ(u.pieces().size(), 1u);
  u.add(PolyCone::from_g(2, {v2(-1, 0)}, {}));
  EXPECT_EQ(u.pieces().size(), 2u);
  EXPECT_TRUE(u.contains(v2(-3, 0)));
  EXPECT_FALSE(u.contains(v2(-3, 1)));
}

TEST(HPolyhedron, Canonicalization) {
  Mat a(4, 2);
  a << 1, 0, 2, 0, 0, 0, 0, 1;
  Vec b(4);
  b << 3, 4, 1, 1;
  HPolyhedron p(a, b);
  EXPECT_EQ(p.num_ineq(), 2);
  EXPECT_NEAR(p.b()(0), 2.0, 1e-12);
  Mat z(1, 2);
  z << 0, 0;
  EXPECT_TRUE(HPolyhedron(z, Vec::Constant(1, -1.0)).empty());
  EXPECT_TRUE(HPolyhedron::empty_set(3).empty());
  EXPECT_FALSE(unit_square().empty());
  EXPECT_EQ(unit_square().affine_dim(), 2);
  EXPECT_EQ(HPolyhedron::point(Vec::Ones(3)).affine_dim(), 0);
}

TEST(ConeUnion, ExactCoverOfSplitQuadrant) {
  ConeUnion split(2);
  split.add(PolyCone::from_g(2, {v2(1, 0), v2(1, 1)}, {}));
  split.add(PolyCone::from_g(2, {v2(1, 1), v2(0, 1)}, {}));
  ConeUnion pos(2, {PolyCone::from_g(2, {v2(1, 0), v2(0, 1)}, {})});
  EXPECT_TRUE(split.covers(pos));
  EXPECT_TRUE(pos.covers(split));
  EXPECT_TRUE(split.equals(pos));
  ConeUnion partial(2);
  partial.add(PolyCone::from_g(2, {v2(1, 0), v2(1, 1)}, {}));
  partial.add(PolyCone::from_g(2, {v2(1, 2), v2(0, 1)}, {}));
  EXPECT_FALSE(partial.covers(pos));
  EXPECT_TRUE(pos.covers(partial));
}

TEST(Faces, ConeFacesMatchPolyhedralEnumeration) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + trial % 3;
    std::vector<Vec> gens;
    for (int j = 0; j < n + 2; ++j) gens.push_back(gaussian_vec(rng, n));
    std::vector<Vec> lin;
    if (trial % 4 == 0) lin.push_back(gaussian_vec(rng, n));
    PolyCone k = PolyCone::from_g(n, gens, lin);
    HPolyhedron p(k.ineq(), Vec::Zero(k.ineq().rows()), k.eq(), Vec::Zero(k.eq().rows()));
    auto ref = faces(p);
    auto got = k.faces();
    ASSERT_EQ(got.size(), ref.size());
    std::multiset<int> dr, dg;
    for (auto& f : ref) dr.insert(f.dim());
    for (auto& f : got) dg.insert(f.span_dim());
    EXPECT_EQ(dr, dg);
    for (size_t i = 1; i < got.size(); ++i) EXPECT_GE(got[i - 1].span_dim(), got[i].span_dim());
    for (auto& f : got) {
      Vec z = f.relint_point();
      EXPECT_TRUE(k.contains(z));
      EXPECT_TRUE(f.contains(z));
    }
  }
}
