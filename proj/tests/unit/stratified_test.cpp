#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "polylip/errors.hpp"
#include "polylip/lp.hpp"
#include "polylip/oracle.hpp"
#include "polylip/stratified.hpp"
#include "test_util.hpp"

using namespace polylip;

namespace {

Mat paper_m() {
  Mat m(2, 2);
  m << -1, 0, 1, 1;
  return m;
}

// Random point of the LCP graph in the stratum given by `assign`
// (0: x_i = 0 < w_i, 1: x_i > 0 = w_i, 2: both zero).
Vec lcp_point(std::mt19937_64& rng, const Mat& m, const std::vector<int>& assign) {
  int k = static_cast<int>(m.rows());
  std::uniform_real_distribution<double> u(0.2, 2.0);
  Vec x = Vec::Zero(k), w = Vec::Zero(k);
  for (int i = 0; i < k; ++i) {
    if (assign[i] == 0) w(i) = u(rng);
    if (assign[i] == 1) x(i) = u(rng);
  }
  return vcat(w - m * x, x);
}

// The biactive normal-cone formula written out directly: (u*, M^T u* + v*)
// with (u*_i, v*_i) in Omega for every i.
ConeUnion omega_formula(const Mat& m) {
  int k = static_cast<int>(m.rows());
  ConeUnion out(2 * k);
  int combos = 1;
  for (int i = 0; i < k; ++i) combos *= 3;
  Mat lift(2 * k, 2 * k);  // (u, v) -> (u, M^T u + v)
  lift << Mat::Identity(k, k), Mat::Zero(k, k), m.transpose(), Mat::Identity(k, k);
  for (int c = 0; c < combos; ++c) {
    std::vector<Vec> rays, lin;
    int t = c;
    for (int i = 0; i < k; ++i) {
      Vec eu = Vec::Zero(2 * k), ev = Vec::Zero(2 * k);
      eu(i) = 1.0;
      ev(k + i) = 1.0;
      int ch = t % 3;
      t /= 3;
      if (ch == 0) lin.push_back(eu);
      if (ch == 1) lin.push_back(ev);
      if (ch == 2) {
        rays.push_back(-eu);
        rays.push_back(-ev);
      }
    }
    out.add(PolyCone::from_g(2 * k, rays, lin).image(lift));
  }
  return out;
}

// Candidate directions for the proximal sampler: piece normals, random
// combinations of declared generators, and perturbations of them.
std::vector<Vec> candidates(std::mt19937_64& rng, const std::vector<HPolyhedron>& pieces, const Vec& z,
                            const PolyCone& declared) {
  std::vector<Vec> out;
  int n = static_cast<int>(z.size());
  for (const HPolyhedron& p : pieces) {
    if (!p.contains(z)) continue;
    PolyCone nc = normal_cone_convex(p, z);
    std::vector<Vec> gens = nc.rays();
    for (int j = 0; j < nc.lineality().cols(); ++j) {
      gens.push_back(nc.lineality().col(j));
      gens.push_back(-nc.lineality().col(j));
    }
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int s = 0; s < 40 && !gens.empty(); ++s) {
      Vec v = Vec::Zero(n);
      for (auto& g : gens) v += w(rng) * w(rng) * g;
      out.push_back(v);
    }
  }
  std::vector<Vec> dg = declared.rays();
  for (int j = 0; j < declared.lineality().cols(); ++j) {
    dg.push_back(declared.lineality().col(j));
    dg.push_back(-declared.lineality().col(j));
  }
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int s = 0; s < 40 && !dg.empty(); ++s) {
    Vec v = Vec::Zero(n);
    for (auto& g : dg) v += w(rng) * g;
    if (v.norm() < 1e-9) continue;
    out.push_back(v);
    out.push_back(v / v.norm() + 0.05 * testutil::gaussian_vec(rng, n));
  }
  return out;
}

// A direction accepted with distance slack tol lies within angle sqrt(2 tol)
// of the true proximal normal cone.
double angle_slack(const ProximalConfig& cfg) { return 2.0 * std::sqrt(2.0 * cfg.accept_tol); }

bool near(const PolyCone& k, const Vec& v, double slack) { return (v - project_cone(k, v).p).norm() <= slack; }

bool near(const ConeUnion& u, const Vec& v, double slack) {
  for (const PolyCone& k : u.pieces())
    if (near(k, v, slack)) return true;
  return false;
}

void check_regular_by_sampling(std::mt19937_64& rng, const StratifiedMapping& s, const Vec& z, const PolyCone& reg,
                               std::uint64_t seed) {
  SetOracle g = union_oracle(s.pieces);
  ProximalConfig cfg;
  cfg.seed = seed;
  cfg.samples = 300;
  cfg.step = 1e-4;
  cfg.candidates = candidates(rng, s.pieces, z, reg);
  auto acc = sample_proximal_normals(g, z, cfg);
  for (const Vec& v : acc) EXPECT_TRUE(near(reg, v, angle_slack(cfg))) << v.transpose();
  // Completeness: declared generators are proximal normals.
  ProximalConfig gen_cfg = cfg;
  gen_cfg.samples = 0;
  gen_cfg.candidates = reg.rays();
  for (int j = 0; j < reg.lineality().cols(); ++j) {
    gen_cfg.candidates.push_back(reg.lineality().col(j));
    gen_cfg.candidates.push_back(-reg.lineality().col(j));
  }
  EXPECT_EQ(sample_proximal_normals(g, z, gen_cfg).size(), gen_cfg.candidates.size());
}

}  // namespace

TEST(Lcp, PaperExampleHasNineStrataAndHalfplaneDomain) {
  StratifiedMapping s = build_lcp(paper_m());
  EXPECT_EQ(s.strata.size(), 9u);
  EXPECT_EQ(s.pieces.size(), 4u);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    Vec q = 2.0 * testutil::gaussian_vec(rng, 2);
    if (std::abs(q(0)) < 1e-6) continue;
    bool nonempty = !s.values(q).empty();
    EXPECT_EQ(nonempty, q(0) >= 0) << q.transpose();
  }
}

TEST(Lcp, OriginStratumAndOmegaStructure) {
  StratifiedMapping s = build_lcp(paper_m());
  Vec z = Vec::Zero(4);
  int found = 0;
  for (const Stratum& st : s.strata) {
    if (st.relint_contains(z)) {
      ++found;
      EXPECT_EQ(st.label, "({},{},{1,2})");
    }
  }
  EXPECT_EQ(found, 1);
  ConeUnion n = limiting_normal_cone(s, Vec::Zero(2), Vec::Zero(2));
  EXPECT_TRUE(n.equals(omega_formula(paper_m())));
  EXPECT_THROW(limiting_normal_cone(s, -Vec::Ones(2), Vec::Ones(2)), DomainError);
}

TEST(Lcp, ScalarIdentityStrataMatchProximalSampling) {
  Mat m = Mat::Identity(1, 1);
  StratifiedMapping s = build_lcp(m);
  ASSERT_EQ(s.strata.size(), 3u);
  std::set<std::string> labels;
  for (auto& st : s.strata) labels.insert(st.label);
  EXPECT_TRUE(labels.count("({1},{},{})") && labels.count("({},{1},{})") && labels.count("({},{},{1})"));
  std::mt19937_64 rng(2);
  for (size_t i = 0; i < s.strata.size(); ++i) {
    const Stratum& st = s.strata[i];
    check_regular_by_sampling(rng, s, st.point, st.regular, 10 + i);
  }
}

TEST(Lcp, StratumConstancyUnderProximalSampling) {
  std::mt19937_64 rng(3);
  std::vector<Mat> ms = {paper_m()};
  for (int t = 0; t < 3; ++t) ms.push_back(testutil::gaussian_mat(rng, 2, 2));
  int checked = 0;
  for (const Mat& m : ms) {
    StratifiedMapping s = build_lcp(m);
    for (int code = 0; code < 9; ++code) {
      std::vector<int> assign = {code % 3, code / 3};
      for (int rep = 0; rep < 3; ++rep) {
        Vec z = lcp_point(rng, m, assign);
        int owner = -1;
        for (size_t i = 0; i < s.strata.size(); ++i)
          if (s.strata[i].relint_contains(z)) owner = static_cast<int>(i);
        ASSERT_GE(owner, 0);
        check_regular_by_sampling(rng, s, z, s.strata[owner].regular, 100 + checked);
        ++checked;
      }
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(Lcp, OuterSemicontinuityAlongSequences) {
  std::mt19937_64 rng(4);
  Mat m = paper_m();
  StratifiedMapping s = build_lcp(m);
  SetOracle g = union_oracle(s.pieces);
  for (const Stratum& base : s.strata) {
    ConeUnion lim = limiting_normal_cone(s, base.point.head(2), base.point.tail(2));
    for (const Stratum& other : s.strata) {
      if (!other.closure_contains(base.point)) continue;
      for (double step : {1e-1, 1e-2, 1e-3}) {
        Vec zk = base.point + step * (other.point - base.point);
        ProximalConfig cfg;
        cfg.samples = 100;
        cfg.step = step * 1e-2;
        cfg.candidates = candidates(rng, s.pieces, zk, other.regular);
        for (const Vec& v : sample_proximal_normals(g, zk, cfg)) EXPECT_TRUE(near(lim, v, angle_slack(cfg)));
      }
    }
  }
}

TEST(Lcp, AgreesWithUnionStratifier) {
  std::mt19937_64 rng(5);
  std::vector<Mat> ms = {paper_m(), testutil::gaussian_mat(rng, 2, 2)};
  for (const Mat& m : ms) {
    StratifiedMapping a = build_lcp(m);
    StratifiedMapping b = stratify_union(a.pieces, 2, 2);
    EXPECT_EQ(b.strata.size(), 9u);
    for (int t = 0; t < 100; ++t) {
      std::vector<int> assign = {t % 3, (t / 3) % 3};
      Vec z = lcp_point(rng, m, assign);
      ConeUnion na = limiting_normal_cone(a, z.head(2), z.tail(2));
      ConeUnion nb = limiting_normal_cone(b, z.head(2), z.tail(2));
      EXPECT_TRUE(na.equals(nb)) << t;
    }
  }
}

TEST(LinearSystem, FreeSystemHasTrivialNormals) {
  Mat a = Mat::Identity(2, 2);
  StratifiedMapping s = build_linear_system(a, HPolyhedron::whole(2));
  ASSERT_EQ(s.strata.size(), 1u);
  ASSERT_EQ(s.strata[0].normals.pieces().size(), 1u);
  EXPECT_TRUE(s.strata[0].normals.pieces()[0].is_zero());
}

TEST(LinearSystem, DomainOfColumnAgainstOrthant) {
  Mat a(2, 1);
  a << 1, 0;
  HPolyhedron k(-Mat::Identity(2, 2), Vec::Zero(2));
  StratifiedMapping s = build_linear_system(a, k);
  ASSERT_TRUE(s.domain.has_value());
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    Vec p = testutil::gaussian_vec(rng, 2);
    if (std::abs(p(1)) < 1e-6) continue;
    EXPECT_EQ(s.domain->contains(p), p(1) >= 0);
  }
}

TEST(LinearSystem, DomainFormulaBySolvability) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    int m = 2 + t % 2;
    int n = 1 + t % (m - 1 > 0 ? m - 1 : 1);
    Mat a = testutil::gaussian_mat(rng, m, n);
    HPolyhedron k(testutil::gaussian_mat(rng, m + 1, m), Vec::Zero(m + 1));
    if (k.affine_dim() < 0) continue;
    StratifiedMapping s = build_linear_system(a, k);
    for (int q = 0; q < 50; ++q) {
      Vec p = 2.0 * testutil::gaussian_vec(rng, m);
      // Solvability of A x + p in K by LP.
      LpResult r = lp_feasible_point(k.A() * a, k.b() - k.A() * p, k.C() * a, k.d() - k.C() * p);
      bool solvable = r.optimal();
      // Skip points numerically on the boundary.
      if (s.domain->num_ineq() > 0 && (s.domain->A() * p - s.domain->b()).cwiseAbs().minCoeff() < 1e-7) continue;
      EXPECT_EQ(s.domain->contains(p), solvable) << t;
    }
  }
}

TEST(LinearSystem, NormalConeFormulaAndSampling) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    int m = 2 + t % 2, n = 1;
    Mat a = testutil::gaussian_mat(rng, m, n);
    HPolyhedron k = testutil::random_polytope(rng, m, 2);
    StratifiedMapping s = build_linear_system(a, k);
    StratifiedMapping u = stratify_union(s.pieces, m, n);
    for (const Stratum& st : s.strata) {
      Vec z = st.point;
      Vec p = z.head(m), x = z.tail(n);
      // {(y, A^T y) : y in N_K(A x + p)}.
      Mat up(m + n, m);
      up << Mat::Identity(m, m), a.transpose();
      PolyCone expected = normal_cone_convex(k, a * x + p).image(up);
      ConeUnion lim = limiting_normal_cone(s, p, x);
      ASSERT_EQ(lim.pieces().size(), 1u);
      EXPECT_TRUE(lim.pieces()[0].equals(expected));
      EXPECT_TRUE(lim.equals(limiting_normal_cone(u, p, x)));
      check_regular_by_sampling(rng, s, z, expected, 500 + t);
    }
  }
}

TEST(StratifyUnion, SingleConvexPieceGivesFaces) {
  HPolyhedron sq = HPolyhedron::box(Vec::Zero(2), Vec::Ones(2));
  StratifiedMapping s = stratify_union({sq}, 1, 1);
  EXPECT_EQ(s.strata.size(), 9u);
  for (const Stratum& st : s.strata) {
    ASSERT_EQ(st.normals.pieces().size(), 1u);
    EXPECT_TRUE(st.normals.pieces()[0].equals(normal_cone_convex(sq, st.point)));
  }
}

TEST(StratifyUnion, TwoAxesMatchProximalSampling) {
  Mat e1(1, 2), e2(1, 2);
  e1 << 0, 1;
  e2 << 1, 0;
  HPolyhedron xaxis(Mat(0, 2), Vec(0), e1, Vec::Zero(1));
  HPolyhedron yaxis(Mat(0, 2), Vec(0), e2, Vec::Zero(1));
  StratifiedMapping s = stratify_union({xaxis, yaxis}, 1, 1);
  ConeUnion lim = limiting_normal_cone(s, Vec::Zero(1), Vec::Zero(1));
  SetOracle g = union_oracle(s.pieces);
  // Regular normals at the origin: none.
  ProximalConfig cfg;
  cfg.samples = 2000;
  cfg.step = 1e-3;
  EXPECT_TRUE(sample_proximal_normals(g, Vec::Zero(2), cfg).empty());
  // Limits of proximal normals along the axes make up the limiting cone.
  ConeUnion sampled(2);
  for (double sgn : {-1.0, 1.0}) {
    for (int axis = 0; axis < 2; ++axis) {
      Vec zk = Vec::Zero(2);
      zk(axis) = sgn * 1e-3;
      cfg.samples = 4000;
      cfg.step = 1e-5;
      cfg.candidates = {Vec::Unit(2, 1 - axis), -Vec::Unit(2, 1 - axis)};
      auto acc = sample_proximal_normals(g, zk, cfg);
      ASSERT_FALSE(acc.empty());
      for (const Vec& v : acc) {
        EXPECT_TRUE(near(lim, v, angle_slack(cfg)));
        sampled.add(PolyCone::from_g(2, {}, {v}));
      }
    }
  }
  // Every piece of the limiting cone is approached by some sampled line.
  for (const PolyCone& k : lim.pieces()) {
    std::vector<Vec> basis = k.rays();
    for (int j = 0; j < k.lineality().cols(); ++j) basis.push_back(k.lineality().col(j));
    ASSERT_FALSE(basis.empty());
    for (const Vec& b : basis) EXPECT_TRUE(near(sampled, b, angle_slack(cfg)));
  }
}

TEST(ConvexDomain, LcpHalfplaneAndNonconvexUnion) {
  Mat m(2, 2);
  m << -1, 0, 1, 1;
  std::optional<HPolyhedron> dom = convex_domain(build_lcp(m));
  ASSERT_TRUE(dom.has_value());
  for (int i = 0; i < 50; ++i) {
    Vec q = Vec::Random(2);
    EXPECT_EQ(dom->contains(q), q(0) >= 0) << q.transpose();
  }
  // gph = ({x1 >= 0, x2 = 0} u {x1 = 0, x2 >= 0}) x {0}: dom is two rays.
  Mat c1(2, 3), c2(2, 3), a1(1, 3), a2(1, 3);
  c1 << 0, 1, 0, 0, 0, 1;
  c2 << 1, 0, 0, 0, 0, 1;
  a1 << -1, 0, 0;
  a2 << 0, -1, 0;
  StratifiedMapping axes = stratify_union({HPolyhedron(a1, Vec::Zero(1), c1, Vec::Zero(2)),
                                           HPolyhedron(a2, Vec::Zero(1), c2, Vec::Zero(2))},
                                          2, 1);
  EXPECT_FALSE(convex_domain(axes).has_value());
  // [0,1]^2 u [1,2] x [0,2] is not convex; [0,1]^2 u [1,2] x [0,1] is.
  const Vec e1 = Vec::Unit(3, 0);
  StratifiedMapping step = stratify_union({HPolyhedron::box(Vec::Zero(3), Vec::Ones(3)),
                                           HPolyhedron::box(e1, Vec(2 * Vec::Ones(3)))},
                                          2, 1);
  EXPECT_FALSE(convex_domain(step).has_value());
  StratifiedMapping halves = stratify_union({HPolyhedron::box(Vec::Zero(3), Vec::Ones(3)),
                                             HPolyhedron::box(e1, Vec(Vec::Ones(3) + e1))},
                                            2, 1);
  std::optional<HPolyhedron> rect = convex_domain(halves);
  ASSERT_TRUE(rect.has_value());
  EXPECT_TRUE(rect->contains(Vec((Vec(2) << 1.5, 0.5).finished())));
  EXPECT_FALSE(rect->contains(Vec((Vec(2) << 2.5, 0.5).finished())));
  EXPECT_FALSE(rect->contains(Vec((Vec(2) << 0.5, 1.5).finished())));
}
