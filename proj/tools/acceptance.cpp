#include "acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "polylip/coderivative.hpp"
#include "polylip/errors.hpp"
#include "polylip/functions.hpp"
#include "polylip/oracle.hpp"

namespace polylip::acceptance {

namespace {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

const double kGolden = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v1(double a) { return Vec::Constant(1, a); }

Mat paper_m() {
  Mat m(2, 2);
  m << -1, 0, 1, 1;
  return m;
}

HPolyhedron right_halfplane() {
  Mat a(1, 2);
  a << -1, 0;
  return HPolyhedron(a, Vec::Zero(1));
}

bool left_axis(const ConeUnion& k) {
  return k.equals(ConeUnion(2, {PolyCone::from_g(2, {vec2(-1, 0)}, {})}));
}

Vec gaussian(Rng& rng, int n) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

Mat gaussian(Rng& rng, int r, int c) {
  std::normal_distribution<double> g;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Random halfspaces around the origin, clipped by the box [-2, 2]^n.
HPolyhedron random_polytope(Rng& rng, int n, int extra) {
  Mat a = gaussian(rng, extra, n);
  Vec b(extra);
  for (int i = 0; i < extra; ++i) b(i) = uniform(rng, 0.3, 1.5) * a.row(i).norm();
  Mat box(2 * n, n);
  box << Mat::Identity(n, n), -Mat::Identity(n, n);
  return HPolyhedron(vstack(a, box), vcat(b, Vec::Constant(2 * n, 2.0)));
}

PolyCone random_cone(Rng& rng, int n) {
  std::vector<Vec> rays, lin;
  int k = pick(rng, 0, n + 2);
  for (int i = 0; i < k; ++i) rays.push_back(gaussian(rng, n));
  if (pick(rng, 0, 3) == 0) lin.push_back(gaussian(rng, n));
  return PolyCone::from_g(n, rays, lin);
}

// max (or min) of 2..4 affine terms, two of them through the origin.
PLFunction random_pl(Rng& rng, int n, bool convex) {
  int k = pick(rng, 2, 4);
  std::vector<Vec> g;
  std::vector<double> c;
  for (int i = 0; i < k; ++i) {
    g.push_back(gaussian(rng, n));
    c.push_back(i < 2 ? 0.0 : (convex ? -0.5 : 0.5) * (i - 1));
  }
  const double sign = convex ? 1.0 : -1.0;
  std::vector<PLCell> cells;
  for (int i = 0; i < k; ++i) {
    Mat a(k - 1, n);
    Vec b(k - 1);
    for (int j = 0, r = 0; j < k; ++j) {
      if (j == i) continue;
      a.row(r) = sign * (g[j] - g[i]).transpose();
      b(r++) = sign * (c[i] - c[j]);
    }
    cells.push_back({HPolyhedron(a, b), g[i], c[i]});
  }
  return PLFunction(n, cells);
}

HPolyhedron random_wedge(Rng& rng, int n) {
  Mat a = gaussian(rng, pick(rng, 1, 2), n);
  return HPolyhedron(a, Vec::Zero(a.rows()));
}

HPolyhedron random_unbounded(Rng& rng, int n, bool lineality) {
  VRep v;
  v.n = n;
  for (int i = 0; i < n + 2; ++i) v.vertices.push_back(gaussian(rng, n));
  Vec base = gaussian(rng, n);
  for (int i = 0; i < 2; ++i) v.rays.push_back(base + 0.5 * gaussian(rng, n));
  v.lineality = Mat(n, 0);
  if (lineality) v.lineality = gaussian(rng, n).normalized();
  return vrep_to_hrep(v);
}

bool interior_of(const HPolyhedron& dom, const Vec& p) {
  return dom.num_eq() == 0 && (dom.num_ineq() == 0 || (dom.A() * p - dom.b()).maxCoeff() < -1e-7);
}

struct Tally {
  int pass = 0;
  int total = 0;
  void add(bool ok) {
    ++total;
    if (ok) ++pass;
  }
  bool all() const { return pass == total; }
  std::string str() const { return std::to_string(pass) + "/" + std::to_string(total); }
};

Result lcp_reproduction() {
  auto t0 = Clock::now();
  StratifiedMapping s = build_lcp(paper_m());
  CriterionReport r = check_criterion(s, right_halfplane(), Vec::Zero(2), Vec::Zero(2));
  PHMap d = coderivative(s, Vec::Zero(2), Vec::Zero(2));
  CriterionReport c = check_criterion(s, HPolyhedron::whole(2), Vec::Zero(2), Vec::Zero(2));
  double elapsed = seconds_since(t0);
  bool rel = r.holds && std::abs(r.modulus - kGolden) <= 1e-9;
  bool kernel = left_axis(d.kernel());
  bool classical_fails = !c.holds && c.kernel_witness.has_value();
  Result out;
  out.pass = rel && kernel && classical_fails && elapsed < 5.0;
  out.detail = "holds=" + std::string(r.holds ? "true" : "false") + " modulus=" + fmt(r.modulus) +
               " |err|=" + fmt(std::abs(r.modulus - kGolden)) + " classical kernel=R_- x {0}: " +
               (kernel ? "yes" : "no") + " classical criterion fails: " + (classical_fails ? "yes" : "no") +
               " runtime=" + fmt(elapsed) + "s";
  return out;
}

Result kappa_table() {
  StratifiedMapping s = build_lcp(paper_m());
  CriterionReport r = check_criterion(s, right_halfplane(), Vec::Zero(2), Vec::Zero(2));
  std::map<std::string, double> expected;
  for (const Stratum& st : s.strata) expected[st.label] = kGolden;
  expected["({1,2},{},{})"] = 0.0;
  for (auto l : {"({2},{},{1})", "({1},{2},{})", "({1},{},{2})", "({2},{1},{})"}) expected[l] = 1.0;
  std::map<std::string, double> got;
  for (const StratumKappa& k : r.per_stratum) got[k.label] = k.kappa;
  Tally t;
  double worst = 0.0;
  for (auto& [label, k] : expected) {
    bool ok = got.count(label) && std::abs(got[label] - k) <= 1e-9;
    if (got.count(label)) worst = std::max(worst, std::abs(got[label] - k));
    t.add(ok);
  }
  Result out;
  out.pass = t.all() && got.size() == 9 && expected.size() == 9;
  out.detail = "strata matched " + t.str() + " (of 9 triples), max |err|=" + fmt(worst);
  return out;
}

Result eigen_identity() {
  Mat m = paper_m();
  Eigen::SelfAdjointEigenSolver<Mat> es(m * m.transpose());
  double min_norm = std::sqrt(es.eigenvalues().minCoeff());
  double value = 1.0 / min_norm;
  Result out;
  out.pass = std::abs(value - kGolden) <= 1e-12;
  out.detail = "1/min|M^T y|=" + fmt(value) + " target=" + fmt(kGolden) + " |err|=" + fmt(std::abs(value - kGolden));
  return out;
}

Result directional_failure() {
  StratifiedMapping s = build_lcp(paper_m());
  DirectionalReport r = directional_sufficiency_check(s, right_halfplane(), Vec::Zero(2), Vec::Zero(2));
  bool found = false, kernel = false;
  for (const FailingDirection& f : r.failures)
    if ((f.dx - vec2(0, -1)).norm() < 1e-12 && (f.du - vec2(0, 1)).norm() < 1e-12) {
      found = true;
      kernel = left_axis(f.kernel);
    }
  Result out;
  out.pass = !r.pass && found && kernel;
  out.detail = "check fails: " + std::string(r.pass ? "no" : "yes") + ", direction ((0,-1),(0,1)) reported: " +
               (found ? "yes" : "no") + ", its kernel = R_- x {0}: " + (kernel ? "yes" : "no") +
               ", failing directions: " + std::to_string(r.failures.size());
  return out;
}

Result linear_systems() {
  Rng rng(505);
  Tally holds, equality, classical;
  int boundary = 0, interior = 0;
  for (int t = 0; t < 20; ++t) {
    int m = 2 + t % 3, n = 1 + t % 2;
    Mat a = gaussian(rng, m, n);
    HPolyhedron k = random_polytope(rng, m, 2 + t % 3);
    StratifiedMapping s = build_linear_system(a, k);
    HPolyhedron dom = *s.domain;
    for (const Stratum& st : s.strata) {
      Vec p = st.point.head(m), x = st.point.tail(n);
      bool in_int = interior_of(dom, p);
      (in_int ? interior : boundary)++;
      if (!in_int) holds.add(check_criterion(s, dom, p, x).holds);
      PHMap full = coderivative(s, p, x);
      PHMap proj = projectional_coderivative(s, dom, p, x);
      equality.add(proj.graph().equals(full.graph()) == in_int);
      // Closed form {(-A^T y, y) : y in N_K(A x + p)} in (u*, x*) order.
      Mat lift(n + m, m);
      lift << -a.transpose(), Mat::Identity(m, m);
      ConeUnion expected(n + m, {normal_cone_convex(k, Vec(a * x + p)).image(lift)});
      classical.add(full.graph().equals(expected));
    }
  }
  Result out;
  out.pass = holds.all() && equality.all() && classical.all() && boundary > 0 && interior > 0;
  out.detail = "20 instances; criterion holds at boundary points " + holds.str() +
               ", projectional = classical iff interior " + equality.str() + " (boundary " +
               std::to_string(boundary) + ", interior " + std::to_string(interior) + "), classical closed form " +
               classical.str();
  return out;
}

Result level_set_table() {
  PLFunction f(1, {{HPolyhedron(Mat::Constant(1, 1, 1.0), Vec::Zero(1)), v1(-1), 0.0},
                   {HPolyhedron(Mat::Constant(1, 1, -1.0), Vec::Zero(1)), v1(1), 0.0}});
  Tally t;
  std::ostringstream os;
  for (double v : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
    LevelSetReport r = level_set_analysis(f, v1(0), v1(v));
    double lip_x = v >= 1 ? 1 / (1 + v) : v <= -1 ? 1 / (1 - v) : 1 / std::min(1 - v, 1 + v);
    double classical = v > 1 ? 1 / (v - 1) : v < -1 ? 1 / (-1 - v) : kInf;
    bool ok = r.relative_llp && std::abs(r.lip_x - lip_x) <= 1e-12 && r.routes_agree;
    ok = ok && (std::isinf(classical) ? std::isinf(r.classical_lip) : std::abs(r.classical_lip - classical) <= 1e-12);
    t.add(ok);
    os << " v=" << v << ":" << fmt(r.lip_x) << "/" << fmt(r.classical_lip);
  }
  Result out;
  out.pass = t.all();
  out.detail = "rows " + t.str() + " (lip_X/classical)" + os.str();
  return out;
}

Result oracle_agreement() {
  auto t0 = Clock::now();
  SampleConfig cfg;
  cfg.radii = {1e-3};
  cfg.pairs_per_radius = 10000;
  Tally t;
  double worst = kInf;
  auto judge = [&](const StratifiedMapping& s, const HPolyhedron& xs, const Vec& x, const Vec& u) {
    double exact = check_criterion(s, xs, x, u).modulus;
    double lb = estimate_modulus(s, xs, x, u, cfg).lower_bounds.back();
    bool ok = std::isfinite(exact) && lb >= 0.95 * exact && lb <= exact + 1e-3;
    if (exact > 0) worst = std::min(worst, lb / exact);
    t.add(ok);
  };
  judge(build_lcp(paper_m()), right_halfplane(), Vec::Zero(2), Vec::Zero(2));
  Rng rng(707);
  for (int i = 0; i < 10; ++i) {
    int m = 2 + i % 2, n = 1 + (i / 2) % 2;
    Mat a = gaussian(rng, m, n);
    StratifiedMapping s = build_linear_system(a, random_polytope(rng, m, 2 + i % 2));
    HPolyhedron dom = *s.domain;
    // Lowest-dimensional boundary stratum.
    const Stratum* best = nullptr;
    for (const Stratum& st : s.strata) {
      if (interior_of(dom, st.point.head(m))) continue;
      if (!best || st.cell.affine_dim() < best->cell.affine_dim()) best = &st;
    }
    if (!best) best = &s.strata.front();
    judge(s, dom, best->point.head(m), best->point.tail(n));
  }
  double elapsed = seconds_since(t0);
  Result out;
  out.pass = t.all() && t.total == 11 && elapsed < 60.0;
  out.detail = "instances within [0.95 modulus, modulus + 1e-3]: " + t.str() + ", worst ratio=" + fmt(worst) +
               ", runtime=" + fmt(elapsed) + "s";
  return out;
}

Result nonpolyhedral() {
  BlackBoxFunction h;
  h.dim = 2;
  h.value = [](const Vec& x) { return x.norm() + x(1); };
  h.in_domain = [](const Vec& x) { return x(1) <= 0; };
  Mat a(1, 2);
  a << 0, 1;
  EstimateReport rep = estimate_function_modulus(h, HPolyhedron(a, Vec::Zero(1)), Vec::Zero(2), SampleConfig());
  bool disk = !rep.dom_violation.has_value();
  std::ostringstream os;
  for (double v : rep.lower_bounds) {
    disk = disk && std::abs(v - std::sqrt(2.0)) <= 0.05 * std::sqrt(2.0);
    os << " " << fmt(v);
  }
  BlackBoxFunction hyp;
  hyp.dim = 2;
  hyp.value = [](const Vec& x) { return -std::sqrt(2.0 * x(0) * x(1)); };
  hyp.in_domain = [](const Vec& x) { return x(0) <= 0 && x(1) <= 0; };
  std::vector<Vec> xs, xps;
  for (int k = 1; k <= 50; ++k) {
    xs.push_back(vec2(0.0, -1.0 / k));
    xps.push_back(vec2(-1.0 / (double(k) * k), -1.0 / k));
  }
  PairSequenceReport seq = evaluate_pair_sequence(hyp, xs, xps);
  bool hyperbola = seq.ratios.back() >= 10.0 && seq.trend == Trend::kUnbounded;
  Result out;
  out.pass = disk && hyperbola;
  out.detail = "disk example lower bounds" + os.str() + " (target 1.414 +- 5%), hyperbola ratio at k=50 " +
               fmt(seq.ratios.back()) + ", trend " + (seq.trend == Trend::kUnbounded ? "unbounded" : "bounded");
  return out;
}

// Property suites, 200 cases each.
constexpr int kCases = 200;

Tally moreau() {
  Rng rng(901);
  Tally t;
  for (int i = 0; i < kCases; ++i) {
    int n = 2 + i % 3;
    PolyCone k = random_cone(rng, n);
    Vec v = gaussian(rng, n);
    Vec p = project_cone(k, v).p;
    Vec q = project_cone(k.polar(), v).p;
    double scale = std::max(1.0, v.norm());
    t.add((p + q - v).norm() <= 1e-9 * scale && std::abs(p.dot(q)) <= 1e-9 * scale * scale && k.contains(p) &&
          k.polar().contains(q));
  }
  return t;
}

Tally polar_involution() {
  Rng rng(902);
  Tally t;
  for (int i = 0; i < kCases; ++i) {
    int n = 2 + i % 3;
    PolyCone k = random_cone(rng, n);
    PolyCone p = k.polar();
    bool ok = p.polar().equals(k);
    // Every generator pair has a nonpositive inner product.
    for (const Vec& a : p.rays()) {
      for (const Vec& r : k.rays()) ok = ok && a.dot(r) <= 1e-9;
      for (int c = 0; c < k.lineality().cols(); ++c) ok = ok && std::abs(a.dot(k.lineality().col(c))) <= 1e-9;
    }
    t.add(ok);
  }
  return t;
}

Tally tangent_normal() {
  Rng rng(903);
  Tally t;
  for (int i = 0; i < kCases; ++i) {
    int n = 2 + i % 2;
    HPolyhedron p = random_polytope(rng, n, 2 + i % 3);
    std::vector<Face> fs = faces(p);
    const Face& f = fs[pick(rng, 0, static_cast<int>(fs.size()) - 1)];
    Vec x = f.relint;
    PolyCone tc = tangent_cone(p, x);
    PolyCone nc = normal_cone_convex(p, x);
    bool ok = nc.equals(tc.polar()) && tc.equals(nc.polar());
    // Feasible directions stay in P; normals are maximized at x over P.
    for (const Vec& w : tc.rays()) ok = ok && p.contains(x + 1e-7 * w);
    for (int c = 0; c < tc.lineality().cols(); ++c) {
      ok = ok && p.contains(x + 1e-7 * tc.lineality().col(c)) && p.contains(x - 1e-7 * tc.lineality().col(c));
    }
    for (const Vec& r : nc.rays()) ok = ok && support(p, r).value <= r.dot(x) + 1e-9;
    t.add(ok);
  }
  return t;
}

Tally interior_reduction() {
  Rng rng(904);
  Tally t;
  for (int i = 0; i < kCases; ++i) {
    StratifiedMapping s = build_lcp(gaussian(rng, 2, 2));
    const Stratum& st = s.strata[i % s.strata.size()];
    Vec q = st.point.head(2), x = st.point.tail(2);
    HPolyhedron xs = HPolyhedron::box(q - Vec::Ones(2), q + Vec::Ones(2));
    t.add(projectional_coderivative(s, xs, q, x).graph().equals(coderivative(s, q, x).graph()));
  }
  return t;
}

Tally three_way() {
  Rng rng(905);
  Tally t;
  for (int i = 0; i < kCases; ++i) {
    int m = 1 + i % 2, n = 1;
    StratifiedMapping s = build_linear_system(gaussian(rng, m, n), random_polytope(rng, m, 2));
    const Stratum& st = s.strata[i % s.strata.size()];
    Vec p = st.point.head(m), x = st.point.tail(n);
    HPolyhedron xs = (i % 3 == 0) ? HPolyhedron::whole(m) : *s.domain;
    CriterionReport r = check_criterion(s, xs, p, x);
    PHMap h = projectional_coderivative(s, xs, p, x);
    bool trivial = true;
    ConeUnion ker = h.kernel();
    for (const PolyCone& c : ker.pieces()) trivial = trivial && c.is_zero();
    bool finite = std::isfinite(outer_norm(h).value);
    t.add(r.holds == trivial && trivial == finite && r.holds == !r.kernel_witness.has_value());
  }
  return t;
}

// Proximal normals to epi f above the graph are horizontal and stay
// proximal at the graph point.
Tally proximal_epigraph(int& nontrivial) {
  Rng rng(906);
  Tally t;
  nontrivial = 0;
  const double accept = 1e-10;
  for (int i = 0; i < kCases; ++i) {
    int n = 1 + i % 2;
    PLFunction f0 = random_pl(rng, n, i % 4 < 2);
    Mat a = n == 1 ? Mat::Constant(1, 1, pick(rng, 0, 1) ? 1.0 : -1.0) : gaussian(rng, 1, n);
    HPolyhedron w(a, Vec::Zero(1));
    std::vector<PLCell> cells;
    for (const PLCell& c : f0.cells()) cells.push_back({c.cell.intersect(w), c.g, c.c});
    PLFunction f(n, cells);
    Vec xbar = Vec::Zero(n);
    if (n == 2 && i % 3 != 0) xbar = uniform(rng, -1, 1) * vec2(-a(0, 1), a(0, 0));
    double fx = f.value(xbar);
    Vec z = vcat(xbar, v1(fx + uniform(rng, 0.2, 1.0)));
    SetOracle epi = union_oracle(f.epigraph());
    ProximalConfig pc;
    pc.seed = 1000 + i;
    pc.samples = 200;
    pc.accept_tol = accept;
    pc.candidates = {vcat(Vec(a.row(0).transpose()), v1(0.0))};
    std::vector<Vec> normals = sample_proximal_normals(epi, z, pc);
    if (!normals.empty()) ++nontrivial;
    bool ok = true;
    Vec base = vcat(xbar, v1(fx));
    for (const Vec& v : normals) {
      // Angular resolution of the sampler is sqrt(2 accept).
      ok = ok && std::abs(v(n)) <= 2.0 * std::sqrt(2.0 * accept);
      Vec h = vcat(Vec(v.head(n)), v1(0.0)).normalized();
      ok = ok && epi.distance(base + pc.step * h) >= pc.step * (1.0 - accept);
    }
    t.add(ok);
  }
  return t;
}

Tally modulus_equal() {
  Rng rng(907);
  Tally t;
  for (int i = 0; i < kCases; ++i) {
    int n = 2;
    PLFunction f = random_pl(rng, n, i % 2 == 0);
    HPolyhedron x = random_wedge(rng, n);
    LipReport r = relative_lip_modulus(f, x, Vec::Zero(n));
    t.add(r.routes_agree && std::isfinite(r.modulus));
  }
  return t;
}

Tally strict_subset(int& nonempty) {
  Rng rng(908);
  Tally t;
  nonempty = 0;
  for (int i = 0; i < kCases; ++i) {
    int n = 1 + i % 2;
    PLFunction f = random_pl(rng, n, i % 3 == 0);
    Vec v = gaussian(rng, n);
    PolySet o = outer_limiting_subdifferential(f, Vec::Zero(n), v);
    PolySet b = subdifferentials(f, Vec::Zero(n)).basic;
    if (!o.empty()) ++nonempty;
    bool ok = true;
    for (const VRep& g : o.gens) {
      for (const Vec& p : g.vertices) ok = ok && b.contains(p);
      for (const Vec& r : g.rays) ok = ok && b.horizon().contains(r);
    }
    t.add(ok);
  }
  return t;
}

Result property_suites() {
  std::vector<std::pair<std::string, Tally>> rows;
  rows.push_back({"moreau", moreau()});
  rows.push_back({"polar", polar_involution()});
  rows.push_back({"tangent/normal", tangent_normal()});
  rows.push_back({"interior", interior_reduction()});
  rows.push_back({"three-way", three_way()});
  int hits = 0, nonempty = 0;
  rows.push_back({"proximal-epigraph", proximal_epigraph(hits)});
  rows.push_back({"modulus-equal", modulus_equal()});
  rows.push_back({"strict-subset", strict_subset(nonempty)});
  bool pass = hits > 0 && nonempty > 0;
  std::string detail;
  for (auto& [name, t] : rows) {
    pass = pass && t.all() && t.total >= kCases;
    detail += (detail.empty() ? "" : ", ") + name + " " + t.str();
  }
  detail += " (epigraph cases with normals " + std::to_string(hits) + ", nonempty strict sets " +
            std::to_string(nonempty) + ")";
  Result out;
  out.pass = pass;
  out.detail = detail;
  return out;
}

Result sublinear_suite() {
  Rng rng(1010);
  Tally pairs, finite, oracle;
  int with_lineality = 0, unbounded_faces = 0;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    int n = 2 + i % 2;
    bool lin = i % 3 == 2;
    HPolyhedron d = random_unbounded(rng, n, lin);
    if (lin) ++with_lineality;
    SublinearReport r = sublinear_analysis(d);
    for (const FacePair& p : r.pairs) {
      pairs.add(p.recession_matches);
      if (!p.face.bounded()) ++unbounded_faces;
    }
    finite.add(std::isfinite(r.modulus));
    HPolyhedron dom(r.domain.ineq(), Vec::Zero(r.domain.ineq().rows()), r.domain.eq(),
                    Vec::Zero(r.domain.eq().rows()));
    BlackBoxFunction h;
    h.dim = n;
    h.value = [d](const Vec& x) { return support(d, x).value; };
    h.in_domain = [dom](const Vec& x) { return dom.contains(x); };
    SampleConfig cfg;
    cfg.seed = 50 + i;
    double lb = estimate_function_modulus(h, dom, Vec::Zero(n), cfg).lower_bounds.back();
    double err = std::abs(lb - r.modulus) / std::max(r.modulus, 1e-12);
    worst = std::max(worst, err);
    oracle.add(err <= 0.05);
  }
  Result out;
  out.pass = pairs.all() && finite.all() && oracle.all() && with_lineality > 0 && unbounded_faces > 0;
  out.detail = "face pairs with matching recession " + pairs.str() + ", finite moduli " + finite.str() +
               ", oracle within 5% " + oracle.str() + " (worst " + fmt(100 * worst) + "%), instances with lineality " +
               std::to_string(with_lineality) + ", unbounded faces " + std::to_string(unbounded_faces);
  return out;
}

struct Entry {
  const char* title;
  std::function<Result()> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {"LCP relative criterion and modulus", lcp_reproduction},
      {"LCP per-stratum kappa table", kappa_table},
      {"eigenvalue identity", eigen_identity},
      {"directional check failure", directional_failure},
      {"linear-system mappings", linear_systems},
      {"level-set table for |x|", level_set_table},
      {"sampling oracle agreement", oracle_agreement},
      {"non-polyhedral examples", nonpolyhedral},
      {"property suites", property_suites},
      {"sublinear polyhedral suite", sublinear_suite},
  };
  return e;
}

}  // namespace

int criterion_count() { return static_cast<int>(entries().size()); }

Result run_criterion(int id) {
  const Entry& e = entries().at(id - 1);
  auto t0 = Clock::now();
  Result r;
  try {
    r = e.run();
  } catch (const std::exception& ex) {
    r.pass = false;
    r.detail = std::string("exception: ") + ex.what();
  }
  r.id = id;
  r.title = e.title;
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<Result> run_all() {
  std::vector<Result> out;
  for (int i = 1; i <= criterion_count(); ++i) out.push_back(run_criterion(i));
  return out;
}

std::string format_line(const Result& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.title << " (";
  os.precision(3);
  os << std::fixed << r.seconds << " s): " << r.detail;
  return os.str();
}

}  // namespace polylip::acceptance
