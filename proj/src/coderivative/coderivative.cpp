#include "polylip/coderivative.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "polylip/errors.hpp"
#include "polylip/lp.hpp"
#include "polylip/nnls.hpp"
#include "polylip/rng.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

constexpr long kFaceCap = 1L << 12;

std::vector<Vec> generators(const PolyCone& k) {
  std::vector<Vec> out = k.rays();
  for (int j = 0; j < k.lineality().cols(); ++j) {
    out.push_back(k.lineality().col(j));
    out.push_back(-k.lineality().col(j));
  }
  return out;
}

PolyCone subspace(int n, const Mat& basis) { return PolyCone::from_g(n, {}, columns(basis)); }

double nonzero_tol(const Mat& p) { return tolerance().tau() * std::max(1.0, p.norm()); }

// (a, b) normal coordinates in R^{n+m} -> x* = a, u* = -b.
LinearPiece normal_piece(const PolyCone& k, int n, int m) {
  Mat p = Mat::Zero(n, n + m), q = Mat::Zero(m, n + m);
  p.leftCols(n) = Mat::Identity(n, n);
  q.rightCols(m) = -Mat::Identity(m, m);
  return {k, p, q};
}

HPolyhedron cone_as_polyhedron(const PolyCone& k) {
  return HPolyhedron(k.ineq(), Vec::Zero(k.ineq().rows()), k.eq(), Vec::Zero(k.eq().rows()));
}

// Pieces of {(proj_T(a), -b) : (a, b) in K} with P linear on each piece:
// proj_T is the orthogonal projection onto span F on F + (T polar cap F^perp).
std::vector<LinearPiece> projected_pieces(const ConeUnion& normals, const PolyCone& t, int n, int m) {
  std::vector<LinearPiece> out;
  PolyCone tpol = t.polar();
  Mat lift = Mat::Zero(n, n + m);
  lift.leftCols(n) = Mat::Identity(n, n);
  std::vector<PolyCone> fs = t.faces();
  if (static_cast<long>(fs.size()) > kFaceCap) throw BudgetError("projected coderivative: too many tangent faces");
  for (const PolyCone& f : fs) {
    Mat span = f.span_basis();
    Mat perp = complement_basis(span, n);
    PolyCone np = tpol.intersect(subspace(n, perp));
    std::vector<Vec> rays = f.rays(), lin = columns(f.lineality());
    for (const Vec& r : np.rays()) rays.push_back(r);
    for (int j = 0; j < np.lineality().cols(); ++j) lin.push_back(np.lineality().col(j));
    PolyCone region = PolyCone::from_g(n, rays, lin).preimage(lift);
    Mat p = Mat::Zero(n, n + m), q = Mat::Zero(m, n + m);
    p.leftCols(n) = span * span.transpose();
    q.rightCols(m) = -Mat::Identity(m, m);
    for (const PolyCone& k : normals.pieces()) {
      PolyCone param = k.intersect(region);
      if (param.is_zero()) continue;
      out.push_back({param, p, q});
    }
  }
  return out;
}

struct PieceNorm {
  double value = 0.0;
  bool infinite = false;
  Vec xstar, ustar;
};

PieceNorm piece_norm(const LinearPiece& pc) {
  PieceNorm out;
  const int dim = pc.param.dim();
  const double tol = nonzero_tol(pc.p);
  Mat span = pc.param.span_basis();
  bool injective = span.cols() == 0 || null_space(pc.q * span, static_cast<int>(span.cols())).cols() == 0;
  PolyCone ker = injective ? PolyCone::zero(dim) : pc.param.intersect(PolyCone::from_h(dim, Mat(0, dim), pc.q));
  for (const Vec& g : generators(ker)) {
    Vec x = pc.p * g;
    if (x.norm() > tol) {
      out.infinite = true;
      out.value = kInf;
      out.xstar = x / x.norm();
      out.ustar = Vec::Zero(pc.q.rows());
      return out;
    }
  }
  const double qtol = nonzero_tol(pc.q);
  // Largest attained value on face f; true when the top eigenvalue of its
  // span is attained (then no subface can do better).
  auto process = [&](const PolyCone& f) {
    Mat b = f.span_basis();
    const int k = static_cast<int>(b.cols());
    if (k == 0) return false;
    Mat pb = pc.p * b, qb = pc.q * b;
    Mat z = null_space(qb, k);
    if (z.cols() > 0 && (pb * z).norm() > tol) return false;
    Mat w = complement_basis(z, k);
    if (w.cols() == 0) return true;
    Mat pw = pb * w, qw = qb * w;
    Mat lhs = pw.transpose() * pw, rhs = qw.transpose() * qw;
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(lhs, rhs);
    if (es.info() != Eigen::Success) return false;
    const Vec& lam = es.eigenvalues();
    const Mat& vec = es.eigenvectors();
    const int top = static_cast<int>(lam.size()) - 1;
    for (int i = top; i >= 0; --i) {
      double val = std::sqrt(std::max(lam(i), 0.0));
      if (val <= out.value * (1 + 1e-12)) return i == top;
      std::vector<int> group;
      for (int j = 0; j < lam.size(); ++j)
        if (std::abs(lam(j) - lam(i)) <= 1e-9 * std::max(1.0, std::abs(lam(i)))) group.push_back(j);
      Mat e(w.cols(), static_cast<int>(group.size()));
      for (size_t g = 0; g < group.size(); ++g) e.col(static_cast<int>(g)) = vec.col(group[g]);
      Mat sp = hstack(b * w * e, b * z);
      PolyCone attained = f.intersect(subspace(dim, column_basis(sp)));
      bool hit = false;
      for (const Vec& g : generators(attained)) {
        Vec uq = pc.q * g;
        double un = uq.norm();
        if (un <= qtol) continue;
        Vec xs = pc.p * g / un;
        double v = xs.norm();
        if (v > out.value) {
          out.value = v;
          out.xstar = xs;
          out.ustar = uq / un;
        }
        hit = true;
      }
      if (hit) return group.back() == top;
      i = group.front();
    }
    return false;
  };
  if (process(pc.param)) return out;
  std::vector<PolyCone> fs = pc.param.faces();
  if (static_cast<long>(fs.size()) > kFaceCap) throw BudgetError("outer_norm: too many faces");
  for (const PolyCone& f : fs) process(f);
  return out;
}

// Key identifying a piece up to rounding, for deduplication.
std::string piece_key(const LinearPiece& pc) {
  auto put = [](std::string& out, const Mat& a) {
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) out += std::to_string(std::llround(a(i, j) * 1e8)) + ",";
    out += ";";
  };
  std::vector<std::string> rays;
  for (const Vec& r : pc.param.rays()) {
    std::string k;
    put(k, r / r.norm());
    rays.push_back(k);
  }
  std::sort(rays.begin(), rays.end());
  std::string key;
  for (const std::string& r : rays) key += r;
  key += "|";
  Mat l = column_basis(pc.param.lineality());
  put(key, l * l.transpose());
  put(key, pc.p);
  put(key, pc.q);
  return key;
}

// Distinct pieces with their norms, shared across strata.
struct PieceTable {
  std::map<std::string, int> index;
  std::vector<LinearPiece> pieces;
  std::vector<PieceNorm> norms;

  int add(LinearPiece pc) {
    std::string k = piece_key(pc);
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(pieces.size());
    index.emplace(std::move(k), id);
    pieces.push_back(std::move(pc));
    return id;
  }
  const PieceNorm& norm(int id) {
    if (norms.size() < pieces.size()) norms.resize(pieces.size());
    if (!computed.count(id)) {
      norms[id] = piece_norm(pieces[id]);
      computed.insert(id);
    }
    return norms[id];
  }

 private:
  std::set<int> computed;
};

PHMap make_map(int m, int n, std::vector<LinearPiece> pieces) {
  PHMap h;
  h.m = m;
  h.n = n;
  h.pieces = std::move(pieces);
  return h;
}

// Coderivative graphs contain the origin even when every piece vanished.
PHMap with_origin(PHMap h) {
  if (h.pieces.empty()) h.pieces.push_back({PolyCone::zero(h.m + h.n), Mat::Zero(h.n, h.m + h.n),
                                             Mat::Zero(h.m, h.m + h.n)});
  return h;
}

void check_point(const StratifiedMapping& s, const HPolyhedron* x_set, const Vec& xbar, const Vec& ubar) {
  if (xbar.size() != s.n || ubar.size() != s.m) throw DomainError("coderivative: dimension mismatch");
  if (x_set && !x_set->contains(xbar)) throw DomainError("coderivative: xbar is not in X");
  if (!s.in_graph(xbar, ubar)) throw DomainError("coderivative: (xbar, ubar) is not on the graph");
}

// Label of the stratum of s containing z (searched along the ray to z).
std::string original_label(const StratifiedMapping& s, const Vec& zbar, const Vec& dir, const std::string& fallback) {
  if (dir.norm() == 0) {
    for (const Stratum& st : s.strata)
      if (st.relint_contains(zbar)) return st.label;
    return fallback;
  }
  Vec d = dir / dir.norm();
  for (double t : {1.0, 1e-2, 1e-4, 1e-6}) {
    for (const Stratum& st : s.strata)
      if (st.relint_contains(zbar + t * d)) return st.label;
  }
  return fallback;
}

struct LocalData {
  StratifiedMapping cone;
  PolyCone tx;  // T_X(xbar)
};

LocalData local_data(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar, const Vec& ubar) {
  return {local_cone(s, &x_set, xbar, ubar), tangent_cone(x_set, xbar)};
}

// Tangent cone of the cone k (in R^n) on a cell of R^{n+m}: a row is
// active iff its lift lies in the row space of the cell's affine hull.
PolyCone cone_tangent(const PolyCone& k, const Stratum& st) {
  const Mat& a = k.ineq();
  const int n = k.dim();
  Mat c = st.cell.C();
  Mat basis = c.rows() > 0 ? column_basis(Mat(c.transpose())) : Mat(c.cols(), 0);
  std::vector<int> active;
  for (int i = 0; i < a.rows(); ++i) {
    Vec r = Vec::Zero(st.point.size());
    r.head(n) = a.row(i).transpose();
    Vec res = basis.cols() > 0 ? Vec(r - basis * (basis.transpose() * r)) : r;
    if (res.norm() <= 1e-8 * r.norm()) active.push_back(i);
  }
  return PolyCone::from_h(n, select_rows(a, active), k.eq());
}

struct CellNorms {
  PieceNorm regular, limiting;
  PolyCone t;
};

CellNorms cell_norms(const LocalData& d, const Stratum& st, int n, int m) {
  CellNorms c;
  c.t = cone_tangent(d.tx, st);
  auto best = [&](const ConeUnion& u) {
    PieceNorm out;
    for (const LinearPiece& pc : projected_pieces(u, c.t, n, m)) {
      PieceNorm v = piece_norm(pc);
      if (v.infinite) return v;
      if (v.value > out.value) out = v;
    }
    return out;
  };
  c.regular = best(ConeUnion(n + m, {st.regular}));
  c.limiting = best(st.normals);
  return c;
}

NeighborhoodCheck neighborhood_check(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                     const Vec& ubar, double kappa, const CheckConfig& cfg, bool regular) {
  check_point(s, &x_set, xbar, ubar);
  if (!(kappa >= 0)) throw DomainError("neighborhood check: kappa must be nonnegative");
  LocalData d = local_data(s, x_set, xbar, ubar);
  const int n = s.n, m = s.m;
  const auto& strata = d.cone.strata;
  std::vector<std::optional<CellNorms>> cache(strata.size());
  Vec zbar = vcat(xbar, ubar);
  const double tau = tolerance().tau();
  NeighborhoodCheck out;
  for (int i = 0; i < cfg.samples; ++i) {
    CounterRng rng(cfg.seed, 0xc0de, static_cast<std::uint64_t>(i));
    int j = std::min(static_cast<int>(rng.uniform() * strata.size()), static_cast<int>(strata.size()) - 1);
    const Stratum& st = strata[j];
    // Random point of the (conic) cell, scaled into the radius.
    Vec z = st.point;
    for (int tries = 0; tries < 8; ++tries) {
      Vec cand = st.point + 0.5 * st.point.norm() * rng.normal_vec(n + m);
      Mat hull = st.cell.C();
      if (hull.rows() > 0) cand -= hull.transpose() * hull.completeOrthogonalDecomposition().solve(hull * cand);
      if (st.relint_contains(cand)) {
        z = cand;
        break;
      }
    }
    double zn = z.norm();
    Vec pt = zn > 0 ? Vec(zbar + cfg.radius * rng.uniform(0.05, 1.0) * z / zn) : zbar;
    Vec x = pt.head(n), u = pt.tail(m);
    if (!x_set.contains(x) || !s.in_graph(x, u)) continue;
    ++out.samples;
    if (!cache[j]) cache[j] = cell_norms(d, st, n, m);
    const PieceNorm& pn = regular ? cache[j]->regular : cache[j]->limiting;
    if (pn.value > kappa * (1 + tau) + tau) {
      NeighborhoodWitness w;
      w.x = x;
      w.u = u;
      w.xstar = pn.xstar;
      w.ustar = pn.ustar;
      Vec pr = cache[j]->t.project(pn.xstar);
      w.w = pr / pr.norm();
      w.label = original_label(s, pt, Vec::Zero(n + m), st.label);
      out.pass = false;
      out.witness = w;
      return out;
    }
  }
  return out;
}

ConeUnion directional_kernel(const ConeUnion& normals, int n, int m) {
  ConeUnion out(n);
  Mat sel = Mat::Zero(m, n + m);
  sel.rightCols(m) = Mat::Identity(m, m);
  Mat px = Mat::Zero(n, n + m);
  px.leftCols(n) = Mat::Identity(n, n);
  for (const PolyCone& k : normals.pieces())
    out.add(k.intersect(PolyCone::from_h(n + m, Mat(0, n + m), sel)).image(px));
  return out;
}

bool union_is_zero(const ConeUnion& u) {
  for (const PolyCone& k : u.pieces())
    if (!k.is_zero()) return false;
  return true;
}

}  // namespace

bool PHMap::contains(const Vec& ustar, const Vec& xstar) const {
  const double tol = 1e-9 * std::max(1.0, std::max(ustar.norm(), xstar.norm()));
  Vec f = vcat(xstar, ustar);
  for (const LinearPiece& pc : pieces) {
    std::vector<Vec> gens = generators(pc.param);
    if (gens.empty()) {
      if (f.norm() <= tol) return true;
      continue;
    }
    Mat g(pc.param.dim(), static_cast<int>(gens.size()));
    for (size_t j = 0; j < gens.size(); ++j) g.col(static_cast<int>(j)) = gens[j];
    if (nnls(vstack(pc.p * g, pc.q * g), f).residual_norm <= tol) return true;
  }
  return false;
}

ConeUnion PHMap::graph() const {
  ConeUnion out(m + n);
  for (const LinearPiece& pc : pieces) out.add(pc.param.image(vstack(pc.q, pc.p)));
  return out;
}

ConeUnion PHMap::kernel() const {
  ConeUnion out(n);
  for (const LinearPiece& pc : pieces) {
    const int dim = pc.param.dim();
    out.add(pc.param.intersect(PolyCone::from_h(dim, Mat(0, dim), pc.q)).image(pc.p));
  }
  return out;
}

std::vector<HPolyhedron> PHMap::values(const Vec& ustar) const {
  std::vector<HPolyhedron> out;
  for (const LinearPiece& pc : pieces) {
    const int dim = pc.param.dim();
    HPolyhedron fiber(pc.param.ineq(), Vec::Zero(pc.param.ineq().rows()), vstack(pc.param.eq(), pc.q),
                      vcat(Vec::Zero(pc.param.eq().rows()), ustar));
    if (fiber.empty()) continue;
    VRep v = hrep_to_vrep(fiber);
    VRep img;
    img.n = n;
    for (const Vec& p : v.vertices) img.vertices.push_back(pc.p * p);
    for (const Vec& r : v.rays) img.rays.push_back(pc.p * r);
    img.lineality = column_basis(pc.p * v.lineality);
    out.push_back(vrep_to_hrep(img));
    (void)dim;
  }
  return out;
}

OuterNorm outer_norm(const PHMap& h) {
  OuterNorm out;
  for (const LinearPiece& pc : h.pieces) {
    PieceNorm v = piece_norm(pc);
    if (v.infinite) {
      out.value = kInf;
      out.xstar = v.xstar;
      out.ustar = v.ustar;
      return out;
    }
    if (v.value > out.value) {
      out.value = v.value;
      out.xstar = v.xstar;
      out.ustar = v.ustar;
    }
  }
  return out;
}

PolyCone stratum_tangent(const PolyCone& tx, const Stratum& st) { return cone_tangent(tx, st); }

StratifiedMapping local_cone(const StratifiedMapping& s, const HPolyhedron* x_set, const Vec& xbar, const Vec& ubar) {
  check_point(s, x_set, xbar, ubar);
  Vec zbar = vcat(xbar, ubar);
  std::vector<HPolyhedron> cones;
  for (const HPolyhedron& p : s.pieces) {
    HPolyhedron r = x_set ? p.intersect(x_set->lift(0, s.m)) : p;
    if (r.empty() || !r.contains(zbar)) continue;
    cones.push_back(cone_as_polyhedron(tangent_cone(r, zbar)));
  }
  StratifiedMapping out = stratify_union(cones, s.n, s.m);
  for (Stratum& st : out.strata) st.label = original_label(s, zbar, st.point, st.label);
  return out;
}

PHMap coderivative(const StratifiedMapping& s, const Vec& x, const Vec& u) {
  check_point(s, nullptr, x, u);
  ConeUnion nc = limiting_normal_cone(s, x, u);
  std::vector<LinearPiece> pieces;
  for (const PolyCone& k : nc.pieces()) pieces.push_back(normal_piece(k, s.n, s.m));
  return with_origin(make_map(s.m, s.n, std::move(pieces)));
}

PHMap projectional_coderivative(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                const Vec& ubar) {
  check_point(s, &x_set, xbar, ubar);
  LocalData d = local_data(s, x_set, xbar, ubar);
  PieceTable table;
  for (const Stratum& st : d.cone.strata) {
    PolyCone t = cone_tangent(d.tx, st);
    for (LinearPiece& pc : projected_pieces(st.normals, t, s.n, s.m)) table.add(std::move(pc));
  }
  return with_origin(make_map(s.m, s.n, std::move(table.pieces)));
}

PHMap smooth_projectional_coderivative(const Mat& j, const SmoothSet& x_set, const Vec& xbar) {
  const int m = static_cast<int>(j.rows()), n = static_cast<int>(j.cols());
  if (xbar.size() != n) throw DomainError("smooth coderivative: dimension mismatch");
  const double tau = tolerance().tau() * std::max(1.0, xbar.norm());
  std::vector<LinearPiece> pieces;
  PolyCone whole = PolyCone::whole(m);
  if (x_set.kind == SmoothSet::Kind::kAffine) {
    const Mat& b = x_set.b;
    if (b.cols() != n || x_set.beta.size() != b.rows()) throw SchemaError("smooth coderivative: bad affine set");
    if (b.rows() > 0 && (b * xbar - x_set.beta).norm() > tau)
      throw DomainError("smooth coderivative: xbar is not in the affine set");
    if (b.rows() > 0 && numeric_rank(b) == n)
      throw DomainError("smooth coderivative: the affine set has no interior-free directions");
    Mat k = null_space(b, n);
    pieces.push_back({whole, k * k.transpose() * j.transpose(), Mat::Identity(m, m)});
  } else {
    const Vec& a = x_set.a;
    if (a.size() != n || x_set.beta.size() != 1) throw SchemaError("smooth coderivative: bad halfspace");
    if (std::abs(a.dot(xbar) - x_set.beta(0)) > tau)
      throw DomainError("smooth coderivative: xbar is not on the boundary of the halfspace");
    double aa = a.squaredNorm();
    Mat proj = Mat::Identity(n, n) - a * a.transpose() / aa;
    pieces.push_back({whole, j.transpose(), Mat::Identity(m, m)});
    pieces.push_back({whole, proj * j.transpose(), Mat::Identity(m, m)});
    // Segment part: (y, s) with <J^T y, a> <= 0 and 0 <= s |a|^2 <= -<J^T y, a>.
    Vec ja = j * a;
    Mat ineq = Mat::Zero(3, m + 1);
    ineq.block(0, 0, 1, m) = ja.transpose();
    ineq(1, m) = -1.0;
    ineq.block(2, 0, 1, m) = ja.transpose();
    ineq(2, m) = aa;
    Mat p(n, m + 1), q = Mat::Zero(m, m + 1);
    p << j.transpose(), a;
    q.leftCols(m) = Mat::Identity(m, m);
    pieces.push_back({PolyCone::from_h(m + 1, ineq, Mat(0, m + 1)), p, q});
  }
  return make_map(m, n, std::move(pieces));
}

CriterionReport check_criterion(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                const Vec& ubar) {
  check_point(s, &x_set, xbar, ubar);
  LocalData d = local_data(s, x_set, xbar, ubar);
  CriterionReport rep;
  PieceTable table;
  std::map<std::string, double> kappa;
  std::vector<std::string> order;
  std::optional<int> best;
  for (const Stratum& st : d.cone.strata) {
    PolyCone t = cone_tangent(d.tx, st);
    double k = 0.0;
    for (LinearPiece& pc : projected_pieces(st.normals, t, s.n, s.m)) {
      int id = table.add(std::move(pc));
      const PieceNorm& v = table.norm(id);
      k = std::max(k, v.value);
      if (!best || v.value > table.norm(*best).value) best = id;
    }
    if (!kappa.count(st.label)) {
      order.push_back(st.label);
      kappa[st.label] = k;
    } else {
      kappa[st.label] = std::max(kappa[st.label], k);
    }
  }
  // A piece has infinite norm iff it maps a nonzero kernel element.
  if (best && table.norm(*best).infinite) rep.kernel_witness = table.norm(*best).xstar;
  rep.holds = !rep.kernel_witness.has_value();
  rep.modulus = best ? table.norm(*best).value : 0.0;
  for (const std::string& l : order) rep.per_stratum.push_back({l, kappa[l]});
  return rep;
}

NeighborhoodCheck neighborhood_necessity_check(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                               const Vec& ubar, double kappa, const CheckConfig& cfg) {
  return neighborhood_check(s, x_set, xbar, ubar, kappa, cfg, true);
}

NeighborhoodCheck neighborhood_sufficiency_check(const StratifiedMapping& s, const HPolyhedron& x_set,
                                                 const Vec& xbar, const Vec& ubar, double kappa,
                                                 const CheckConfig& cfg) {
  return neighborhood_check(s, x_set, xbar, ubar, kappa, cfg, false);
}

PHMap directional_coderivative(const StratifiedMapping& s, const Vec& xbar, const Vec& ubar, const Vec& dx,
                               const Vec& du) {
  StratifiedMapping loc = local_cone(s, nullptr, xbar, ubar);
  if (!loc.in_graph(dx, du)) return make_map(s.m, s.n, {});
  ConeUnion nc = limiting_normal_cone(loc, dx, du);
  std::vector<LinearPiece> pieces;
  for (const PolyCone& k : nc.pieces()) pieces.push_back(normal_piece(k, s.n, s.m));
  return make_map(s.m, s.n, std::move(pieces));
}

DirectionalReport directional_sufficiency_check(const StratifiedMapping& s, const HPolyhedron& x_set,
                                                const Vec& xbar, const Vec& ubar) {
  check_point(s, &x_set, xbar, ubar);
  const int n = s.n, m = s.m;
  StratifiedMapping loc = local_cone(s, nullptr, xbar, ubar);
  StratifiedMapping restricted = local_cone(s, &x_set, xbar, ubar);
  PolyCone tx = tangent_cone(x_set, xbar);
  DirectionalReport rep;
  std::vector<std::pair<Vec, Vec>> seen;
  auto visit = [&](const Vec& dx, const Vec& du) {
    Vec z = vcat(dx, du);
    if (z.norm() <= tolerance().tau()) return;
    for (auto& [a, b] : seen)
      if ((vcat(a, b) - z).norm() <= 1e-9 * std::max(1.0, z.norm())) return;
    seen.push_back({dx, du});
    ConeUnion ker = directional_kernel(limiting_normal_cone(loc, dx, du), n, m);
    if (!union_is_zero(ker)) rep.failures.push_back({dx, du, ker});
  };
  for (const Vec& g : generators(tx)) {
    bool lifted = false;
    for (const HPolyhedron& sl : slice_pieces(loc.pieces, n, g)) {
      if (sl.empty()) continue;
      lifted = true;
      VRep v = hrep_to_vrep(sl);
      if (v.vertices.empty()) v.vertices.push_back(*sl.relint_point());
      for (const Vec& u : v.vertices) visit(g, u);
    }
    if (!lifted) rep.lifting_holds = false;
  }
  for (const Stratum& st : restricted.strata) visit(st.point.head(n), st.point.tail(m));
  rep.pass = rep.failures.empty();
  return rep;
}

}  // namespace polylip
