#include "polylip/functions.hpp"

#include <algorithm>
#include <cmath>

#include "polylip/coderivative.hpp"
#include "polylip/errors.hpp"
#include "polylip/lp.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

HPolyhedron cone_poly(const PolyCone& k) {
  return HPolyhedron(k.ineq(), Vec::Zero(k.ineq().rows()), k.eq(), Vec::Zero(k.eq().rows()));
}

std::vector<Vec> lineality_vectors(const Mat& l) {
  std::vector<Vec> out;
  for (int j = 0; j < l.cols(); ++j) out.emplace_back(l.col(j));
  return out;
}

StratifiedMapping pieces_only(int n, int m, std::vector<HPolyhedron> pieces) {
  StratifiedMapping s;
  s.n = n;
  s.m = m;
  s.pieces = std::move(pieces);
  return s;
}

bool same_value(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

// Is every point and direction of v inside p?
bool covered(const VRep& v, const HPolyhedron& p) {
  for (const Vec& x : v.vertices)
    if (!p.contains(x)) return false;
  auto direction_in = [&p](const Vec& r) {
    double tol = 1e-9 * std::max(1.0, r.norm());
    if (p.num_ineq() > 0 && (p.A() * r).maxCoeff() > tol) return false;
    if (p.num_eq() > 0 && (p.C() * r).cwiseAbs().maxCoeff() > tol) return false;
    return true;
  };
  for (const Vec& r : v.rays)
    if (!direction_in(r)) return false;
  for (int j = 0; j < v.lineality.cols(); ++j)
    if (!direction_in(v.lineality.col(j)) || !direction_in(-v.lineality.col(j))) return false;
  return true;
}

void require_domain(const PLFunction& f, const Vec& xbar) {
  if (xbar.size() != f.dim()) throw DomainError("pl function: dimension mismatch");
  if (!f.in_domain(xbar)) throw DomainError("pl function: xbar is not in dom f");
}

void require_inclusion(const PLFunction& f, const HPolyhedron& x_set, const Vec& xbar) {
  if (x_set.dim() != f.dim()) throw DomainError("pl function: X has the wrong dimension");
  if (!x_set.contains(xbar)) throw DomainError("pl function: xbar is not in X");
  ConeUnion dom(f.dim());
  for (const PLCell& c : f.cells())
    if (c.cell.contains(xbar)) dom.add(tangent_cone(c.cell, xbar));
  ConeUnion xs(f.dim(), {tangent_cone(x_set, xbar)});
  if (!dom.covers(xs)) throw DomainError("pl function: X is not contained in dom f near xbar");
}

StratifiedMapping epi_map(const PLFunction& f) { return pieces_only(f.dim(), 1, f.epigraph()); }

StratifiedMapping local_epigraph(const PLFunction& f, const HPolyhedron* x_set, const Vec& xbar) {
  return local_cone(epi_map(f), x_set, xbar, Vec::Constant(1, f.value(xbar)));
}

// Strata on the graph of f carry normals (v, -1).
bool on_graph(const Stratum& st) {
  for (const PolyCone& k : st.normals.pieces()) {
    for (const Vec& r : k.rays())
      if (r(r.size() - 1) < -1e-9) return true;
    const Mat& l = k.lineality();
    for (int j = 0; j < l.cols(); ++j)
      if (std::abs(l(l.rows() - 1, j)) > 1e-9) return true;
  }
  return false;
}

// {v : (v, -1) in k}.
HPolyhedron unit_slice(const PolyCone& k, int n) {
  const Mat& a = k.ineq();
  const Mat& e = k.eq();
  return HPolyhedron(a.leftCols(n), a.col(n), e.leftCols(n), e.col(n));
}

// Is <psi, z> > 0 somewhere on the (conic) cell?
bool strict_somewhere(const HPolyhedron& cell, const Vec& psi) {
  const int n = cell.dim();
  Mat a = vstack(vstack(cell.A(), Mat::Identity(n, n)), -Mat::Identity(n, n));
  Vec b = vcat(vcat(cell.b(), Vec::Ones(n)), Vec::Ones(n));
  LpResult r = lp_maximize(psi, a, b, cell.C(), cell.d());
  return r.optimal() && r.value > 1e-9;
}

double reciprocal(double d) {
  if (std::isinf(d)) return 0.0;
  if (d <= tolerance().tau()) return kInf;
  return 1.0 / d;
}

// Graph pieces of the level-set map in (alpha, x).
std::vector<HPolyhedron> level_set_pieces(const PLFunction& f, const Vec& xbar, const Vec& vbar) {
  const int n = f.dim();
  std::vector<HPolyhedron> pieces;
  for (const PLCell& c : f.cells()) {
    const HPolyhedron& p = c.cell;
    Mat a = Mat::Zero(p.num_ineq() + 1, n + 1);
    a.block(0, 1, p.num_ineq(), n) = p.A();
    a(p.num_ineq(), 0) = -1.0;
    a.block(p.num_ineq(), 1, 1, n) = (c.g - vbar).transpose();
    Vec b = vcat(p.b(), Vec::Constant(1, -c.c - vbar.dot(xbar)));
    Mat e = Mat::Zero(p.num_eq(), n + 1);
    e.rightCols(n) = p.C();
    pieces.emplace_back(a, b, e, p.d());
  }
  return pieces;
}

}  // namespace

PLFunction::PLFunction(int n, std::vector<PLCell> cells) : n_(n) {
  for (PLCell& c : cells) {
    if (c.cell.dim() != n || c.g.size() != n) throw SchemaError("pl function: cell has the wrong dimension");
    if (!std::isfinite(c.c) || !c.g.allFinite()) throw SchemaError("pl function: non-finite cell formula");
    if (!c.cell.empty()) cells_.push_back(std::move(c));
  }
  if (cells_.empty()) throw SchemaError("pl function: no nonempty cells");
  for (size_t i = 0; i < cells_.size(); ++i) {
    for (size_t j = i + 1; j < cells_.size(); ++j) {
      HPolyhedron q = cells_[i].cell.intersect(cells_[j].cell);
      if (q.empty()) continue;
      Vec dg = cells_[i].g - cells_[j].g;
      double dc = cells_[i].c - cells_[j].c;
      for (double sgn : {1.0, -1.0}) {
        LpResult r = lp_maximize(sgn * dg, q.A(), q.b(), q.C(), q.d());
        double scale = 1e-8 * std::max({1.0, std::abs(dc), r.optimal() ? std::abs(r.value) : 0.0});
        if (r.status == LpStatus::kUnbounded || (r.optimal() && r.value + sgn * dc > scale))
          throw SchemaError("pl function: cells " + std::to_string(i) + " and " + std::to_string(j) +
                            " disagree on their overlap");
      }
    }
  }
}

bool PLFunction::in_domain(const Vec& x) const {
  for (const PLCell& c : cells_)
    if (c.cell.contains(x)) return true;
  return false;
}

double PLFunction::value(const Vec& x) const {
  // The cell violated least, so points just inside one cell use its formula.
  const PLCell* best = nullptr;
  double best_gap = kInf;
  for (const PLCell& c : cells_) {
    if (!c.cell.contains(x)) continue;
    const HPolyhedron& p = c.cell;
    double gap = 0.0;
    if (p.num_ineq() > 0) gap = std::max(gap, (p.A() * x - p.b()).maxCoeff());
    if (p.num_eq() > 0) gap = std::max(gap, (p.C() * x - p.d()).cwiseAbs().maxCoeff());
    if (gap < best_gap) {
      best_gap = gap;
      best = &c;
    }
  }
  return best ? best->g.dot(x) + best->c : kInf;
}

std::vector<HPolyhedron> PLFunction::epigraph() const {
  std::vector<HPolyhedron> out;
  for (const PLCell& c : cells_) {
    const HPolyhedron& p = c.cell;
    Mat a = Mat::Zero(p.num_ineq() + 1, n_ + 1);
    a.topLeftCorner(p.num_ineq(), n_) = p.A();
    a.block(p.num_ineq(), 0, 1, n_) = c.g.transpose();
    a(p.num_ineq(), n_) = -1.0;
    Vec b = vcat(p.b(), Vec::Constant(1, -c.c));
    Mat e = Mat::Zero(p.num_eq(), n_ + 1);
    e.leftCols(n_) = p.C();
    out.emplace_back(a, b, e, p.d());
  }
  return out;
}

void PolySet::add(const HPolyhedron& p) {
  if (p.empty()) return;
  add(hrep_to_vrep(p));
}

void PolySet::add(const VRep& v) {
  if (v.vertices.empty()) return;
  for (const HPolyhedron& p : pieces)
    if (covered(v, p)) return;
  HPolyhedron h = vrep_to_hrep(v);
  for (size_t i = 0; i < pieces.size();) {
    if (covered(gens[i], h)) {
      pieces.erase(pieces.begin() + static_cast<long>(i));
      gens.erase(gens.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  pieces.push_back(h);
  gens.push_back(v);
}

bool PolySet::bounded() const {
  for (const VRep& v : gens)
    if (!v.rays.empty() || v.lineality.cols() > 0) return false;
  return true;
}

bool PolySet::contains(const Vec& v) const {
  for (const HPolyhedron& p : pieces)
    if (p.contains(v)) return true;
  return false;
}

double PolySet::max_norm() const {
  if (!bounded()) return kInf;
  double best = 0.0;
  for (const VRep& v : gens)
    for (const Vec& x : v.vertices) best = std::max(best, x.norm());
  return best;
}

double PolySet::distance(const Vec& v) const {
  double best = kInf;
  for (const HPolyhedron& p : pieces) best = std::min(best, polylip::distance(v, p));
  return best;
}

ConeUnion PolySet::horizon() const {
  ConeUnion out(n);
  for (const VRep& v : gens) out.add(PolyCone::from_g(n, v.rays, lineality_vectors(v.lineality)));
  if (out.empty()) out.add(PolyCone::zero(n));
  return out;
}

std::optional<Vec> PolySet::recession_direction() const {
  for (const VRep& v : gens) {
    if (!v.rays.empty()) return v.rays.front();
    if (v.lineality.cols() > 0) return Vec(v.lineality.col(0));
  }
  return std::nullopt;
}

PolySet project_onto_cone(const HPolyhedron& g, const PolyCone& t) {
  const int n = g.dim();
  PolySet out;
  out.n = n;
  if (g.empty()) return out;
  PolyCone tp = t.polar();
  for (const PolyCone& f : t.faces()) {
    Mat sb = f.span_basis();
    PolyCone nf = sb.cols() > 0 ? PolyCone::from_h(n, tp.ineq(), vstack(tp.eq(), Mat(sb.transpose()))) : tp;
    std::vector<Vec> rays = f.rays();
    for (const Vec& r : nf.rays()) rays.push_back(r);
    std::vector<Vec> lin = lineality_vectors(f.lineality());
    for (const Vec& l : lineality_vectors(nf.lineality())) lin.push_back(l);
    PolyCone region = PolyCone::from_g(n, rays, lin);
    HPolyhedron r(vstack(g.A(), region.ineq()), vcat(g.b(), Vec::Zero(region.ineq().rows())),
                  vstack(g.C(), region.eq()), vcat(g.d(), Vec::Zero(region.eq().rows())));
    if (r.empty()) continue;
    VRep v = hrep_to_vrep(r);
    Mat p = sb.cols() > 0 ? Mat(sb * sb.transpose()) : Mat(Mat::Zero(n, n));
    VRep img;
    img.n = n;
    for (const Vec& x : v.vertices) {
      Vec y = p * x;
      bool dup = false;
      for (const Vec& o : img.vertices) dup = dup || (o - y).norm() <= 1e-12 * std::max(1.0, y.norm());
      if (!dup) img.vertices.push_back(y);
    }
    for (const Vec& x : v.rays) {
      Vec y = p * x;
      if (y.norm() > 1e-9) img.rays.push_back(y / y.norm());
    }
    img.lineality = v.lineality.cols() > 0 ? column_basis(Mat(p * v.lineality)) : Mat(n, 0);
    out.add(img);
  }
  return out;
}

Subdifferentials subdifferentials(const PLFunction& f, const Vec& xbar) {
  require_domain(f, xbar);
  const int n = f.dim();
  StratifiedMapping loc = local_epigraph(f, nullptr, xbar);
  Subdifferentials out;
  out.basic.n = n;
  out.horizon = ConeUnion(n);
  for (const Stratum& st : loc.strata) {
    for (const PolyCone& k : st.normals.pieces()) {
      out.basic.add(unit_slice(k, n));
      out.horizon.add(PolyCone::from_h(n, k.ineq().leftCols(n), k.eq().leftCols(n)));
    }
  }
  return out;
}

Subdifferentials projectional_subdifferentials(const PLFunction& f, const HPolyhedron& x_set, const Vec& xbar) {
  require_domain(f, xbar);
  require_inclusion(f, x_set, xbar);
  const int n = f.dim();
  StratifiedMapping loc = local_epigraph(f, &x_set, xbar);
  PolyCone tx = tangent_cone(x_set, xbar);
  Subdifferentials out;
  out.basic.n = n;
  for (const Stratum& st : loc.strata) {
    if (!on_graph(st)) continue;
    PolyCone t = stratum_tangent(tx, st);
    for (const PolyCone& k : st.normals.pieces()) {
      PolySet ps = project_onto_cone(unit_slice(k, n), t);
      for (const VRep& v : ps.gens) out.basic.add(v);
    }
  }
  out.horizon = out.basic.horizon();
  return out;
}

LipReport relative_lip_modulus(const PLFunction& f, const HPolyhedron& x_set, const Vec& xbar) {
  LipReport rep;
  rep.projectional = projectional_subdifferentials(f, x_set, xbar);
  rep.subgradients_bounded = rep.projectional.basic.bounded();
  rep.horizon_trivial = true;
  for (const PolyCone& k : rep.projectional.horizon.pieces()) rep.horizon_trivial = rep.horizon_trivial && k.is_zero();
  rep.modulus = rep.projectional.basic.max_norm();
  if (!rep.subgradients_bounded) rep.recession_witness = rep.projectional.basic.recession_direction();
  CriterionReport cr = check_criterion(epi_map(f), x_set, xbar, Vec::Constant(1, f.value(xbar)));
  rep.profile_modulus = cr.modulus;
  rep.lipschitz = cr.holds;
  rep.routes_agree = same_value(rep.modulus, rep.profile_modulus) && rep.lipschitz == rep.horizon_trivial &&
                     rep.horizon_trivial == rep.subgradients_bounded;
  return rep;
}

PolySet outer_limiting_subdifferential(const PLFunction& f, const Vec& xbar, const Vec& vbar) {
  require_domain(f, xbar);
  const int n = f.dim();
  if (vbar.size() != n) throw DomainError("outer limiting subdifferential: vbar has the wrong dimension");
  StratifiedMapping loc = local_epigraph(f, nullptr, xbar);
  Vec psi(n + 1);
  psi << -vbar, 1.0;
  PolySet out;
  out.n = n;
  for (const Stratum& st : loc.strata) {
    if (!on_graph(st) || !strict_somewhere(st.cell, psi)) continue;
    for (const PolyCone& k : st.normals.pieces()) out.add(unit_slice(k, n));
  }
  return out;
}

StratifiedMapping level_set_mapping(const PLFunction& f, const Vec& xbar, const Vec& vbar) {
  const int n = f.dim();
  if (xbar.size() != n || vbar.size() != n) throw DomainError("level set: dimension mismatch");
  return stratify_union(level_set_pieces(f, xbar, vbar), 1, n);
}

StratifiedMapping profile_mapping(const PLFunction& f) { return stratify_union(f.epigraph(), f.dim(), 1); }

LevelSetReport level_set_analysis(const PLFunction& f, const Vec& xbar, const Vec& vbar) {
  require_domain(f, xbar);
  const int n = f.dim();
  if (vbar.size() != n) throw DomainError("level set: vbar has the wrong dimension");
  LevelSetReport rep;
  rep.basic = subdifferentials(f, xbar).basic;
  rep.outer_limiting = outer_limiting_subdifferential(f, xbar, vbar);
  double d_rel = rep.outer_limiting.distance(vbar);
  rep.relative_llp = d_rel > tolerance().tau();
  rep.lip_x = reciprocal(d_rel);
  rep.classical_lip = reciprocal(rep.basic.distance(vbar));

  const double fx = f.value(xbar);
  StratifiedMapping s = pieces_only(1, n, level_set_pieces(f, xbar, vbar));
  Vec alpha = Vec::Constant(1, fx);
  HPolyhedron above(Mat::Constant(1, 1, -1.0), Vec::Constant(1, -fx));
  rep.coderivative_lip_x = check_criterion(s, above, alpha, xbar).modulus;
  rep.coderivative_classical = check_criterion(s, HPolyhedron::whole(1), alpha, xbar).modulus;
  rep.routes_agree = same_value(rep.lip_x, rep.coderivative_lip_x) &&
                     same_value(rep.classical_lip, rep.coderivative_classical);
  return rep;
}

SublinearReport sublinear_analysis(const HPolyhedron& d) {
  if (d.empty()) throw DomainError("sublinear: D is empty");
  const int n = d.dim();
  SublinearReport rep;
  rep.horizon = horizon_cone(d);
  rep.domain = rep.horizon.polar();
  rep.subgradients.n = n;
  rep.recession_matches = true;
  for (const Face& fc : faces(d)) {
    PolyCone nc = normal_cone_convex(d, fc.relint);
    FacePair pr;
    pr.x = nc.relint_point();
    SupportResult sr = support(d, pr.x);
    if (!sr.face) continue;
    pr.face = sr.face->polyhedron();
    pr.horizon_face = pr.x.norm() > 0
                          ? PolyCone::from_h(n, rep.horizon.ineq(), vstack(rep.horizon.eq(), Mat(pr.x.transpose())))
                          : rep.horizon;
    pr.recession_matches = horizon_cone(pr.face).equals(pr.horizon_face);
    pr.excess = excess(pr.face, cone_poly(pr.horizon_face));
    pr.projected = project_onto_cone(pr.face, pr.horizon_face.polar());
    for (const VRep& v : pr.projected.gens) rep.subgradients.add(v);
    rep.recession_matches = rep.recession_matches && pr.recession_matches;
    rep.modulus = std::max(rep.modulus, pr.excess);
    rep.pairs.push_back(std::move(pr));
  }
  rep.subgradient_modulus = rep.subgradients.max_norm();
  return rep;
}

PLFunction support_function(const HPolyhedron& d) {
  if (d.empty()) throw DomainError("support function: D is empty");
  std::vector<Face> fs = faces(d);
  int lowest = d.dim();
  for (const Face& f : fs) lowest = std::min(lowest, f.dim());
  std::vector<PLCell> cells;
  for (const Face& f : fs) {
    if (f.dim() != lowest) continue;
    cells.push_back({cone_poly(normal_cone_convex(d, f.relint)), f.relint, 0.0});
  }
  return PLFunction(d.dim(), std::move(cells));
}

}  // namespace polylip
