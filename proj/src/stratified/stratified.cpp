#include "polylip/stratified.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "polylip/errors.hpp"
#include "polylip/lp.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

std::string index_set(const std::vector<int>& s) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i] + 1;
  os << "}";
  return os.str();
}

Vec zvec(const Vec& x, const Vec& u) { return vcat(x, u); }

}  // namespace

bool Stratum::relint_contains(const Vec& z) const {
  if (!cell.contains(z)) return false;
  for (int i = 0; i < cell.num_ineq(); ++i)
    if (cell.b()(i) - cell.A().row(i).dot(z) <= tolerance().tau()) return false;
  return true;
}

std::vector<HPolyhedron> slice_pieces(const std::vector<HPolyhedron>& pieces, int n, const Vec& x) {
  std::vector<HPolyhedron> out;
  if (pieces.empty()) return out;
  int m = pieces[0].dim() - n;
  Mat sel = Mat::Zero(n + m, m);
  sel.bottomRows(m) = Mat::Identity(m, m);
  Vec off = Vec::Zero(n + m);
  off.head(n) = x;
  for (const HPolyhedron& p : pieces) {
    HPolyhedron s = p.preimage(sel, off);
    if (!s.empty()) out.push_back(s);
  }
  return out;
}

bool StratifiedMapping::in_graph(const Vec& x, const Vec& u) const {
  Vec z = zvec(x, u);
  for (const HPolyhedron& p : pieces)
    if (p.contains(z)) return true;
  return false;
}

std::vector<HPolyhedron> StratifiedMapping::values(const Vec& x) const {
  if (evaluator) return evaluator(x);
  return slice_pieces(pieces, n, x);
}

std::vector<int> StratifiedMapping::adjacent_strata(const Vec& z) const {
  std::vector<int> out;
  for (size_t i = 0; i < strata.size(); ++i)
    if (strata[i].closure_contains(z)) out.push_back(static_cast<int>(i));
  return out;
}

std::string lcp_label(const std::vector<int>& i1, const std::vector<int>& i2, const std::vector<int>& i3) {
  return "(" + index_set(i1) + "," + index_set(i2) + "," + index_set(i3) + ")";
}

StratifiedMapping build_lcp(const Mat& mm) {
  const int m = static_cast<int>(mm.rows());
  if (mm.cols() != m) throw DomainError("build_lcp: M must be square");
  StratifiedMapping s;
  s.n = m;
  s.m = m;
  const int dim = 2 * m;
  // Rows selecting x_i and w_i = (M x + q)_i in graph coordinates (q, x).
  auto xrow = [&](int i) {
    Vec r = Vec::Zero(dim);
    r(m + i) = 1.0;
    return r;
  };
  auto wrow = [&](int i) {
    Vec r = Vec::Zero(dim);
    r(i) = 1.0;
    r.tail(m) = mm.row(i).transpose();
    return r;
  };
  // Normal generators: u*_i direction (e_i, M^T e_i), v*_i direction (0, e_i).
  auto ugen = [&](int i) { return wrow(i); };
  auto vgen = [&](int i) { return xrow(i); };

  int total = 1;
  for (int i = 0; i < m; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    std::vector<int> assign(m);
    int c = code;
    for (int i = 0; i < m; ++i) {
      assign[i] = c % 3;
      c /= 3;
    }
    std::vector<int> i1, i2, i3;
    std::vector<Vec> ineq_rows, eq_rows;
    std::vector<Vec> lin_common;
    for (int i = 0; i < m; ++i) {
      if (assign[i] == 0) {
        i1.push_back(i);
        eq_rows.push_back(xrow(i));
        ineq_rows.push_back(-wrow(i));
        lin_common.push_back(vgen(i));
      } else if (assign[i] == 1) {
        i2.push_back(i);
        ineq_rows.push_back(-xrow(i));
        eq_rows.push_back(wrow(i));
        lin_common.push_back(ugen(i));
      } else {
        i3.push_back(i);
        eq_rows.push_back(xrow(i));
        eq_rows.push_back(wrow(i));
      }
    }
    if (i3.size() > 6) throw BudgetError("build_lcp: more than 6 biactive indices");
    Mat a(static_cast<int>(ineq_rows.size()), dim), e(static_cast<int>(eq_rows.size()), dim);
    for (size_t r = 0; r < ineq_rows.size(); ++r) a.row(static_cast<int>(r)) = ineq_rows[r].transpose();
    for (size_t r = 0; r < eq_rows.size(); ++r) e.row(static_cast<int>(r)) = eq_rows[r].transpose();
    Stratum st;
    st.cell = HPolyhedron(a, Vec::Zero(a.rows()), e, Vec::Zero(e.rows()));
    if (st.cell.empty()) continue;
    st.label = lcp_label(i1, i2, i3);
    // Relative interior point: q chosen so that w_i = 1 on I1, x_i = 1 on I2.
    Vec q = Vec::Zero(m), x = Vec::Zero(m);
    for (int i : i2) x(i) = 1.0;
    Vec w = Vec::Zero(m);
    for (int i : i1) w(i) = 1.0;
    q = w - mm * x;
    st.point = vcat(q, x);
    // Omega expansion over biactive indices.
    st.normals = ConeUnion(dim);
    int combos = 1;
    for (size_t i = 0; i < i3.size(); ++i) combos *= 3;
    for (int cc = 0; cc < combos; ++cc) {
      std::vector<Vec> rays, lin = lin_common;
      int t = cc;
      for (int i : i3) {
        int choice = t % 3;
        t /= 3;
        if (choice == 0) {
          lin.push_back(ugen(i));
        } else if (choice == 1) {
          lin.push_back(vgen(i));
        } else {
          rays.push_back(-ugen(i));
          rays.push_back(-vgen(i));
        }
      }
      st.normals.add(PolyCone::from_g(dim, rays, lin));
    }
    {
      std::vector<Vec> rays, lin = lin_common;
      for (int i : i3) {
        rays.push_back(-ugen(i));
        rays.push_back(-vgen(i));
      }
      st.regular = PolyCone::from_g(dim, rays, lin);
    }
    s.strata.push_back(std::move(st));
  }
  // Closed pieces: for each J, x_J = 0 <= w_J and x_{J^c} >= 0 = w_{J^c}.
  for (int mask = 0; mask < (1 << m); ++mask) {
    Mat a(m, dim), e(m, dim);
    for (int i = 0; i < m; ++i) {
      if (mask & (1 << i)) {
        e.row(i) = xrow(i).transpose();
        a.row(i) = -wrow(i).transpose();
      } else {
        a.row(i) = -xrow(i).transpose();
        e.row(i) = wrow(i).transpose();
      }
    }
    s.pieces.emplace_back(a, Vec::Zero(m), e, Vec::Zero(m));
  }
  return s;
}

StratifiedMapping build_linear_system(const Mat& a, const HPolyhedron& k) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (k.dim() != m) throw DomainError("build_linear_system: K has the wrong dimension");
  if (k.empty()) throw DomainError("build_linear_system: K is empty");
  StratifiedMapping s;
  s.n = m;
  s.m = n;
  const int dim = m + n;
  // (p, x) -> p + A x.
  Mat lin = Mat::Zero(m, dim);
  lin.leftCols(m) = Mat::Identity(m, m);
  lin.rightCols(n) = a;
  Mat up(dim, m);
  up.topRows(m) = Mat::Identity(m, m);
  up.bottomRows(n) = a.transpose();
  for (const Face& f : faces(k)) {
    Stratum st;
    st.cell = f.polyhedron().preimage(lin, Vec::Zero(m));
    st.regular = normal_cone_convex(k, f.relint).image(up);
    st.normals = ConeUnion(dim);
    st.normals.add(st.regular);
    std::ostringstream os;
    os << "F" << index_set(f.active);
    st.label = os.str();
    st.point = vcat(f.relint, Vec::Zero(n));
    s.strata.push_back(std::move(st));
  }
  s.pieces.push_back(k.preimage(lin, Vec::Zero(m)));
  HPolyhedron kk = k;
  Mat aa = a;
  s.evaluator = [kk, aa](const Vec& p) {
    std::vector<HPolyhedron> out;
    HPolyhedron v = kk.preimage(aa, p);
    if (!v.empty()) out.push_back(v);
    return out;
  };
  VRep vr = hrep_to_vrep(k);
  Mat l = hstack(vr.lineality, a);
  vr.lineality = l.cols() > 0 ? column_basis(l) : Mat(m, 0);
  s.domain = vrep_to_hrep(vr);
  return s;
}

StratifiedMapping stratify_union(const std::vector<HPolyhedron>& pieces, int n, int m, const StratifyOptions& opts) {
  const int dim = n + m;
  StratifiedMapping s;
  s.n = n;
  s.m = m;
  for (const HPolyhedron& p : pieces) {
    if (p.dim() != dim) throw DomainError("stratify_union: piece dimension mismatch");
    if (!p.empty()) s.pieces.push_back(p);
  }
  const double tau = tolerance().tau();
  // Hyperplanes of the arrangement, up to sign.
  std::vector<Vec> hn;
  std::vector<double> hb;
  auto find_or_add = [&](const Vec& a, double b) -> std::pair<int, int> {
    for (size_t j = 0; j < hn.size(); ++j) {
      if ((hn[j] - a).norm() <= 1e-9 && std::abs(hb[j] - b) <= 1e-9) return {static_cast<int>(j), 1};
      if ((hn[j] + a).norm() <= 1e-9 && std::abs(hb[j] + b) <= 1e-9) return {static_cast<int>(j), -1};
    }
    hn.push_back(a);
    hb.push_back(b);
    return {static_cast<int>(hn.size()) - 1, 1};
  };
  // Allowed signs per piece per hyperplane: bit 0 '-', bit 1 '0', bit 2 '+'.
  std::vector<std::vector<std::pair<int, int>>> reqs(s.pieces.size());
  // Hyperplane of each inequality row of each piece.
  std::vector<std::vector<int>> row_plane(s.pieces.size());
  for (size_t pi = 0; pi < s.pieces.size(); ++pi) {
    const HPolyhedron& p = s.pieces[pi];
    for (int i = 0; i < p.num_ineq(); ++i) {
      auto [j, o] = find_or_add(p.A().row(i).transpose(), p.b()(i));
      reqs[pi].push_back({j, o > 0 ? 0b011 : 0b110});
      row_plane[pi].push_back(j);
    }
    for (int i = 0; i < p.num_eq(); ++i) {
      auto [j, o] = find_or_add(p.C().row(i).transpose(), p.d()(i));
      (void)o;
      reqs[pi].push_back({j, 0b010});
    }
  }
  const int h = static_cast<int>(hn.size());
  std::vector<std::vector<int>> allowed(s.pieces.size(), std::vector<int>(h, 0b111));
  for (size_t pi = 0; pi < s.pieces.size(); ++pi)
    for (auto [j, mask] : reqs[pi]) allowed[pi][j] &= mask;

  double offset = 0.0;
  for (double v : hb) offset = std::max(offset, std::abs(v));
  const bool conic = offset == 0.0;
  const double box_radius = 1.0 + 100.0 * offset;

  long lps = 0;
  std::vector<int> sign(h, 0);
  struct Cell {
    std::vector<int> sign;  // -1, 0, +1
    Vec point;
    std::vector<int> pieces;
  };
  std::vector<Cell> cells;

  auto strict_point = [&](int depth) -> std::optional<Vec> {
    if (++lps > opts.lp_budget) throw BudgetError("stratify_union: LP budget exceeded");
    std::vector<int> strict, zero;
    for (int j = 0; j < depth; ++j) (sign[j] == 0 ? zero : strict).push_back(j);
    int ks = static_cast<int>(strict.size());
    Mat a = Mat::Zero(ks + 1 + 2 * dim, dim + 1);
    Vec b(ks + 1 + 2 * dim);
    for (int r = 0; r < ks; ++r) {
      int j = strict[r];
      double sg = sign[j] < 0 ? 1.0 : -1.0;
      a.block(r, 0, 1, dim) = sg * hn[j].transpose();
      a(r, dim) = 1.0;
      b(r) = sg * hb[j];
    }
    a(ks, dim) = 1.0;
    b(ks) = 1.0;
    // Keep the point at the scale of the offsets.
    a.block(ks + 1, 0, dim, dim) = Mat::Identity(dim, dim);
    a.block(ks + 1 + dim, 0, dim, dim) = -Mat::Identity(dim, dim);
    b.tail(2 * dim).setConstant(box_radius);
    Mat c = Mat::Zero(static_cast<int>(zero.size()), dim + 1);
    Vec d(static_cast<int>(zero.size()));
    for (size_t r = 0; r < zero.size(); ++r) {
      c.block(static_cast<int>(r), 0, 1, dim) = hn[zero[r]].transpose();
      d(static_cast<int>(r)) = hb[zero[r]];
    }
    Vec obj = Vec::Zero(dim + 1);
    obj(dim) = 1.0;
    LpResult res = lp_maximize(obj, a, b, c, d);
    bool ok = res.optimal() && (ks == 0 || res.value > tau);
    if (!ok && !conic) {
      res = lp_maximize(obj, a.topRows(ks + 1), b.head(ks + 1), c, d);
      ok = res.optimal() && (ks == 0 || res.value > tau);
    }
    if (!ok) return std::nullopt;
    return Vec(res.x.head(dim));
  };

  std::function<void(int, std::vector<int>)> dfs = [&](int depth, std::vector<int> alive) {
    if (depth == h) {
      auto pt = strict_point(depth);
      if (!pt) return;
      cells.push_back(Cell{sign, *pt, alive});
      return;
    }
    for (int sg : {-1, 0, 1}) {
      int bit = sg < 0 ? 0b001 : (sg == 0 ? 0b010 : 0b100);
      std::vector<int> next;
      for (int pi : alive)
        if (allowed[pi][depth] & bit) next.push_back(pi);
      if (next.empty()) continue;
      sign[depth] = sg;
      if (!strict_point(depth + 1)) continue;
      dfs(depth + 1, next);
    }
    sign[depth] = 0;
  };
  std::vector<int> all(s.pieces.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  if (!all.empty()) dfs(0, all);

  // Regular normal cone per cell: polar of the sum of tangent cones of the
  // pieces containing it.
  std::vector<PolyCone> regular;
  for (const Cell& c : cells) {
    std::vector<Vec> gens, lins;
    for (int pi : c.pieces) {
      std::vector<int> active;
      for (size_t i = 0; i < row_plane[pi].size(); ++i)
        if (c.sign[row_plane[pi][i]] == 0) active.push_back(static_cast<int>(i));
      PolyCone t = PolyCone::from_h(dim, select_rows(s.pieces[pi].A(), active), s.pieces[pi].C());
      for (const Vec& r : t.rays()) gens.push_back(r);
      for (int j = 0; j < t.lineality().cols(); ++j) lins.push_back(t.lineality().col(j));
    }
    regular.push_back(PolyCone::from_g(dim, gens, lins).polar());
  }
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    const Cell& c = cells[ci];
    Stratum st;
    std::vector<Vec> ar, er;
    std::vector<double> ab, eb;
    std::string label;
    for (int j = 0; j < h; ++j) {
      label += c.sign[j] < 0 ? '-' : (c.sign[j] == 0 ? '0' : '+');
      if (c.sign[j] == 0) {
        er.push_back(hn[j]);
        eb.push_back(hb[j]);
      } else {
        double sg = c.sign[j] < 0 ? 1.0 : -1.0;
        ar.push_back(sg * hn[j]);
        ab.push_back(sg * hb[j]);
      }
    }
    Mat a(static_cast<int>(ar.size()), dim), e(static_cast<int>(er.size()), dim);
    for (size_t r = 0; r < ar.size(); ++r) a.row(static_cast<int>(r)) = ar[r].transpose();
    for (size_t r = 0; r < er.size(); ++r) e.row(static_cast<int>(r)) = er[r].transpose();
    st.cell = HPolyhedron(a, Eigen::Map<Vec>(ab.data(), static_cast<int>(ab.size())), e,
                          Eigen::Map<Vec>(eb.data(), static_cast<int>(eb.size())));
    st.label = label;
    st.point = c.point;
    st.regular = regular[ci];
    st.normals = ConeUnion(dim);
    for (size_t cj = 0; cj < cells.size(); ++cj) {
      bool above = true;
      for (int j = 0; j < h && above; ++j)
        if (c.sign[j] != 0 && cells[cj].sign[j] != c.sign[j]) above = false;
      if (above) st.normals.add(regular[cj]);
    }
    s.strata.push_back(std::move(st));
  }
  return s;
}

std::optional<HPolyhedron> convex_domain(const StratifiedMapping& s) {
  if (s.domain) return s.domain;
  // Homogenized projections: hull <= union iff the cones over {1} x P_i
  // cover the cone over {1} x hull.
  auto lift = [&](const Vec& v, double t) {
    Vec z(s.n + 1);
    z << v.head(s.n), t;
    return z;
  };
  ConeUnion parts(s.n + 1);
  std::vector<Vec> all;
  Mat lin(s.n, 0);
  for (const HPolyhedron& p : s.pieces) {
    if (p.empty()) continue;
    VRep v = hrep_to_vrep(p);
    std::vector<Vec> gens;
    for (const Vec& x : v.vertices) gens.push_back(lift(x, 1.0));
    for (const Vec& r : v.rays)
      if (r.head(s.n).norm() > tolerance().tau()) gens.push_back(lift(r, 0.0));
    Mat l = v.lineality.topRows(s.n);
    l = l.cols() > 0 ? column_basis(l) : Mat(s.n, 0);
    std::vector<Vec> lgens;
    for (const Vec& c : columns(l)) lgens.push_back(lift(c, 0.0));
    parts.add(PolyCone::from_g(s.n + 1, gens, lgens));
    all.insert(all.end(), gens.begin(), gens.end());
    lin = hstack(lin, l);
  }
  if (all.empty()) return std::nullopt;
  lin = lin.cols() > 0 ? column_basis(lin) : Mat(s.n, 0);
  std::vector<Vec> lgens;
  for (const Vec& c : columns(lin)) lgens.push_back(lift(c, 0.0));
  PolyCone hull = PolyCone::from_g(s.n + 1, all, lgens);
  if (!parts.covers(ConeUnion(s.n + 1, {hull}))) return std::nullopt;
  // Slice t = 1 of the hull cone.
  auto snap = [](Mat m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (std::abs(m(i, j)) < 1e-12) m(i, j) = 0.0;
    return m;
  };
  Mat a = snap(hull.ineq()), c = snap(hull.eq());
  return HPolyhedron(Mat(a.leftCols(s.n)), Vec(-a.col(s.n)), Mat(c.leftCols(s.n)), Vec(-c.col(s.n)));
}

ConeUnion limiting_normal_cone(const StratifiedMapping& s, const Vec& x, const Vec& u) {
  if (x.size() != s.n || u.size() != s.m) throw DomainError("limiting_normal_cone: dimension mismatch");
  Vec z = zvec(x, u);
  if (!s.in_graph(x, u)) throw DomainError("limiting_normal_cone: point is not on the graph");
  ConeUnion out(s.n + s.m);
  bool any = false;
  for (const Stratum& st : s.strata) {
    if (st.closure_contains(z)) {
      out.add_all(st.normals);
      any = true;
    }
  }
  if (!any) throw DomainError("limiting_normal_cone: no stratum contains the point");
  return out;
}

}  // namespace polylip
