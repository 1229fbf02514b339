#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <functional>
#include <optional>
#include <mutex>

#include "polylip/errors.hpp"
#include "polylip/geometry.hpp"
#include "polylip/lp.hpp"
#include "polylip/nnls.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

constexpr double kZeroRow = 1e-12;

Mat unit_rows(const Mat& a) {
  std::vector<int> keep;
  Mat out = a;
  for (int i = 0; i < a.rows(); ++i) {
    double nrm = a.row(i).norm();
    if (nrm <= kZeroRow) continue;
    out.row(i) /= nrm;
    bool dup = false;
    for (int j : keep)
      if ((out.row(i) - out.row(j)).norm() <= 1e-10) dup = true;
    if (!dup) keep.push_back(i);
  }
  return select_rows(out, keep);
}

Mat rows_of(const std::vector<Vec>& vs, int n) {
  Mat out(static_cast<int>(vs.size()), n);
  for (size_t i = 0; i < vs.size(); ++i) out.row(static_cast<int>(i)) = vs[i].transpose();
  return out;
}

double cone_tol(const Vec& v) { return tolerance().tau() * std::max(1.0, v.norm()); }

struct GForm {
  std::vector<Vec> rays;
  Mat lineality;
};

GForm h_to_g(int n, const Mat& ineq, const Mat& eq) {
  GForm g;
  g.lineality = null_space(vstack(ineq, eq), n);
  Mat w = null_space(vstack(eq, Mat(g.lineality.transpose())), n);
  if (w.cols() == 0 || ineq.rows() == 0) {
    // Without inequality rows the pointed part is {0}.
    return g;
  }
  Mat aw = ineq * w;
  std::vector<int> keep;
  for (int i = 0; i < aw.rows(); ++i) {
    double nrm = aw.row(i).norm();
    if (nrm > kZeroRow) {
      aw.row(i) /= nrm;
      keep.push_back(i);
    }
  }
  aw = select_rows(aw, keep);
  for (const Vec& r : extreme_rays_pointed(aw)) {
    Vec x = w * r;
    double nrm = x.norm();
    if (nrm > kZeroRow) g.rays.push_back(x / nrm);
  }
  return g;
}

}  // namespace

std::vector<Vec> extreme_rays_pointed(const Mat& a) {
  const int w = static_cast<int>(a.cols());
  const int k = static_cast<int>(a.rows());
  std::vector<Vec> rays;
  if (w == 0) return rays;
  const double tol = std::max(tolerance().tau(), 1e-12);
  // Initial simplicial cone from w independent rows.
  std::vector<int> basis;
  for (int i = 0; i < k && static_cast<int>(basis.size()) < w; ++i) {
    std::vector<int> trial = basis;
    trial.push_back(i);
    if (numeric_rank(select_rows(a, trial)) == static_cast<int>(trial.size())) basis.push_back(i);
  }
  if (static_cast<int>(basis.size()) < w) throw DomainError("extreme_rays_pointed: cone is not pointed");
  Mat binv = select_rows(a, basis).inverse();
  for (int j = 0; j < w; ++j) {
    Vec r = -binv.col(j);
    rays.push_back(r / r.norm());
  }
  std::vector<int> processed = basis;
  auto tight_rows = [&](const Vec& r) {
    std::vector<int> out;
    for (int i : processed)
      if (std::abs(a.row(i).dot(r)) <= tol) out.push_back(i);
    return out;
  };
  for (int i = 0; i < k; ++i) {
    if (std::find(basis.begin(), basis.end(), i) != basis.end()) continue;
    std::vector<double> s(rays.size());
    std::vector<size_t> pos, neg;
    std::vector<Vec> next;
    for (size_t r = 0; r < rays.size(); ++r) {
      s[r] = a.row(i).dot(rays[r]);
      if (s[r] > tol) {
        pos.push_back(r);
      } else {
        if (s[r] < -tol) neg.push_back(r);
        next.push_back(rays[r]);
      }
    }
    if (pos.empty()) {
      processed.push_back(i);
      continue;
    }
    std::vector<std::vector<int>> tights(rays.size());
    for (size_t r = 0; r < rays.size(); ++r) tights[r] = tight_rows(rays[r]);
    for (size_t p : pos) {
      for (size_t q : neg) {
        std::vector<int> common;
        std::set_intersection(tights[p].begin(), tights[p].end(), tights[q].begin(), tights[q].end(),
                              std::back_inserter(common));
        if (static_cast<int>(common.size()) < w - 2) continue;
        if (w > 2 && numeric_rank(select_rows(a, common)) != w - 2) continue;
        if (w == 2 && !common.empty() && numeric_rank(select_rows(a, common)) != 0) continue;
        Vec r = s[p] * rays[q] - s[q] * rays[p];
        double nrm = r.norm();
        if (nrm <= kZeroRow) continue;
        next.push_back(r / nrm);
      }
    }
    processed.push_back(i);
    std::sort(processed.begin(), processed.end());
    rays = std::move(next);
  }
  // Deduplicate.
  std::vector<Vec> out;
  for (const Vec& r : rays) {
    bool dup = false;
    for (const Vec& o : out)
      if ((r - o).norm() <= 1e-9) dup = true;
    if (!dup) out.push_back(r);
  }
  return out;
}

struct PolyCone::Data {
  int n = 0;
  bool h_given = false;
  bool g_given = false;
  Mat ineq, eq;
  std::vector<Vec> raw_rays, raw_lin;
  std::vector<Vec> rays;
  Mat lin;
  std::once_flag h_once, g_once;
};

PolyCone::PolyCone() : data_(std::make_shared<Data>()) {
  data_->ineq = Mat(0, 0);
  data_->eq = Mat(0, 0);
  data_->lin = Mat(0, 0);
  data_->h_given = true;
}

PolyCone PolyCone::from_h(int n, const Mat& ineq, const Mat& eq) {
  PolyCone k;
  k.data_ = std::make_shared<Data>();
  k.data_->n = n;
  k.data_->h_given = true;
  k.data_->ineq = ineq.rows() > 0 ? unit_rows(ineq) : Mat(0, n);
  Mat e = eq.rows() > 0 ? Mat(column_basis(eq.transpose()).transpose()) : Mat(0, n);
  k.data_->eq = e.rows() > 0 ? e : Mat(0, n);
  return k;
}

PolyCone PolyCone::from_g(int n, const std::vector<Vec>& rays, const std::vector<Vec>& lineality) {
  PolyCone k;
  k.data_ = std::make_shared<Data>();
  k.data_->n = n;
  k.data_->g_given = true;
  for (const Vec& r : rays) {
    if (r.size() != n) throw DomainError("cone generator dimension mismatch");
    if (r.norm() > kZeroRow) k.data_->raw_rays.push_back(r / r.norm());
  }
  for (const Vec& l : lineality) {
    if (l.size() != n) throw DomainError("cone generator dimension mismatch");
    if (l.norm() > kZeroRow) k.data_->raw_lin.push_back(l / l.norm());
  }
  return k;
}

PolyCone PolyCone::zero(int n) { return from_h(n, Mat(0, n), Mat::Identity(n, n)); }
PolyCone PolyCone::whole(int n) { return from_h(n, Mat(0, n), Mat(0, n)); }
PolyCone PolyCone::orthant(int n) { return from_h(n, -Mat::Identity(n, n), Mat(0, n)); }

int PolyCone::dim() const { return data_->n; }
bool PolyCone::has_h() const { return data_->h_given; }
bool PolyCone::has_g() const { return data_->g_given; }

const Mat& PolyCone::ineq() const {
  Data& d = *data_;
  std::call_once(d.h_once, [&d]() {
    if (d.h_given) return;
    // Polar of the generated cone, converted, then polar again.
    Mat prow = d.raw_rays.empty() ? Mat(0, d.n) : rows_of(d.raw_rays, d.n);
    Mat peq = d.raw_lin.empty() ? Mat(0, d.n) : rows_of(d.raw_lin, d.n);
    Mat pe = peq.rows() > 0 ? Mat(column_basis(peq.transpose()).transpose()) : Mat(0, d.n);
    if (pe.rows() == 0) pe = Mat(0, d.n);
    GForm pg = h_to_g(d.n, prow.rows() > 0 ? unit_rows(prow) : Mat(0, d.n), pe);
    d.ineq = pg.rays.empty() ? Mat(0, d.n) : rows_of(pg.rays, d.n);
    d.eq = pg.lineality.cols() > 0 ? Mat(pg.lineality.transpose()) : Mat(0, d.n);
  });
  return d.ineq;
}

const Mat& PolyCone::eq() const {
  ineq();
  return data_->eq;
}

const std::vector<Vec>& PolyCone::rays() const {
  Data& d = *data_;
  ineq();
  std::call_once(d.g_once, [&d]() {
    GForm g = h_to_g(d.n, d.ineq, d.eq);
    d.rays = std::move(g.rays);
    d.lin = g.lineality;
  });
  return d.rays;
}

const Mat& PolyCone::lineality() const {
  rays();
  return data_->lin;
}

bool PolyCone::contains(const Vec& v) const {
  if (v.size() != dim()) return false;
  double tol = cone_tol(v);
  const Mat& a = ineq();
  const Mat& e = eq();
  if (a.rows() > 0 && (a * v).maxCoeff() > tol) return false;
  if (e.rows() > 0 && (e * v).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

bool PolyCone::contains(const PolyCone& other) const {
  if (other.dim() != dim()) return false;
  for (const Vec& r : other.rays())
    if (!contains(r)) return false;
  const Mat& l = other.lineality();
  for (int j = 0; j < l.cols(); ++j) {
    if (!contains(Vec(l.col(j))) || !contains(Vec(-l.col(j)))) return false;
  }
  return true;
}

bool PolyCone::equals(const PolyCone& other) const { return contains(other) && other.contains(*this); }

bool PolyCone::is_zero() const { return rays().empty() && lineality().cols() == 0; }
bool PolyCone::is_subspace() const { return rays().empty(); }

Mat PolyCone::span_basis() const {
  Mat gens = hstack(columns_of(rays(), dim()), lineality());
  if (gens.cols() == 0) return Mat(dim(), 0);
  return column_basis(gens);
}

int PolyCone::span_dim() const { return static_cast<int>(span_basis().cols()); }

PolyCone PolyCone::polar() const {
  if (data_->h_given || !data_->g_given) {
    std::vector<Vec> r, l;
    for (int i = 0; i < ineq().rows(); ++i) r.emplace_back(ineq().row(i).transpose());
    for (int i = 0; i < eq().rows(); ++i) l.emplace_back(eq().row(i).transpose());
    return from_g(dim(), r, l);
  }
  return from_h(dim(), data_->raw_rays.empty() ? Mat(0, dim()) : rows_of(data_->raw_rays, dim()),
                data_->raw_lin.empty() ? Mat(0, dim()) : rows_of(data_->raw_lin, dim()));
}

PolyCone polar(const PolyCone& k) { return k.polar(); }

PolyCone PolyCone::intersect(const PolyCone& o) const {
  if (o.dim() != dim()) throw DomainError("cone intersect: dimension mismatch");
  return from_h(dim(), vstack(ineq(), o.ineq()), vstack(eq(), o.eq()));
}

PolyCone PolyCone::image(const Mat& m) const {
  std::vector<Vec> r, l;
  for (const Vec& x : rays()) r.push_back(m * x);
  for (int j = 0; j < lineality().cols(); ++j) l.push_back(m * lineality().col(j));
  return from_g(static_cast<int>(m.rows()), r, l);
}

PolyCone PolyCone::preimage(const Mat& m) const {
  return from_h(static_cast<int>(m.cols()), ineq() * m, eq() * m);
}

std::vector<PolyCone> PolyCone::faces() const {
  const Mat& a = ineq();
  const std::vector<Vec>& rs = rays();
  const int nr = static_cast<int>(a.rows());
  const int ng = static_cast<int>(rs.size());
  std::vector<std::vector<char>> inc(nr, std::vector<char>(ng, 0));
  for (int i = 0; i < nr; ++i)
    for (int r = 0; r < ng; ++r) inc[i][r] = std::abs(a.row(i).dot(rs[r])) <= 1e-8;
  auto rows_of_set = [&](const std::vector<int>& gs) {
    std::vector<int> z;
    for (int i = 0; i < nr; ++i) {
      bool all = true;
      for (int r : gs) all = all && inc[i][r];
      if (all) z.push_back(i);
    }
    return z;
  };
  auto gens_of_rows = [&](const std::vector<int>& z) {
    std::vector<int> gs;
    for (int r = 0; r < ng; ++r) {
      bool all = true;
      for (int i : z) all = all && inc[i][r];
      if (all) gs.push_back(r);
    }
    return gs;
  };
  std::vector<int> top(ng);
  for (int r = 0; r < ng; ++r) top[r] = r;
  std::map<std::vector<int>, std::vector<int>> seen;
  std::deque<std::vector<int>> queue;
  seen[top] = rows_of_set(top);
  queue.push_back(top);
  while (!queue.empty()) {
    std::vector<int> cur = queue.front();
    queue.pop_front();
    std::vector<int> z = seen[cur];
    for (int j = 0; j < nr; ++j) {
      if (std::binary_search(z.begin(), z.end(), j)) continue;
      std::vector<int> zj = z;
      zj.insert(std::upper_bound(zj.begin(), zj.end(), j), j);
      std::vector<int> gs = gens_of_rows(zj);
      if (seen.count(gs)) continue;
      seen[gs] = rows_of_set(gs);
      queue.push_back(gs);
    }
  }
  std::vector<std::pair<int, PolyCone>> out;
  const int nl = static_cast<int>(lineality().cols());
  for (auto& [gs, z] : seen) {
    PolyCone f = from_h(dim(), a, vstack(eq(), select_rows(a, z)));
    Data& d = *f.data_;
    for (int r : gs) d.rays.push_back(rs[r]);
    d.lin = lineality();
    std::call_once(d.g_once, []() {});
    int fd = nl + (gs.empty() ? 0 : numeric_rank(columns_of(d.rays, dim())));
    out.emplace_back(fd, f);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<PolyCone> res;
  for (auto& [fd, f] : out) res.push_back(f);
  return res;
}

Vec PolyCone::relint_point() const {
  Vec s = Vec::Zero(dim());
  for (const Vec& r : rays()) s += r;
  return s;
}

Vec PolyCone::project(const Vec& v) const { return project_cone(*this, v).p; }

ConeProjection project_cone(const PolyCone& k, const Vec& v) {
  if (v.size() != k.dim()) throw DomainError("project_cone: dimension mismatch");
  const Mat& l = k.lineality();
  Vec vl = l.cols() > 0 ? Vec(l * (l.transpose() * v)) : Vec(Vec::Zero(v.size()));
  Vec rest = v - vl;
  ConeProjection out;
  out.p = vl;
  if (!k.rays().empty()) {
    Mat e = columns_of(k.rays(), k.dim());
    NnlsResult r = nnls(e, rest);
    out.p += e * r.x;
  }
  out.certificate = v - out.p;
  double tol = 10 * tolerance().tau() * std::max(1.0, v.norm());
  bool ok = std::abs(out.p.dot(out.certificate)) <= tol * std::max(1.0, v.norm());
  for (const Vec& r : k.rays())
    if (r.dot(out.certificate) > tol) ok = false;
  if (l.cols() > 0 && (l.transpose() * out.certificate).cwiseAbs().maxCoeff() > tol) ok = false;
  if (!ok) {
    HPolyhedron p(k.ineq(), Vec::Zero(k.ineq().rows()), k.eq(), Vec::Zero(k.eq().rows()));
    out.p = project_polyhedron_enumerative(p, v);
    out.certificate = v - out.p;
  }
  out.certified = true;
  return out;
}

ConeUnion::ConeUnion(int n, std::vector<PolyCone> pieces) : n_(n) {
  for (auto& p : pieces) add(p);
}

void ConeUnion::add(const PolyCone& k) {
  if (k.dim() != n_) throw DomainError("cone union: dimension mismatch");
  for (const PolyCone& p : pieces_)
    if (p.contains(k)) return;
  std::vector<PolyCone> kept;
  for (const PolyCone& p : pieces_)
    if (!k.contains(p)) kept.push_back(p);
  kept.push_back(k);
  pieces_ = std::move(kept);
}

void ConeUnion::add_all(const ConeUnion& other) {
  for (const PolyCone& p : other.pieces()) add(p);
}

bool ConeUnion::contains(const Vec& v) const {
  for (const PolyCone& p : pieces_)
    if (p.contains(v)) return true;
  return false;
}

namespace {

// Exact test q subset of the union of ps: every full-dimensional cell (in
// span q) of the arrangement cut out by the hyperplanes of ps has a point
// in some p.
bool arrangement_covers(const PolyCone& q, const std::vector<PolyCone>& ps) {
  const int n = q.dim();
  const double tau = tolerance().tau();
  Mat span = q.span_basis();
  if (span.cols() == 0) return true;
  std::vector<Vec> hyper;
  auto push = [&](const Vec& h) {
    if ((span.transpose() * h).norm() <= 1e-10) return;
    for (const Vec& g : hyper)
      if ((g - h).norm() <= 1e-10 || (g + h).norm() <= 1e-10) return;
    hyper.push_back(h);
  };
  for (const PolyCone& p : ps) {
    for (int i = 0; i < p.ineq().rows(); ++i) push(p.ineq().row(i).transpose().normalized());
    for (int i = 0; i < p.eq().rows(); ++i) push(p.eq().row(i).transpose().normalized());
  }
  const int h = static_cast<int>(hyper.size());
  const Mat& qa = q.ineq();
  const Mat& qe = q.eq();
  std::vector<int> sign(h, 0);
  long budget = 1L << 16;
  // Variables (v, t): maximize t with s_i h_i.v + t <= 0, v in q, |v| <= 1.
  auto strict_point = [&](int depth) -> std::optional<Vec> {
    if (--budget < 0) throw BudgetError("cone union cover: arrangement budget exhausted");
    int rows = depth + static_cast<int>(qa.rows()) + 2 * n + 1;
    Mat a = Mat::Zero(rows, n + 1);
    Vec b = Vec::Zero(rows);
    int r = 0;
    for (int i = 0; i < depth; ++i, ++r) {
      a.block(r, 0, 1, n) = sign[i] * hyper[i].transpose();
      a(r, n) = 1.0;
    }
    for (int i = 0; i < qa.rows(); ++i, ++r) a.block(r, 0, 1, n) = qa.row(i);
    for (int j = 0; j < n; ++j) {
      a(r, j) = 1.0;
      b(r++) = 1.0;
      a(r, j) = -1.0;
      b(r++) = 1.0;
    }
    a(r, n) = 1.0;
    b(r) = 1.0;
    Mat ce = Mat::Zero(qe.rows(), n + 1);
    ce.leftCols(n) = qe;
    Vec c = Vec::Zero(n + 1);
    c(n) = 1.0;
    LpResult res = lp_maximize(c, a, b, ce, Vec::Zero(qe.rows()));
    if (!res.optimal() || res.x(n) <= tau) return std::nullopt;
    return Vec(res.x.head(n));
  };
  std::function<bool(int)> dfs = [&](int depth) -> bool {
    std::optional<Vec> pt = strict_point(depth);
    if (!pt) return true;
    if (depth == h) {
      for (const PolyCone& p : ps)
        if (p.contains(*pt)) return true;
      return false;
    }
    for (int s : {-1, 1}) {
      sign[depth] = s;
      if (!dfs(depth + 1)) return false;
    }
    return true;
  };
  return dfs(0);
}

}  // namespace

bool ConeUnion::covers(const ConeUnion& other) const {
  for (const PolyCone& q : other.pieces()) {
    bool found = false;
    for (const PolyCone& p : pieces_) {
      if (p.contains(q)) {
        found = true;
        break;
      }
    }
    if (!found && !arrangement_covers(q, pieces_)) return false;
  }
  return true;
}

bool ConeUnion::equals(const ConeUnion& other) const { return covers(other) && other.covers(*this); }

}  // namespace polylip
