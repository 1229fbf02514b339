#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "polylip/errors.hpp"
#include "polylip/geometry.hpp"
#include "polylip/lp.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

constexpr double kZeroRow = 1e-12;

double feas_tol(const Vec& x) {
  double s = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return tolerance().tau() * std::max(1.0, s);
}

void normalize_rows(Mat& a, Vec& b, bool equality, bool& empty) {
  std::vector<int> keep;
  for (int i = 0; i < a.rows(); ++i) {
    double nrm = a.row(i).norm();
    if (nrm <= kZeroRow) {
      if (equality ? std::abs(b(i)) > tolerance().tau() : b(i) < -tolerance().tau()) empty = true;
      continue;
    }
    a.row(i) /= nrm;
    b(i) /= nrm;
    keep.push_back(i);
  }
  a = select_rows(a, keep);
  b = select_entries(b, keep);
}

}  // namespace

HPolyhedron::HPolyhedron() : a_(0, 0), c_(0, 0), b_(0), d_(0) {}

HPolyhedron::HPolyhedron(Mat a, Vec b, Mat c, Vec d)
    : n_(static_cast<int>(std::max(a.cols(), c.cols()))), a_(std::move(a)), c_(std::move(c)), b_(std::move(b)), d_(std::move(d)) {
  if (a_.rows() == 0) a_.resize(0, n_);
  if (c_.rows() == 0) c_.resize(0, n_);
  if (a_.rows() != b_.size() || c_.rows() != d_.size()) throw DomainError("polyhedron: row/rhs size mismatch");
  if (a_.cols() != n_ || c_.cols() != n_) throw DomainError("polyhedron: column count mismatch");
  if (!all_finite(a_) || !all_finite(c_) || !b_.allFinite() || !d_.allFinite())
    throw DomainError("polyhedron: non-finite entry");
  canonicalize();
}

HPolyhedron::HPolyhedron(Mat a, Vec b) : HPolyhedron(std::move(a), std::move(b), Mat(0, 0), Vec(0)) {}

HPolyhedron HPolyhedron::whole(int n) { return HPolyhedron(Mat(0, n), Vec(0), Mat(0, n), Vec(0)); }

HPolyhedron HPolyhedron::point(const Vec& p) {
  int n = static_cast<int>(p.size());
  return HPolyhedron(Mat(0, n), Vec(0), Mat::Identity(n, n), p);
}

HPolyhedron HPolyhedron::box(const Vec& lo, const Vec& hi) {
  int n = static_cast<int>(lo.size());
  Mat a(2 * n, n);
  a << Mat::Identity(n, n), -Mat::Identity(n, n);
  return HPolyhedron(a, vcat(hi, -lo), Mat(0, n), Vec(0));
}

HPolyhedron HPolyhedron::empty_set(int n) {
  Mat a = Mat::Zero(1, n);
  if (n > 0) a(0, 0) = 1.0;
  Mat a2(2, n);
  a2 << a, -a;
  Vec b(2);
  b << -1.0, 0.0;
  if (n == 0) {
    HPolyhedron p = whole(0);
    p.empty_ = true;
    return p;
  }
  return HPolyhedron(a2, b, Mat(0, n), Vec(0));
}

void HPolyhedron::canonicalize() {
  normalize_rows(a_, b_, false, empty_);
  normalize_rows(c_, d_, true, empty_);
  // Merge duplicate inequality rows keeping the tightest right-hand side.
  std::vector<int> keep;
  for (int i = 0; i < a_.rows(); ++i) {
    bool dup = false;
    for (int& j : keep) {
      if ((a_.row(i) - a_.row(j)).norm() <= kZeroRow * 100) {
        b_(j) = std::min(b_(j), b_(i));
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  a_ = select_rows(a_, keep);
  b_ = select_entries(b_, keep);
  // Drop linearly dependent equality rows; consistency is left to the LP.
  std::vector<int> ekeep;
  for (int i = 0; i < c_.rows(); ++i) {
    std::vector<int> trial = ekeep;
    trial.push_back(i);
    if (numeric_rank(select_rows(c_, trial)) == static_cast<int>(trial.size())) {
      ekeep.push_back(i);
    } else {
      // Dependent row: check that the right-hand side is consistent.
      Mat base = select_rows(c_, ekeep);
      Vec coef = base.transpose().completeOrthogonalDecomposition().solve(c_.row(i).transpose());
      if (std::abs(coef.dot(select_entries(d_, ekeep)) - d_(i)) > tolerance().tau() * 10) empty_ = true;
    }
  }
  c_ = select_rows(c_, ekeep);
  d_ = select_entries(d_, ekeep);
  if (!empty_) empty_ = !lp_feasible_point(a_, b_, c_, d_).optimal();
}

bool HPolyhedron::contains(const Vec& x) const {
  if (empty_ || x.size() != n_) return false;
  double tol = feas_tol(x);
  if (a_.rows() > 0 && (a_ * x - b_).maxCoeff() > tol) return false;
  if (c_.rows() > 0 && (c_ * x - d_).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

std::vector<int> HPolyhedron::active_rows(const Vec& x) const {
  std::vector<int> out;
  double tol = feas_tol(x);
  for (int i = 0; i < a_.rows(); ++i)
    if (std::abs(a_.row(i).dot(x) - b_(i)) <= tol) out.push_back(i);
  return out;
}

HPolyhedron HPolyhedron::intersect(const HPolyhedron& o) const {
  if (o.n_ != n_) throw DomainError("intersect: dimension mismatch");
  return HPolyhedron(vstack(a_, o.a_), vcat(b_, o.b_), vstack(c_, o.c_), vcat(d_, o.d_));
}

HPolyhedron HPolyhedron::tighten(const std::vector<int>& rows) const {
  std::vector<int> rest;
  std::set<int> chosen(rows.begin(), rows.end());
  for (int i = 0; i < a_.rows(); ++i)
    if (!chosen.count(i)) rest.push_back(i);
  std::vector<int> rs(chosen.begin(), chosen.end());
  return HPolyhedron(select_rows(a_, rest), select_entries(b_, rest), vstack(c_, select_rows(a_, rs)),
                     vcat(d_, select_entries(b_, rs)));
}

HPolyhedron HPolyhedron::translate(const Vec& t) const {
  HPolyhedron p(a_, b_ + a_ * t, c_, d_ + c_ * t);
  p.empty_ = empty_;
  return p;
}

HPolyhedron HPolyhedron::preimage(const Mat& m, const Vec& offset) const {
  return HPolyhedron(a_ * m, b_ - a_ * offset, c_ * m, d_ - c_ * offset);
}

HPolyhedron HPolyhedron::lift(int before, int after) const {
  int nn = before + n_ + after;
  Mat a = Mat::Zero(a_.rows(), nn);
  a.middleCols(before, n_) = a_;
  Mat c = Mat::Zero(c_.rows(), nn);
  c.middleCols(before, n_) = c_;
  HPolyhedron p(a, b_, c, d_);
  return p;
}

std::optional<Vec> HPolyhedron::relint_point() const {
  if (empty_) return std::nullopt;
  auto cl = active_closure(*this, {});
  if (!cl) return std::nullopt;
  return cl->relint;
}

int HPolyhedron::affine_dim() const {
  if (empty_) return -1;
  auto cl = active_closure(*this, {});
  if (!cl) return -1;
  return n_ - numeric_rank(vstack(c_, select_rows(a_, cl->rows)));
}

bool HPolyhedron::bounded() const { return empty_ || horizon_cone(*this).is_zero(); }

std::optional<ActiveClosure> active_closure(const HPolyhedron& p, const std::vector<int>& seed) {
  if (p.empty()) return std::nullopt;
  const int n = p.dim();
  const double tau = tolerance().tau();
  std::set<int> eqset(seed.begin(), seed.end());
  std::vector<int> free_rows;
  for (int i = 0; i < p.num_ineq(); ++i)
    if (!eqset.count(i)) free_rows.push_back(i);

  auto common_slack = [&](const std::set<int>& fixed, std::vector<int>& rows) -> std::optional<std::pair<double, Vec>> {
    std::vector<int> fx(fixed.begin(), fixed.end());
    int k = static_cast<int>(rows.size());
    Mat a = Mat::Zero(k + 2, n + 1);
    Vec b(k + 2);
    for (int r = 0; r < k; ++r) {
      a.block(r, 0, 1, n) = p.A().row(rows[r]);
      a(r, n) = 1.0;
      b(r) = p.b()(rows[r]);
    }
    a(k, n) = 1.0;
    b(k) = 1.0;
    a(k + 1, n) = -1.0;
    b(k + 1) = 0.0;
    Mat c = Mat::Zero(p.num_eq() + static_cast<int>(fx.size()), n + 1);
    c.topLeftCorner(p.num_eq(), n) = p.C();
    Vec d(c.rows());
    d.head(p.num_eq()) = p.d();
    for (size_t r = 0; r < fx.size(); ++r) {
      c.block(p.num_eq() + static_cast<int>(r), 0, 1, n) = p.A().row(fx[r]);
      d(p.num_eq() + static_cast<int>(r)) = p.b()(fx[r]);
    }
    Vec obj = Vec::Zero(n + 1);
    obj(n) = 1.0;
    LpResult res = lp_maximize(obj, a, b, c, d);
    if (!res.optimal()) return std::nullopt;
    return std::make_pair(res.value, Vec(res.x.head(n)));
  };

  auto first = common_slack(eqset, free_rows);
  if (!first) return std::nullopt;
  if (first->first > tau || free_rows.empty()) {
    return ActiveClosure{std::vector<int>(eqset.begin(), eqset.end()), first->second};
  }
  // Some free rows are implicit equalities: test each one.
  std::vector<int> fx(eqset.begin(), eqset.end());
  Mat ceq = vstack(p.C(), select_rows(p.A(), fx));
  Vec deq = vcat(p.d(), select_entries(p.b(), fx));
  Mat afree = select_rows(p.A(), free_rows);
  Vec bfree = select_entries(p.b(), free_rows);
  std::vector<int> loose;
  Vec avg = Vec::Zero(n);
  for (size_t r = 0; r < free_rows.size(); ++r) {
    int row = free_rows[r];
    // Maximize the slack of `row`, capped at 1.
    Mat a = vstack(afree, -p.A().row(row));
    Vec b = vcat(bfree, Vec::Constant(1, 1.0 - p.b()(row)));
    LpResult res = lp_maximize(-p.A().row(row).transpose(), a, b, ceq, deq);
    if (!res.optimal()) continue;
    double slack = p.b()(row) - p.A().row(row).dot(res.x);
    if (slack > tau) {
      loose.push_back(row);
      avg += res.x;
    } else {
      eqset.insert(row);
    }
  }
  std::vector<int> rest;
  for (int r : free_rows)
    if (!eqset.count(r)) rest.push_back(r);
  Vec point = loose.empty() ? first->second : Vec(avg / static_cast<double>(loose.size()));
  auto second = common_slack(eqset, rest);
  if (second && second->first > tau) point = second->second;
  return ActiveClosure{std::vector<int>(eqset.begin(), eqset.end()), point};
}

int Face::dim() const {
  return parent.dim() - numeric_rank(vstack(parent.C(), select_rows(parent.A(), active)));
}

std::pair<Mat, Vec> Face::affine_hull() const {
  Mat e = vstack(parent.C(), select_rows(parent.A(), active));
  Vec r = vcat(parent.d(), select_entries(parent.b(), active));
  return {e, r};
}

bool Face::relint_contains(const Vec& x) const {
  if (!parent.contains(x)) return false;
  double tol = feas_tol(x);
  std::set<int> act(active.begin(), active.end());
  for (int i = 0; i < parent.num_ineq(); ++i) {
    double slack = parent.b()(i) - parent.A().row(i).dot(x);
    if (act.count(i)) {
      if (std::abs(slack) > tol) return false;
    } else if (slack <= tolerance().tau()) {
      return false;
    }
  }
  return true;
}

std::vector<Face> faces(const HPolyhedron& p, long budget) {
  std::vector<Face> out;
  if (p.empty()) return out;
  long calls = 0;
  std::map<std::vector<int>, Vec> seen;
  std::deque<std::vector<int>> queue;
  auto root = active_closure(p, {});
  ++calls;
  if (!root) return out;
  seen[root->rows] = root->relint;
  queue.push_back(root->rows);
  while (!queue.empty()) {
    std::vector<int> cur = queue.front();
    queue.pop_front();
    std::set<int> cs(cur.begin(), cur.end());
    for (int j = 0; j < p.num_ineq(); ++j) {
      if (cs.count(j)) continue;
      std::vector<int> seed = cur;
      seed.push_back(j);
      std::sort(seed.begin(), seed.end());
      if (++calls > budget) throw BudgetError("face enumeration budget exceeded");
      auto cl = active_closure(p, seed);
      if (!cl || seen.count(cl->rows)) continue;
      seen[cl->rows] = cl->relint;
      queue.push_back(cl->rows);
    }
  }
  for (auto& [rows, pt] : seen) out.push_back(Face{p, rows, pt});
  std::stable_sort(out.begin(), out.end(), [](const Face& x, const Face& y) { return x.active.size() < y.active.size(); });
  std::vector<int> dims;
  for (auto& f : out) dims.push_back(f.dim());
  std::vector<size_t> order(out.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (dims[x] != dims[y]) return dims[x] > dims[y];
    return out[x].active < out[y].active;
  });
  std::vector<Face> sorted;
  for (size_t i : order) sorted.push_back(out[i]);
  return sorted;
}

Face face_of_relint(const HPolyhedron& p, const Vec& x) {
  if (!p.contains(x)) throw DomainError("face_of_relint: point outside the polyhedron");
  return Face{p, p.active_rows(x), x};
}

PolyCone tangent_cone(const HPolyhedron& p, const Vec& x) {
  if (!p.contains(x)) throw DomainError("tangent_cone: point outside the polyhedron");
  return PolyCone::from_h(p.dim(), select_rows(p.A(), p.active_rows(x)), p.C());
}

PolyCone normal_cone_convex(const HPolyhedron& p, const Vec& x) {
  if (!p.contains(x)) throw DomainError("normal_cone_convex: point outside the polyhedron");
  std::vector<Vec> rays, lin;
  for (int i : p.active_rows(x)) rays.emplace_back(p.A().row(i).transpose());
  for (int i = 0; i < p.num_eq(); ++i) lin.emplace_back(p.C().row(i).transpose());
  return PolyCone::from_g(p.dim(), rays, lin);
}

PolyCone horizon_cone(const HPolyhedron& p) { return PolyCone::from_h(p.dim(), p.A(), p.C()); }

}  // namespace polylip
