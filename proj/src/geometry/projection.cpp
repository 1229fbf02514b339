#include <algorithm>
#include <cmath>
#include <functional>

#include "polylip/errors.hpp"
#include "polylip/geometry.hpp"
#include "polylip/lp.hpp"
#include "polylip/nnls.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {
namespace {

// x = x0 + N z parametrizes {C x = d}.
struct Reduced {
  Vec x0;
  Mat n;
  Mat a;  // A N
  Vec b;  // b - A x0
};

Reduced reduce(const HPolyhedron& p) {
  Reduced r;
  const int n = p.dim();
  if (p.num_eq() > 0) {
    r.x0 = p.C().completeOrthogonalDecomposition().solve(p.d());
    r.n = null_space(p.C(), n);
  } else {
    r.x0 = Vec::Zero(n);
    r.n = Mat::Identity(n, n);
  }
  r.a = p.A() * r.n;
  r.b = p.b() - p.A() * r.x0;
  return r;
}

bool certify(const HPolyhedron& p, const Reduced& r, const Vec& v, const Vec& x) {
  double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  double tol = 10 * tolerance().tau() * scale;
  if (p.num_ineq() > 0 && (p.A() * x - p.b()).maxCoeff() > tol) return false;
  if (p.num_eq() > 0 && (p.C() * x - p.d()).cwiseAbs().maxCoeff() > tol) return false;
  Vec g = r.n.transpose() * (v - x);
  std::vector<int> act;
  for (int i = 0; i < p.num_ineq(); ++i)
    if (p.b()(i) - p.A().row(i).dot(x) <= tol) act.push_back(i);
  if (act.empty()) return g.norm() <= tol;
  Mat e = select_rows(r.a, act).transpose();
  NnlsResult mu = nnls(e, g);
  return mu.residual_norm <= tol;
}

}  // namespace

Vec project_polyhedron_enumerative(const HPolyhedron& p, const Vec& v) {
  if (p.empty()) throw DomainError("project_polyhedron: empty set");
  Reduced r = reduce(p);
  if (r.n.cols() == 0) return r.x0;
  const int dz = static_cast<int>(r.n.cols());
  const int k = static_cast<int>(r.a.rows());
  Vec z0 = r.n.transpose() * (v - r.x0);
  double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  double tol = 10 * tolerance().tau() * scale;
  std::optional<Vec> best;
  double best_dist = kInf;
  std::vector<int> subset;
  std::optional<Vec> found;
  std::function<void(int, int)> rec = [&](int start, int size) {
    if (found) return;
    if (static_cast<int>(subset.size()) == size) {
      Vec z = z0;
      Vec mu;
      if (size > 0) {
        Mat as = select_rows(r.a, subset);
        Vec bs = select_entries(r.b, subset);
        Mat gram = as * as.transpose();
        Vec lam = gram.completeOrthogonalDecomposition().solve(as * z0 - bs);
        z = z0 - as.transpose() * lam;
        if ((as * z - bs).cwiseAbs().maxCoeff() > tol) return;
        mu = nnls(as.transpose(), z0 - z).x;
        if ((as.transpose() * mu - (z0 - z)).norm() > tol) {
          // Feasible but not optimal for this active set; keep as candidate.
          if (k == 0 || (r.a * z - r.b).maxCoeff() <= tol) {
            double dist = (z - z0).norm();
            if (dist < best_dist) {
              best_dist = dist;
              best = z;
            }
          }
          return;
        }
      }
      if (k > 0 && (r.a * z - r.b).maxCoeff() > tol) return;
      found = z;
      return;
    }
    for (int i = start; i < k; ++i) {
      subset.push_back(i);
      rec(i + 1, size);
      subset.pop_back();
      if (found) return;
    }
  };
  for (int size = 0; size <= std::min(k, dz) && !found; ++size) rec(0, size);
  Vec z = found ? *found : (best ? *best : z0);
  return r.x0 + r.n * z;
}

Vec project_polyhedron(const HPolyhedron& p, const Vec& v) {
  if (p.empty()) throw DomainError("project_polyhedron: empty set");
  if (v.size() != p.dim()) throw DomainError("project_polyhedron: dimension mismatch");
  Reduced r = reduce(p);
  if (r.n.cols() == 0) return r.x0;
  Vec z0 = r.n.transpose() * (v - r.x0);
  Vec x;
  if (r.a.rows() == 0) {
    x = r.x0 + r.n * z0;
  } else {
    LdpResult ldp = least_distance(-r.a, r.a * z0 - r.b);
    if (!ldp.feasible) return project_polyhedron_enumerative(p, v);
    x = r.x0 + r.n * (z0 + ldp.y);
  }
  if (!certify(p, r, v, x)) return project_polyhedron_enumerative(p, v);
  return x;
}

double distance(const Vec& v, const HPolyhedron& p) { return (v - project_polyhedron(p, v)).norm(); }

double excess(const HPolyhedron& a, const HPolyhedron& b) {
  if (a.empty()) return 0.0;
  if (b.empty()) throw DomainError("excess: second set is empty");
  VRep va = hrep_to_vrep(a);
  PolyCone rec = horizon_cone(b);
  for (const Vec& r : va.rays)
    if (!rec.contains(r)) return kInf;
  for (int j = 0; j < va.lineality.cols(); ++j) {
    Vec l = va.lineality.col(j);
    if (!rec.contains(l) || !rec.contains(Vec(-l))) return kInf;
  }
  double best = 0.0;
  for (const Vec& v : va.vertices) best = std::max(best, distance(v, b));
  return best;
}

SupportResult support(const HPolyhedron& d, const Vec& x) {
  if (d.empty()) throw DomainError("support: empty set");
  if (x.size() != d.dim()) throw DomainError("support: dimension mismatch");
  SupportResult out;
  if (x.norm() <= tolerance().tau()) {
    auto cl = active_closure(d, {});
    out.value = 0.0;
    out.face = Face{d, cl->rows, cl->relint};
    return out;
  }
  LpResult lp = lp_maximize(x, d.A(), d.b(), d.C(), d.d());
  if (lp.status == LpStatus::kUnbounded) {
    out.value = kInf;
    return out;
  }
  if (!lp.optimal()) throw DomainError("support: infeasible set");
  out.value = lp.value;
  // Rows of D tight on the whole exposed face.
  const int k = d.num_ineq();
  std::vector<int> tight;
  std::vector<int> loose;
  Mat ceq = vstack(d.C(), Mat(x.transpose()));
  Vec deq = vcat(d.d(), Vec::Constant(1, lp.value));
  Vec avg = Vec::Zero(d.dim());
  int nloose = 0;
  for (int i = 0; i < k; ++i) {
    Mat a = vstack(d.A(), -d.A().row(i));
    Vec b = vcat(d.b(), Vec::Constant(1, 1.0 - d.b()(i)));
    LpResult r = lp_maximize(-d.A().row(i).transpose(), a, b, ceq, deq);
    if (!r.optimal()) continue;
    double slack = d.b()(i) - d.A().row(i).dot(r.x);
    if (slack > tolerance().tau()) {
      avg += r.x;
      ++nloose;
    } else {
      tight.push_back(i);
    }
  }
  Vec rel = nloose > 0 ? Vec(avg / nloose) : lp.x;
  out.face = Face{d, tight, rel};
  return out;
}

}  // namespace polylip
