#include <cmath>

#include "polylip/errors.hpp"
#include "polylip/geometry.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {

VRep hrep_to_vrep(const HPolyhedron& p) {
  VRep out;
  out.n = p.dim();
  out.lineality = Mat(p.dim(), 0);
  if (p.empty()) return out;
  const int n = p.dim();
  Vec x0;
  Mat nb;
  if (p.num_eq() > 0) {
    x0 = p.C().completeOrthogonalDecomposition().solve(p.d());
    nb = null_space(p.C(), n);
  } else {
    x0 = Vec::Zero(n);
    nb = Mat::Identity(n, n);
  }
  const int dz = static_cast<int>(nb.cols());
  Mat az = p.A() * nb;
  Vec bz = p.b() - p.A() * x0;
  Mat lz = null_space(az, dz);
  Mat wz = complement_basis(lz, dz);
  const int w = static_cast<int>(wz.cols());
  Mat aw = az * wz;
  // Homogenized cone {(y, t) : aw y - bz t <= 0, t >= 0}.
  std::vector<Vec> rows;
  for (int i = 0; i < aw.rows(); ++i) {
    Vec r(w + 1);
    r.head(w) = aw.row(i).transpose();
    r(w) = -bz(i);
    if (aw.row(i).norm() <= 1e-12) continue;
    rows.push_back(r / r.norm());
  }
  Vec tr = Vec::Zero(w + 1);
  tr(w) = -1.0;
  rows.push_back(tr);
  Mat h(static_cast<int>(rows.size()), w + 1);
  for (size_t i = 0; i < rows.size(); ++i) h.row(static_cast<int>(i)) = rows[i].transpose();
  Mat lift = nb * wz;
  for (const Vec& r : extreme_rays_pointed(h)) {
    double t = r(w);
    if (t > tolerance().tau()) {
      out.vertices.push_back(x0 + lift * (r.head(w) / t));
    } else {
      Vec dir = lift * r.head(w);
      double nrm = dir.norm();
      if (nrm > 1e-12) out.rays.push_back(dir / nrm);
    }
  }
  out.lineality = nb * lz;
  return out;
}

HPolyhedron vrep_to_hrep(const VRep& v) {
  const int n = v.n;
  if (v.vertices.empty()) return HPolyhedron::empty_set(n);
  std::vector<Vec> rays, lin;
  for (const Vec& x : v.vertices) {
    Vec r(n + 1);
    r << x, 1.0;
    rays.push_back(r);
  }
  for (const Vec& x : v.rays) {
    Vec r(n + 1);
    r << x, 0.0;
    rays.push_back(r);
  }
  for (int j = 0; j < v.lineality.cols(); ++j) {
    Vec r(n + 1);
    r << v.lineality.col(j), 0.0;
    lin.push_back(r);
  }
  PolyCone k = PolyCone::from_g(n + 1, rays, lin);
  std::vector<int> ikeep, ekeep;
  const Mat& a = k.ineq();
  const Mat& e = k.eq();
  Mat ai(a.rows(), n), ei(e.rows(), n);
  Vec bi(a.rows()), di(e.rows());
  int ni = 0, ne = 0;
  for (int i = 0; i < a.rows(); ++i) {
    if (a.row(i).head(n).norm() <= 1e-12) continue;
    ai.row(ni) = a.row(i).head(n);
    bi(ni++) = -a(i, n);
  }
  for (int i = 0; i < e.rows(); ++i) {
    if (e.row(i).head(n).norm() <= 1e-12) continue;
    ei.row(ne) = e.row(i).head(n);
    di(ne++) = -e(i, n);
  }
  return HPolyhedron(Mat(ai.topRows(ni)), Vec(bi.head(ni)), Mat(ei.topRows(ne)), Vec(di.head(ne)));
}

}  // namespace polylip
