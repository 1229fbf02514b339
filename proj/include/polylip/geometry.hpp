#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "polylip/linalg.hpp"

namespace polylip {

/// Convex polyhedron {x : A x <= b, C x = d}.
///
/// Rows are normalized to unit length, zero rows are dropped and duplicate
/// rows merged on construction; emptiness is decided once and cached.
class HPolyhedron {
 public:
  HPolyhedron();
  HPolyhedron(Mat a, Vec b, Mat c, Vec d);
  HPolyhedron(Mat a, Vec b);

  static HPolyhedron whole(int n);
  static HPolyhedron point(const Vec& p);
  static HPolyhedron box(const Vec& lo, const Vec& hi);
  static HPolyhedron empty_set(int n);

  int dim() const { return n_; }
  const Mat& A() const { return a_; }
  const Vec& b() const { return b_; }
  const Mat& C() const { return c_; }
  const Vec& d() const { return d_; }
  int num_ineq() const { return static_cast<int>(a_.rows()); }
  int num_eq() const { return static_cast<int>(c_.rows()); }

  bool empty() const { return empty_; }
  bool contains(const Vec& x) const;
  // Inequality rows tight at x (within tolerance).
  std::vector<int> active_rows(const Vec& x) const;

  HPolyhedron intersect(const HPolyhedron& other) const;
  // Same set with the listed inequality rows turned into equalities.
  HPolyhedron tighten(const std::vector<int>& rows) const;
  // The translate P + t.
  HPolyhedron translate(const Vec& t) const;
  // {y : M y + offset in P}.
  HPolyhedron preimage(const Mat& m, const Vec& offset) const;
  // Embeds into a product space: {(y, z) : y in P} with extra free coords.
  HPolyhedron lift(int before, int after) const;

  // A point in the relative interior (empty optional for the empty set).
  std::optional<Vec> relint_point() const;
  // Dimension of the affine hull (-1 for the empty set).
  int affine_dim() const;
  bool bounded() const;

 private:
  void canonicalize();

  int n_ = 0;
  Mat a_, c_;
  Vec b_, d_;
  bool empty_ = false;
};

/// Polyhedral convex cone, available in H-form {A x <= 0, C x = 0} and in
/// G-form pos(rays) + span(lineality). The missing form is computed on first
/// use (double description) and cached; instances may be shared across
/// threads.
class PolyCone {
 public:
  PolyCone();
  static PolyCone from_h(int n, const Mat& ineq, const Mat& eq);
  static PolyCone from_g(int n, const std::vector<Vec>& rays, const std::vector<Vec>& lineality);
  static PolyCone zero(int n);
  static PolyCone whole(int n);
  static PolyCone orthant(int n);

  int dim() const;
  bool has_h() const;
  bool has_g() const;

  // H-form: unit rows.
  const Mat& ineq() const;
  const Mat& eq() const;
  // G-form: unit extreme rays of the pointed part (orthogonal to the
  // lineality space) and an orthonormal lineality basis (columns).
  const std::vector<Vec>& rays() const;
  const Mat& lineality() const;

  bool contains(const Vec& v) const;
  bool contains(const PolyCone& other) const;
  bool equals(const PolyCone& other) const;
  bool is_zero() const;
  bool is_subspace() const;
  // Dimension of the linear span.
  int span_dim() const;
  Mat span_basis() const;

  PolyCone polar() const;
  PolyCone intersect(const PolyCone& other) const;
  // {M y : y in K} (G-form).
  PolyCone image(const Mat& m) const;
  // {x : M x in K} (H-form).
  PolyCone preimage(const Mat& m) const;
  // Nonempty faces, as cones.
  std::vector<PolyCone> faces() const;
  // A point in the relative interior.
  Vec relint_point() const;

  Vec project(const Vec& v) const;

 private:
  struct Data;
  std::shared_ptr<Data> data_;
};

struct ConeProjection {
  Vec p;
  // v - p, which lies in the polar cone and is orthogonal to p.
  Vec certificate;
  bool certified = false;
};

ConeProjection project_cone(const PolyCone& k, const Vec& v);

/// Finite union of polyhedral cones.
class ConeUnion {
 public:
  ConeUnion() = default;
  explicit ConeUnion(int n) : n_(n) {}
  ConeUnion(int n, std::vector<PolyCone> pieces);

  int dim() const { return n_; }
  const std::vector<PolyCone>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  // Adds a piece unless it is contained in an existing one; drops existing
  // pieces contained in the new one.
  void add(const PolyCone& k);
  void add_all(const ConeUnion& other);

  bool contains(const Vec& v) const;
  // Union-level inclusion of `other` (exact; splits pieces by the
  // arrangement of this union's hyperplanes when no single piece suffices).
  bool covers(const ConeUnion& other) const;
  bool equals(const ConeUnion& other) const;

 private:
  int n_ = 0;
  std::vector<PolyCone> pieces_;
};

/// Face of a polyhedron: the parent with the `active` inequality rows tight.
struct Face {
  HPolyhedron parent;
  std::vector<int> active;
  Vec relint;

  HPolyhedron polyhedron() const { return parent.tighten(active); }
  int dim() const;
  // Affine hull {x : E x = e}.
  std::pair<Mat, Vec> affine_hull() const;
  bool relint_contains(const Vec& x) const;
};

struct VRep {
  int n = 0;
  std::vector<Vec> vertices;
  std::vector<Vec> rays;
  Mat lineality;  // orthonormal columns
};

PolyCone polar(const PolyCone& k);
PolyCone tangent_cone(const HPolyhedron& p, const Vec& x);
PolyCone normal_cone_convex(const HPolyhedron& p, const Vec& x);
PolyCone horizon_cone(const HPolyhedron& p);

// Closure of an active set: the rows tight on all of {P, rows in `seed` tight}.
// Returns nullopt when that set is empty.
struct ActiveClosure {
  std::vector<int> rows;
  Vec relint;
};
std::optional<ActiveClosure> active_closure(const HPolyhedron& p, const std::vector<int>& seed);

std::vector<Face> faces(const HPolyhedron& p, long budget = 1L << 20);
Face face_of_relint(const HPolyhedron& p, const Vec& x);

Vec project_polyhedron(const HPolyhedron& p, const Vec& v);
// Exhaustive active-set enumeration; lexicographically smallest optimal
// active set wins. Slow, used as a fallback and as a reference.
Vec project_polyhedron_enumerative(const HPolyhedron& p, const Vec& v);
double distance(const Vec& v, const HPolyhedron& p);

double excess(const HPolyhedron& a, const HPolyhedron& b);

struct SupportResult {
  double value = 0.0;
  std::optional<Face> face;
};
SupportResult support(const HPolyhedron& d, const Vec& x);

VRep hrep_to_vrep(const HPolyhedron& p);
HPolyhedron vrep_to_hrep(const VRep& v);

// Extreme rays of the pointed cone {z : a z <= 0} (a has full column rank).
std::vector<Vec> extreme_rays_pointed(const Mat& a);

}  // namespace polylip
