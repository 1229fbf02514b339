#pragma once

#include <optional>
#include <vector>

#include "polylip/geometry.hpp"
#include "polylip/stratified.hpp"

namespace polylip {

struct PLCell {
  HPolyhedron cell;
  Vec g;
  double c = 0.0;
};

/// f(x) = <g_i, x> + c_i on cell C_i, +inf off the union of the cells.
/// Overlapping cells must agree.
class PLFunction {
 public:
  PLFunction() = default;
  PLFunction(int n, std::vector<PLCell> cells);

  int dim() const { return n_; }
  const std::vector<PLCell>& cells() const { return cells_; }
  bool in_domain(const Vec& x) const;
  double value(const Vec& x) const;
  // Pieces of epi f in R^{n+1}.
  std::vector<HPolyhedron> epigraph() const;

 private:
  int n_ = 0;
  std::vector<PLCell> cells_;
};

/// Finite union of polyhedra, kept in both forms.
struct PolySet {
  int n = 0;
  std::vector<HPolyhedron> pieces;
  std::vector<VRep> gens;

  void add(const HPolyhedron& p);
  void add(const VRep& v);
  bool empty() const { return pieces.empty(); }
  bool bounded() const;
  bool contains(const Vec& v) const;
  // +inf when unbounded, 0 when empty.
  double max_norm() const;
  // +inf when empty.
  double distance(const Vec& v) const;
  ConeUnion horizon() const;
  // A nonzero recession direction, if any.
  std::optional<Vec> recession_direction() const;
};

// proj_T(G) as a union of polyhedra, one per face of T.
PolySet project_onto_cone(const HPolyhedron& g, const PolyCone& t);

struct Subdifferentials {
  PolySet basic;
  ConeUnion horizon;
};

Subdifferentials subdifferentials(const PLFunction& f, const Vec& xbar);
Subdifferentials projectional_subdifferentials(const PLFunction& f, const HPolyhedron& x_set, const Vec& xbar);

struct LipReport {
  // max |v| over the projectional subgradients (+inf when unbounded).
  double modulus = 0.0;
  // Outer norm of the projectional coderivative of the profile mapping.
  double profile_modulus = 0.0;
  bool routes_agree = false;
  // Profile criterion holds.
  bool lipschitz = false;
  bool subgradients_bounded = false;
  bool horizon_trivial = false;
  std::optional<Vec> recession_witness;
  Subdifferentials projectional;
};

LipReport relative_lip_modulus(const PLFunction& f, const HPolyhedron& x_set, const Vec& xbar);

// Limits of subgradients taken along points where f exceeds the affine
// minorant f(xbar) + <vbar, x - xbar> strictly.
PolySet outer_limiting_subdifferential(const PLFunction& f, const Vec& xbar, const Vec& vbar);

struct LevelSetReport {
  bool relative_llp = false;
  double lip_x = 0.0;
  double classical_lip = 0.0;
  // Same two moduli from the coderivative criterion on the level-set map.
  double coderivative_lip_x = 0.0;
  double coderivative_classical = 0.0;
  bool routes_agree = false;
  PolySet outer_limiting;
  PolySet basic;
};

LevelSetReport level_set_analysis(const PLFunction& f, const Vec& xbar, const Vec& vbar);

// alpha => {x : f(x) - <vbar, x - xbar> <= alpha}; graph coordinates (alpha, x).
StratifiedMapping level_set_mapping(const PLFunction& f, const Vec& xbar, const Vec& vbar);
// x => [f(x), inf); graph coordinates (x, alpha).
StratifiedMapping profile_mapping(const PLFunction& f);

struct FacePair {
  // Generic exposing direction.
  Vec x;
  HPolyhedron face;
  PolyCone horizon_face;
  bool recession_matches = false;
  double excess = 0.0;
  PolySet projected;
};

struct SublinearReport {
  PolyCone horizon;
  // (D^inf)^*, the closure of dom sigma_D.
  PolyCone domain;
  std::vector<FacePair> pairs;
  bool recession_matches = false;
  double modulus = 0.0;
  // max |v| over the union of the projected faces.
  double subgradient_modulus = 0.0;
  PolySet subgradients;
};

SublinearReport sublinear_analysis(const HPolyhedron& d);
PLFunction support_function(const HPolyhedron& d);

}  // namespace polylip
