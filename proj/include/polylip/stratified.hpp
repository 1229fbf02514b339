#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polylip/geometry.hpp"

namespace polylip {

/// Relatively open polyhedral cell of a graph with its constant limiting
/// normal cone. `cell` is the closure; inequality rows are strict on the
/// cell itself and equality rows describe its affine hull.
struct Stratum {
  HPolyhedron cell;
  ConeUnion normals;
  // Regular (Frechet) normal cone on the cell.
  PolyCone regular;
  std::string label;
  Vec point;

  bool relint_contains(const Vec& z) const;
  bool closure_contains(const Vec& z) const { return cell.contains(z); }
};

using Evaluator = std::function<std::vector<HPolyhedron>(const Vec&)>;

/// S : R^n => R^m given by a stratification of its graph in R^{n+m}
/// (coordinates (x, u)).
struct StratifiedMapping {
  int n = 0;
  int m = 0;
  std::vector<Stratum> strata;
  // Closed convex pieces whose union is gph S.
  std::vector<HPolyhedron> pieces;
  // x -> S(x) as a union of polyhedra in R^m.
  Evaluator evaluator;
  std::optional<HPolyhedron> domain;

  bool in_graph(const Vec& x, const Vec& u) const;
  std::vector<HPolyhedron> values(const Vec& x) const;
  // Indices of strata whose closure contains (x, u).
  std::vector<int> adjacent_strata(const Vec& z) const;
};

// Slices of the pieces at x: {u : (x, u) in P}.
std::vector<HPolyhedron> slice_pieces(const std::vector<HPolyhedron>& pieces, int n, const Vec& x);

StratifiedMapping build_lcp(const Mat& m);
StratifiedMapping build_linear_system(const Mat& a, const HPolyhedron& k);

struct StratifyOptions {
  long lp_budget = 400000;
};
StratifiedMapping stratify_union(const std::vector<HPolyhedron>& pieces, int n, int m,
                                 const StratifyOptions& opts = {});

// dom S when it is convex, certified exactly by homogenizing the projected
// pieces and testing that their cones cover the hull cone; nullopt
// otherwise. Returns s.domain when set.
std::optional<HPolyhedron> convex_domain(const StratifiedMapping& s);

ConeUnion limiting_normal_cone(const StratifiedMapping& s, const Vec& x, const Vec& u);

// Label for an LCP stratum from 0-based index sets, printed 1-based,
// e.g. "({1,2},{},{})".
std::string lcp_label(const std::vector<int>& i1, const std::vector<int>& i2, const std::vector<int>& i3);

}  // namespace polylip
