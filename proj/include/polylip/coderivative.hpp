#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polylip/geometry.hpp"
#include "polylip/stratified.hpp"

namespace polylip {

/// {(x*, u*) = (P y, Q y) : y in param}.
struct LinearPiece {
  PolyCone param;
  Mat p;  // x* = P y
  Mat q;  // u* = Q y
};

/// Positively homogeneous map u* => x* given by its conic graph.
struct PHMap {
  int m = 0;  // input (u*) dimension
  int n = 0;  // output (x*) dimension
  std::vector<LinearPiece> pieces;

  bool contains(const Vec& ustar, const Vec& xstar) const;
  // Graph in (u*, x*) coordinates.
  ConeUnion graph() const;
  // H(0) as a union of cones in R^n.
  ConeUnion kernel() const;
  // Images H(u*) piece by piece (empty pieces dropped).
  std::vector<HPolyhedron> values(const Vec& ustar) const;
};

struct OuterNorm {
  double value = 0.0;
  // Attaining (x*, u*) when finite and positive; a kernel element
  // (u* = 0, x* != 0) when infinite.
  std::optional<Vec> xstar, ustar;
};

OuterNorm outer_norm(const PHMap& h);

/// x* in D*S(x|u)(u*) iff (x*, -u*) is a limiting normal to gph S at (x, u).
PHMap coderivative(const StratifiedMapping& s, const Vec& x, const Vec& u);

PHMap projectional_coderivative(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                const Vec& ubar);

struct SmoothSet {
  enum class Kind { kAffine, kHalfspace } kind = Kind::kAffine;
  Mat b;       // affine: {x : B x = beta}
  Vec a;       // halfspace: {x : <a, x> <= beta}
  Vec beta;    // right-hand side (size 1 for a halfspace)
};

// Projectional coderivative of a smooth map with Jacobian j (m x n) at a
// boundary point of an affine set or a halfspace.
PHMap smooth_projectional_coderivative(const Mat& j, const SmoothSet& x_set, const Vec& xbar);

struct StratumKappa {
  std::string label;
  double kappa = 0.0;
};

struct CriterionReport {
  bool holds = false;
  std::optional<Vec> kernel_witness;  // x* with x* in D*_X S(0)
  double modulus = 0.0;               // +inf when the criterion fails
  std::vector<StratumKappa> per_stratum;
};

CriterionReport check_criterion(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                const Vec& ubar);

struct NeighborhoodWitness {
  Vec x, u, xstar, ustar, w;
  std::string label;
};

struct NeighborhoodCheck {
  bool pass = true;
  std::optional<NeighborhoodWitness> witness;
  int samples = 0;
};

struct CheckConfig {
  double radius = 1e-2;
  int samples = 10000;
  std::uint64_t seed = 1;
};

// max_{w in T_X(x), |w| = 1} <x*, w> <= kappa |u*| at sampled graph points of
// S|_X near (xbar, ubar): regular normals (necessity) or limiting normals
// with cl pos(X - x) (sufficiency).
NeighborhoodCheck neighborhood_necessity_check(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                               const Vec& ubar, double kappa, const CheckConfig& cfg = {});
NeighborhoodCheck neighborhood_sufficiency_check(const StratifiedMapping& s, const HPolyhedron& x_set,
                                                 const Vec& xbar, const Vec& ubar, double kappa,
                                                 const CheckConfig& cfg = {});

/// Directional limiting coderivative along (dx, du) at (xbar, ubar).
PHMap directional_coderivative(const StratifiedMapping& s, const Vec& xbar, const Vec& ubar, const Vec& dx,
                               const Vec& du);

struct FailingDirection {
  Vec dx, du;
  ConeUnion kernel;  // D*S((xbar, ubar); (dx, du))(0)
};

struct DirectionalReport {
  bool pass = true;
  // Every generator of T_X(xbar) lifts to a tangent of the graph.
  bool lifting_holds = true;
  // Lifted generator directions first, then one direction per cell.
  std::vector<FailingDirection> failures;
};

DirectionalReport directional_sufficiency_check(const StratifiedMapping& s, const HPolyhedron& x_set,
                                                const Vec& xbar, const Vec& ubar);

// Local conic model of gph S (restricted to X when given) at (xbar, ubar).
StratifiedMapping local_cone(const StratifiedMapping& s, const HPolyhedron* x_set, const Vec& xbar, const Vec& ubar);

// T_X restricted to a stratum of a local cone: tx is T_X(xbar) and the
// result is T_X at any point of the stratum's x-projection.
PolyCone stratum_tangent(const PolyCone& tx, const Stratum& st);

}  // namespace polylip
