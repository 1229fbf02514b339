#include <algorithm>
#include <cmath>

#include "polylip/errors.hpp"
#include "polylip/oracle.hpp"
#include "polylip/rng.hpp"

namespace polylip {

void SampleConfig::validate() const {
  if (radii.empty()) throw SchemaError("sampling.radii must be non-empty");
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) throw SchemaError("sampling.radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw SchemaError("sampling.radii must be strictly decreasing");
  }
  if (pairs_per_radius < 1) throw SchemaError("sampling.pairs_per_radius must be >= 1");
  if (set_discretization < 1) throw SchemaError("sampling.set_discretization must be >= 1");
  if (threads < 1) throw SchemaError("sampling.threads must be >= 1");
}

SetOracle union_oracle(const std::vector<HPolyhedron>& pieces) {
  SetOracle g;
  g.dim = pieces.empty() ? 0 : pieces[0].dim();
  g.membership = [pieces](const Vec& z) {
    for (const HPolyhedron& p : pieces)
      if (p.contains(z)) return true;
    return false;
  };
  g.distance = [pieces](const Vec& z) {
    double best = kInf;
    for (const HPolyhedron& p : pieces)
      if (!p.empty()) best = std::min(best, distance(z, p));
    return best;
  };
  return g;
}

std::vector<Vec> sample_proximal_normals(const SetOracle& g, const Vec& x, const ProximalConfig& cfg) {
  if (!g.membership(x)) throw DomainError("sample_proximal_normals: base point is not in the set");
  std::vector<Vec> out;
  const int k = g.dim;
  const double t = cfg.step;
  auto accept = [&](const Vec& v, std::uint64_t idx) {
    Vec y = x + t * v;
    if (g.distance) return g.distance(y) >= t * (1.0 - cfg.accept_tol);
    if (g.membership(y)) return false;
    // Membership only: step along rays from y at resolution t / grid and
    // reject when the set is met noticeably closer than t.
    double pitch = t / cfg.grid;
    int rays = cfg.grid * k;
    CounterRng rng(cfg.seed, 0xb011, idx);
    for (int i = 0; i < rays; ++i) {
      Vec d(k);
      if (k == 2) {
        double a = 6.283185307179586 * (i + rng.uniform()) / rays;
        d << std::cos(a), std::sin(a);
      } else {
        d = rng.unit_vec(k);
      }
      for (int j = 1; j * pitch < t * (1.0 - 2.0 / cfg.grid); ++j)
        if (g.membership(y + j * pitch * d)) return false;
    }
    return true;
  };
  std::uint64_t idx = 0;
  for (const Vec& c : cfg.candidates) {
    double nrm = c.norm();
    if (nrm <= 0) continue;
    Vec v = c / nrm;
    if (accept(v, idx++)) out.push_back(v);
  }
  for (int s = 0; s < cfg.samples; ++s) {
    CounterRng rng(cfg.seed, 0x9e0, static_cast<std::uint64_t>(s));
    Vec v = rng.unit_vec(k);
    if (accept(v, idx++)) out.push_back(v);
  }
  return out;
}

}  // namespace polylip
