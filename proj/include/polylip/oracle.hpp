#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polylip/geometry.hpp"
#include "polylip/stratified.hpp"

namespace polylip {

struct SampleConfig {
  std::uint64_t seed = 1;
  std::vector<double> radii = {1e-1, 1e-2, 1e-3};
  int pairs_per_radius = 10000;
  // Resolution used when a set is only available through membership.
  int set_discretization = 64;
  int threads = 1;

  void validate() const;
};

/// A closed set known through membership and, when available, an exact
/// distance function.
struct SetOracle {
  int dim = 0;
  std::function<bool(const Vec&)> membership;
  std::function<double(const Vec&)> distance;
};

SetOracle union_oracle(const std::vector<HPolyhedron>& pieces);

struct ProximalConfig {
  std::uint64_t seed = 1;
  int samples = 2000;
  double step = 1e-3;
  double accept_tol = 1e-7;
  int grid = 64;
  // Extra candidate directions tried before the random ones.
  std::vector<Vec> candidates;
};

/// Unit directions v with x in proj_G(x + t v) for the configured t.
std::vector<Vec> sample_proximal_normals(const SetOracle& g, const Vec& x, const ProximalConfig& cfg);

struct Witness {
  Vec x, xp, up;
  double radius = 0.0;
  double kappa = 0.0;
};

std::string witness_to_json(const Witness& w);
Witness witness_from_json(const std::string& text);

enum class Trend { kBounded, kUnbounded };

struct EstimateReport {
  std::vector<double> radii;
  std::vector<double> lower_bounds;
  Trend trend = Trend::kBounded;
  std::optional<Witness> witness;
  // Verdict against a claimed constant (when one was supplied).
  std::optional<double> claimed;
  bool falsified = false;
  // Set when a sample left the domain (function estimates).
  std::optional<Vec> dom_violation;
};

/// Empirical lower bounds for the graphical modulus of S relative to X at
/// (xbar, ubar): max of e(S(x') cap W, S(x)) / |x' - x| over sampled pairs.
EstimateReport estimate_modulus(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                const Vec& ubar, const SampleConfig& cfg,
                                std::optional<double> claimed = std::nullopt);

// Excess ratio for one pair, as used by the estimator (exact polyhedral
// distances). Returns 0 when S(x') cap W is empty.
double pair_ratio(const StratifiedMapping& s, const Vec& x, const Vec& xp, const Vec& ubar, double radius);

// Recomputes a witness; true when it violates the inclusion for w.kappa.
bool replay_witness(const StratifiedMapping& s, const Vec& ubar, const Witness& w);

struct BlackBoxFunction {
  int dim = 0;
  std::function<double(const Vec&)> value;
  // Membership in the domain (defaults to everywhere).
  std::function<bool(const Vec&)> in_domain;
};

EstimateReport estimate_function_modulus(const BlackBoxFunction& h, const HPolyhedron& x_set, const Vec& xbar,
                                         const SampleConfig& cfg);

struct PairSequenceReport {
  std::vector<double> ratios;
  Trend trend = Trend::kBounded;
};

// Difference quotients |h(x_k) - h(x'_k)| / |x_k - x'_k| along given pairs.
PairSequenceReport evaluate_pair_sequence(const BlackBoxFunction& h, const std::vector<Vec>& xs,
                                          const std::vector<Vec>& xps);

// Power-law trend test on a sequence of lower bounds indexed by shrinking
// scale.
Trend classify_trend(const std::vector<double>& values);

}  // namespace polylip
