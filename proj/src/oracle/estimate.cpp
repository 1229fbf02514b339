#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "polylip/errors.hpp"
#include "polylip/oracle.hpp"
#include "polylip/rng.hpp"
#include "polylip/tolerance.hpp"

namespace polylip {

namespace {

struct PairResult {
  double ratio = 0.0;
  Vec x, xp, up;
};

// Point of X within distance r of xbar: project a uniform ball sample.
Vec sample_in(const HPolyhedron& x_set, const Vec& xbar, double r, CounterRng& rng) {
  int n = static_cast<int>(xbar.size());
  Vec d = rng.unit_vec(n);
  double rho = r * std::pow(rng.uniform(), 1.0 / n);
  return project_polyhedron(x_set, xbar + rho * d);
}

// Candidate points of Q: its vertices, plus random convex combinations when
// the distance function to the target is not convex.
std::vector<Vec> discretize(const HPolyhedron& q, int extra) {
  VRep v = hrep_to_vrep(q);
  std::vector<Vec> out = v.vertices;
  if (extra > 0 && v.vertices.size() > 1) {
    CounterRng rng(0, 0xd15c, v.vertices.size());
    for (int i = 0; i < extra; ++i) {
      Vec y = Vec::Zero(q.dim());
      double tot = 0;
      for (const Vec& p : v.vertices) {
        double w = -std::log(std::max(rng.uniform(), 1e-300));
        y += w * p;
        tot += w;
      }
      out.push_back(y / tot);
    }
  }
  return out;
}

double min_distance(const Vec& y, const std::vector<HPolyhedron>& target) {
  double best = kInf;
  for (const HPolyhedron& p : target) best = std::min(best, distance(y, p));
  return best;
}

// e(S(x') cap W, S(x)) with W the box of half-width r around ubar.
double excess_at(const StratifiedMapping& s, const Vec& x, const Vec& xp, const Vec& ubar, double r, int disc,
                 Vec* argmax) {
  std::vector<HPolyhedron> from = s.values(xp);
  std::vector<HPolyhedron> to = s.values(x);
  HPolyhedron w = HPolyhedron::box(ubar.array() - r, ubar.array() + r);
  double best = -1.0;
  int extra = to.size() > 1 ? disc : 0;
  for (const HPolyhedron& p : from) {
    HPolyhedron q = p.intersect(w);
    if (q.empty()) continue;
    for (const Vec& y : discretize(q, extra)) {
      double d = min_distance(y, to);
      if (d > best) {
        best = d;
        if (argmax) *argmax = y;
      }
    }
  }
  return std::max(best, 0.0);
}

template <class R, class F>
std::vector<R> run_parallel(int count, int threads, F&& work) {
  std::vector<R> out(count);
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) out[i] = work(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) out[i] = work(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// Deterministic reduction: largest ratio, lowest index on ties.
int argmax_ratio(const std::vector<PairResult>& rs) {
  int best = -1;
  for (size_t i = 0; i < rs.size(); ++i)
    if (best < 0 || rs[i].ratio > rs[best].ratio) best = static_cast<int>(i);
  return best;
}

std::vector<double> vec_of(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec vec_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw SchemaError(std::string("witness.") + key + " must be an array");
  std::vector<double> xs = j[key].get<std::vector<double>>();
  return Eigen::Map<Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

}  // namespace

double pair_ratio(const StratifiedMapping& s, const Vec& x, const Vec& xp, const Vec& ubar, double radius) {
  double den = (xp - x).norm();
  if (den <= 0) return 0.0;
  return excess_at(s, x, xp, ubar, radius, SampleConfig().set_discretization, nullptr) / den;
}

EstimateReport estimate_modulus(const StratifiedMapping& s, const HPolyhedron& x_set, const Vec& xbar,
                                const Vec& ubar, const SampleConfig& cfg, std::optional<double> claimed) {
  cfg.validate();
  if (!x_set.contains(xbar)) throw DomainError("estimate_modulus: xbar is not in X");
  if (!s.in_graph(xbar, ubar)) throw DomainError("estimate_modulus: (xbar, ubar) is not in the graph");
  EstimateReport rep;
  rep.radii = cfg.radii;
  rep.claimed = claimed;
  PairResult overall;
  double overall_radius = 0;
  for (size_t ri = 0; ri < cfg.radii.size(); ++ri) {
    const double r = cfg.radii[ri];
    auto work = [&](int i) {
      CounterRng rng(cfg.seed, ri, static_cast<std::uint64_t>(i));
      PairResult pr;
      pr.x = sample_in(x_set, xbar, r, rng);
      if (i % 2 == 0) {
        pr.xp = sample_in(x_set, xbar, r, rng);
      } else {
        // Local pair: second point at a log-uniform distance from the first.
        double rho = r * std::pow(10.0, -4.0 * rng.uniform());
        pr.xp = project_polyhedron(x_set, pr.x + rho * rng.unit_vec(s.n));
        if ((pr.xp - xbar).norm() > r) return pr;
      }
      if (rng.uniform() < 0.5) std::swap(pr.x, pr.xp);
      double den = (pr.xp - pr.x).norm();
      if (den <= 0) return pr;
      try {
        pr.ratio = excess_at(s, pr.x, pr.xp, ubar, r, cfg.set_discretization, &pr.up) / den;
      } catch (const std::exception& e) {
        throw std::runtime_error("estimate_modulus: evaluator failed at radius " + std::to_string(r) + ", pair " +
                                 std::to_string(i) + ": " + e.what());
      }
      return pr;
    };
    std::vector<PairResult> rs = run_parallel<PairResult>(cfg.pairs_per_radius, cfg.threads, work);
    int b = argmax_ratio(rs);
    rep.lower_bounds.push_back(rs[b].ratio);
    if (rs[b].ratio > overall.ratio || ri == 0) {
      overall = rs[b];
      overall_radius = r;
    }
  }
  rep.trend = classify_trend(rep.lower_bounds);
  if (overall.up.size() > 0) {
    Witness w{overall.x, overall.xp, overall.up, overall_radius, overall.ratio};
    if (claimed) {
      w.kappa = *claimed;
      rep.falsified = replay_witness(s, ubar, w);
    }
    rep.witness = w;
  }
  return rep;
}

bool replay_witness(const StratifiedMapping& s, const Vec& ubar, const Witness& w) {
  double tau = tolerance().tau();
  if ((w.up - ubar).lpNorm<Eigen::Infinity>() > w.radius + tau) return false;
  if (!s.in_graph(w.xp, w.up)) return false;
  double d = min_distance(w.up, s.values(w.x));
  double bound = w.kappa * (w.xp - w.x).norm();
  return d > bound + tau * std::max(1.0, bound);
}

std::string witness_to_json(const Witness& w) {
  nlohmann::json j;
  j["x"] = vec_of(w.x);
  j["xp"] = vec_of(w.xp);
  j["up"] = vec_of(w.up);
  j["radius"] = w.radius;
  if (std::isfinite(w.kappa)) {
    j["kappa"] = w.kappa;
  } else {
    j["kappa"] = w.kappa > 0 ? "inf" : "nan";
  }
  return j.dump();
}

Witness witness_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("witness: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("witness must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "x" && k != "xp" && k != "up" && k != "radius" && k != "kappa")
      throw SchemaError("witness: unknown field " + k);
  }
  Witness w;
  w.x = vec_from(j, "x");
  w.xp = vec_from(j, "xp");
  w.up = vec_from(j, "up");
  if (!j.contains("radius") || !j["radius"].is_number()) throw SchemaError("witness.radius must be a number");
  if (!j.contains("kappa") || !(j["kappa"].is_number() || j["kappa"] == "inf"))
    throw SchemaError("witness.kappa must be a number or \"inf\"");
  w.radius = j["radius"].get<double>();
  w.kappa = j["kappa"].is_number() ? j["kappa"].get<double>() : kInf;
  if (w.x.size() != w.xp.size()) throw SchemaError("witness: x and xp differ in length");
  return w;
}

EstimateReport estimate_function_modulus(const BlackBoxFunction& h, const HPolyhedron& x_set, const Vec& xbar,
                                         const SampleConfig& cfg) {
  cfg.validate();
  auto in_dom = [&](const Vec& z) { return !h.in_domain || h.in_domain(z); };
  EstimateReport rep;
  rep.radii = cfg.radii;
  struct FnPair {
    double ratio = 0.0;
    Vec x, xp;
    std::optional<Vec> bad;
  };
  for (size_t ri = 0; ri < cfg.radii.size(); ++ri) {
    const double r = cfg.radii[ri];
    std::vector<FnPair> rs = run_parallel<FnPair>(cfg.pairs_per_radius, cfg.threads, [&](int i) {
      CounterRng rng(cfg.seed, ri, static_cast<std::uint64_t>(i));
      FnPair fp;
      fp.x = sample_in(x_set, xbar, r, rng);
      if (i % 2 == 0) {
        fp.xp = sample_in(x_set, xbar, r, rng);
      } else {
        double rho = r * std::pow(10.0, -4.0 * rng.uniform());
        fp.xp = project_polyhedron(x_set, fp.x + rho * rng.unit_vec(h.dim));
        if ((fp.xp - xbar).norm() > r) return fp;
      }
      if (!in_dom(fp.x) || !in_dom(fp.xp)) return fp;
      double a = h.value(fp.x), b = h.value(fp.xp);
      if (!std::isfinite(a)) fp.bad = fp.x;
      if (!std::isfinite(b)) fp.bad = fp.xp;
      double den = (fp.xp - fp.x).norm();
      if (!fp.bad && den > 0) fp.ratio = std::abs(a - b) / den;
      return fp;
    });
    int b = 0;
    for (size_t i = 0; i < rs.size(); ++i) {
      if (rs[i].bad && !rep.dom_violation) rep.dom_violation = rs[i].bad;
      if (rs[i].ratio > rs[b].ratio) b = static_cast<int>(i);
    }
    rep.lower_bounds.push_back(rs[b].ratio);
    if (!rep.witness || rs[b].ratio > rep.witness->kappa)
      rep.witness = Witness{rs[b].x, rs[b].xp, Vec(), r, rs[b].ratio};
  }
  rep.trend = classify_trend(rep.lower_bounds);
  return rep;
}

PairSequenceReport evaluate_pair_sequence(const BlackBoxFunction& h, const std::vector<Vec>& xs,
                                          const std::vector<Vec>& xps) {
  if (xs.size() != xps.size()) throw SchemaError("pair sequence: xs and xps differ in length");
  PairSequenceReport rep;
  for (size_t k = 0; k < xs.size(); ++k) {
    double den = (xs[k] - xps[k]).norm();
    if (den <= 0) throw DomainError("pair sequence: coincident pair at index " + std::to_string(k));
    if (h.in_domain && (!h.in_domain(xs[k]) || !h.in_domain(xps[k])))
      throw DomainError("pair sequence: point outside the domain at index " + std::to_string(k));
    rep.ratios.push_back(std::abs(h.value(xs[k]) - h.value(xps[k])) / den);
  }
  rep.trend = classify_trend(rep.ratios);
  return rep;
}

Trend classify_trend(const std::vector<double>& values) {
  for (double v : values)
    if (!std::isfinite(v)) return Trend::kUnbounded;
  // Short sequences (a radius schedule) carry no growth signal.
  if (values.size() < 5) return Trend::kBounded;
  // Least-squares slope of log(value) against log(index) over the later
  // half; a power law with exponent above 1/4 is unbounded.
  size_t lo = values.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t i = lo; i < values.size(); ++i) {
    if (values[i] <= 0) return Trend::kBounded;
    double a = std::log(static_cast<double>(i + 1)), b = std::log(values[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
    ++cnt;
  }
  double den = cnt * sxx - sx * sx;
  if (den <= 0) return Trend::kBounded;
  double slope = (cnt * sxy - sx * sy) / den;
  return slope > 0.25 ? Trend::kUnbounded : Trend::kBounded;
}

}  // namespace polylip
