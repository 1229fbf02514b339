#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "acceptance.hpp"
#include "polylip/errors.hpp"
#include "polylip/tolerance.hpp"
#include "problem.hpp"

using namespace polylip;
using io::json;

namespace {

enum Exit { kOk = 0, kAcceptance = 1, kSchema = 2, kDomain = 3, kBudget = 4, kInternal = 5 };

struct Options {
  std::string command;
  std::string in;
  std::string out = ".";
  std::string config;
  double tol = 1e-9;
  int threads = 1;
  std::uint64_t seed = 1;
  int pairs = 10000;
  std::string radii, x, u, v, dx, du, replay;
  double claim = 0.0;
  // Set by a flag or the config file.
  bool seed_set = false, pairs_set = false, claim_set = false;
};

std::string read_all(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream f(path);
  if (!f) throw SchemaError("--in: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw BudgetError("cannot write " + p.string());
  f << text;
}

// Config-file values for options that were not given on the command line.
void apply_config(Options& o, const CLI::App& app) {
  if (o.config.empty()) return;
  json j;
  try {
    j = json::parse(read_all(o.config));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("--config: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("--config: expected an object");
  io::reject_unknown(j, "config", {"in", "out", "tol", "threads", "seed", "pairs", "radii", "x", "u", "v", "claim"});
  auto unset = [&](const char* flag) { return app.count(flag) == 0; };
  auto str = [&](const char* key) {
    if (!j[key].is_string()) throw SchemaError(std::string("config.") + key + ": expected a string");
    return j[key].get<std::string>();
  };
  auto number = [&](const char* key) {
    if (!j[key].is_number()) throw SchemaError(std::string("config.") + key + ": expected a number");
    return j[key].get<double>();
  };
  auto vec_text = [&](const char* key) {
    Vec v = io::vec_from(j[key], std::string("config.") + key, -1);
    std::string s;
    for (int i = 0; i < v.size(); ++i) {
      std::ostringstream os;
      os.precision(17);
      os << v(i);
      s += (i ? "," : "") + os.str();
    }
    return s;
  };
  if (j.contains("in") && unset("--in")) o.in = str("in");
  if (j.contains("out") && unset("--out")) o.out = str("out");
  if (j.contains("tol") && unset("--tol")) o.tol = number("tol");
  if (j.contains("threads") && unset("--threads")) o.threads = static_cast<int>(number("threads"));
  if (j.contains("seed") && unset("--seed")) {
    o.seed = static_cast<std::uint64_t>(number("seed"));
    o.seed_set = true;
  }
  if (j.contains("pairs") && unset("--pairs")) {
    o.pairs = static_cast<int>(number("pairs"));
    o.pairs_set = true;
  }
  if (j.contains("radii") && unset("--radii")) o.radii = vec_text("radii");
  if (j.contains("x") && unset("--x")) o.x = vec_text("x");
  if (j.contains("u") && unset("--u")) o.u = vec_text("u");
  if (j.contains("v") && unset("--v")) o.v = vec_text("v");
  if (j.contains("claim") && unset("--claim")) {
    o.claim = number("claim");
    o.claim_set = true;
  }
}

struct Context {
  Options opt;
  const CLI::App* app = nullptr;
  io::Problem problem;

  Vec point(const char* flag, const std::string& text, const std::optional<Vec>& from_file, int n) const {
    Vec v = !text.empty() ? io::parse_vec(text, flag) : from_file ? *from_file : Vec::Zero(n);
    if (v.size() != n) throw SchemaError(std::string(flag) + ": expected " + std::to_string(n) + " entries");
    return v;
  }

  SampleConfig sampling() const {
    SampleConfig c = problem.sampling;
    if (opt.seed_set) c.seed = opt.seed;
    if (opt.pairs_set) c.pairs_per_radius = opt.pairs;
    if (!opt.radii.empty()) {
      Vec r = io::parse_vec(opt.radii, "--radii");
      c.radii.assign(r.data(), r.data() + r.size());
    }
    c.threads = opt.threads;
    c.validate();
    return c;
  }
};

int u_dim(const StratifiedMapping& s) { return s.m; }

json criterion_report(Context& c) {
  StratifiedMapping s = io::build_mapping(c.problem);
  HPolyhedron xs = io::resolve_set(c.problem, &s);
  Vec x = c.point("--x", c.opt.x, c.problem.x, s.n);
  Vec u = c.point("--u", c.opt.u, c.problem.u, u_dim(s));
  CriterionReport r = check_criterion(s, xs, x, u);
  json strata = json::array();
  for (const StratumKappa& k : r.per_stratum) strata.push_back({{"label", k.label}, {"kappa", io::num(k.kappa)}});
  json checks;
  if (r.holds) {
    CheckConfig cc;
    cc.seed = c.sampling().seed;
    cc.samples = c.sampling().pairs_per_radius;
    auto enc = [](const NeighborhoodCheck& n) {
      json j = {{"pass", n.pass}, {"samples", n.samples}};
      if (n.witness)
        j["witness"] = {{"x", io::to_json(n.witness->x)}, {"u", io::to_json(n.witness->u)},
                        {"xstar", io::to_json(n.witness->xstar)}, {"ustar", io::to_json(n.witness->ustar)},
                        {"w", io::to_json(n.witness->w)}, {"label", n.witness->label}};
      return j;
    };
    checks["necessity"] = enc(neighborhood_necessity_check(s, xs, x, u, r.modulus, cc));
    checks["sufficiency"] = enc(neighborhood_sufficiency_check(s, xs, x, u, r.modulus, cc));
  } else {
    checks["necessity"] = "skipped: modulus is infinite";
    checks["sufficiency"] = "skipped: modulus is infinite";
  }
  DirectionalReport d = directional_sufficiency_check(s, xs, x, u);
  json fails = json::array();
  for (const FailingDirection& f : d.failures)
    fails.push_back({{"dx", io::to_json(f.dx)}, {"du", io::to_json(f.du)}, {"kernel", io::to_json(f.kernel)}});
  checks["directional"] = {{"pass", d.pass}, {"lifting_holds", d.lifting_holds}, {"failures", fails}};
  return {{"criterion", r.holds},
          {"modulus", io::num(r.modulus)},
          {"kernel_witness", r.kernel_witness ? io::to_json(*r.kernel_witness) : json(nullptr)},
          {"x", io::to_json(x)},
          {"u", io::to_json(u)},
          {"X", io::to_json(xs)},
          {"per_stratum", strata},
          {"checks", checks}};
}

json lip_report(const LipReport& r) {
  json j = {{"modulus", io::num(r.modulus)},
            {"profile_modulus", io::num(r.profile_modulus)},
            {"routes_agree", r.routes_agree},
            {"lipschitz", r.lipschitz},
            {"subgradients_bounded", r.subgradients_bounded},
            {"horizon_trivial", r.horizon_trivial},
            {"projectional_subgradients", io::to_json(r.projectional.basic)},
            {"projectional_horizon", io::to_json(r.projectional.horizon)}};
  if (r.recession_witness) j["recession_witness"] = io::to_json(*r.recession_witness);
  return j;
}

json sublinear_report(const SublinearReport& r) {
  json pairs = json::array();
  for (const FacePair& p : r.pairs)
    pairs.push_back({{"x", io::to_json(p.x)}, {"excess", io::num(p.excess)}, {"recession_matches", p.recession_matches},
                     {"face", io::to_json(p.face)}, {"horizon_face", io::to_json(p.horizon_face)}});
  return {{"modulus", io::num(r.modulus)},
          {"subgradient_modulus", io::num(r.subgradient_modulus)},
          {"recession_matches", r.recession_matches},
          {"horizon", io::to_json(r.horizon)},
          {"domain", io::to_json(r.domain)},
          {"pairs", pairs},
          {"subgradients", io::to_json(r.subgradients)}};
}

json modulus_report(Context& c) {
  const io::Problem& p = c.problem;
  if (p.is_mapping()) {
    StratifiedMapping s = io::build_mapping(p);
    HPolyhedron xs = io::resolve_set(p, &s);
    Vec x = c.point("--x", c.opt.x, p.x, s.n);
    Vec u = c.point("--u", c.opt.u, p.u, u_dim(s));
    CriterionReport r = check_criterion(s, xs, x, u);
    OuterNorm on = outer_norm(projectional_coderivative(s, xs, x, u));
    json j = {{"modulus", io::num(r.modulus)}, {"criterion", r.holds}, {"outer_norm", io::num(on.value)}};
    if (on.xstar) j["attained_at"] = {{"xstar", io::to_json(*on.xstar)}, {"ustar", io::to_json(*on.ustar)}};
    return j;
  }
  if (p.kind == "pl_function") {
    HPolyhedron xs = io::resolve_set(p, nullptr);
    Vec x = c.point("--x", c.opt.x, p.x, p.point_dim());
    json j = lip_report(relative_lip_modulus(*p.function, xs, x));
    j["x"] = io::to_json(x);
    return j;
  }
  if (p.kind == "sublinear") {
    SublinearReport r = sublinear_analysis(*p.d);
    return {{"modulus", io::num(r.modulus)}, {"subgradient_modulus", io::num(r.subgradient_modulus)}};
  }
  throw SchemaError("kind: modulus needs lcp, linsys, union, pl_function or sublinear (use estimate for blackbox)");
}

json coderivative_report(Context& c) {
  StratifiedMapping s = io::build_mapping(c.problem);
  HPolyhedron xs = io::resolve_set(c.problem, &s);
  Vec x = c.point("--x", c.opt.x, c.problem.x, s.n);
  Vec u = c.point("--u", c.opt.u, c.problem.u, u_dim(s));
  PHMap proj = projectional_coderivative(s, xs, x, u);
  PHMap full = coderivative(s, x, u);
  json j = {{"graph_order", "(u*, x*)"},
            {"outer_norm_projectional", io::num(outer_norm(proj).value)},
            {"outer_norm_classical", io::num(outer_norm(full).value)},
            {"projectional", io::to_json(proj)},
            {"classical", io::to_json(full)},
            {"kernel_projectional", io::to_json(proj.kernel())},
            {"kernel_classical", io::to_json(full.kernel())}};
  if (!c.opt.dx.empty() || !c.opt.du.empty()) {
    Vec dx = c.point("--dx", c.opt.dx, std::nullopt, s.n);
    Vec du = c.point("--du", c.opt.du, std::nullopt, u_dim(s));
    PHMap d = directional_coderivative(s, x, u, dx, du);
    j["directional"] = {{"dx", io::to_json(dx)}, {"du", io::to_json(du)}, {"map", io::to_json(d)},
                        {"kernel", io::to_json(d.kernel())}};
  }
  return j;
}

const PLFunction& need_function(const io::Problem& p, const char* cmd) {
  if (p.kind != "pl_function") throw SchemaError(std::string("kind: ") + cmd + " needs a pl_function problem");
  return *p.function;
}

json subdiff_report(Context& c) {
  const PLFunction& f = need_function(c.problem, "subdiff");
  Vec x = c.point("--x", c.opt.x, c.problem.x, f.dim());
  HPolyhedron xs = io::resolve_set(c.problem, nullptr);
  Subdifferentials b = subdifferentials(f, x);
  Subdifferentials p = projectional_subdifferentials(f, xs, x);
  return {{"x", io::to_json(x)},
          {"value", io::num(f.value(x))},
          {"basic", io::to_json(b.basic)},
          {"horizon", io::to_json(b.horizon)},
          {"projectional", io::to_json(p.basic)},
          {"projectional_horizon", io::to_json(p.horizon)}};
}

json levelset_report(Context& c) {
  const PLFunction& f = need_function(c.problem, "levelset");
  Vec x = c.point("--x", c.opt.x, c.problem.x, f.dim());
  if (c.opt.v.empty() && !c.problem.v) throw SchemaError("--v: levelset needs a vector v (flag or field v)");
  Vec v = c.point("--v", c.opt.v, c.problem.v, f.dim());
  LevelSetReport r = level_set_analysis(f, x, v);
  return {{"x", io::to_json(x)},
          {"v", io::to_json(v)},
          {"relative_llp", r.relative_llp},
          {"lip_X", io::num(r.lip_x)},
          {"classical_lip", io::num(r.classical_lip)},
          {"coderivative_lip_X", io::num(r.coderivative_lip_x)},
          {"coderivative_classical", io::num(r.coderivative_classical)},
          {"routes_agree", r.routes_agree},
          {"outer_limiting", io::to_json(r.outer_limiting)},
          {"basic", io::to_json(r.basic)}};
}

json sublinear_cmd(Context& c) {
  if (c.problem.kind != "sublinear") throw SchemaError("kind: sublinear needs a sublinear problem");
  return sublinear_report(sublinear_analysis(*c.problem.d));
}

json estimate_report(Context& c, std::optional<std::string>& witness_out) {
  const io::Problem& p = c.problem;
  SampleConfig cfg = c.sampling();
  std::optional<double> claim = p.claim;
  if (c.opt.claim_set) claim = c.opt.claim;
  if (p.is_mapping()) {
    StratifiedMapping s = io::build_mapping(p);
    Vec u = c.point("--u", c.opt.u, p.u, u_dim(s));
    if (!c.opt.replay.empty()) {
      Witness w = witness_from_json(read_all(c.opt.replay));
      if (w.x.size() != s.n || w.xp.size() != s.n || w.up.size() != s.m)
        throw SchemaError("--replay: witness dimensions do not match the problem");
      return {{"replayed", io::to_json(w)},
              {"ratio", io::num(pair_ratio(s, w.x, w.xp, u, w.radius))},
              {"violates_kappa", replay_witness(s, u, w)}};
    }
    HPolyhedron xs = io::resolve_set(p, &s);
    Vec x = c.point("--x", c.opt.x, p.x, s.n);
    EstimateReport r = estimate_modulus(s, xs, x, u, cfg, claim);
    if (r.witness) witness_out = witness_to_json(*r.witness);
    json j = io::to_json(r);
    j["seed"] = cfg.seed;
    j["pairs_per_radius"] = cfg.pairs_per_radius;
    return j;
  }
  BlackBoxFunction h = io::build_blackbox(p);
  if (!c.opt.replay.empty()) {
    Witness w = witness_from_json(read_all(c.opt.replay));
    if (w.x.size() != h.dim || w.xp.size() != h.dim) throw SchemaError("--replay: witness dimensions do not match");
    PairSequenceReport seq = evaluate_pair_sequence(h, {w.x}, {w.xp});
    return {{"replayed", io::to_json(w)}, {"ratio", io::num(seq.ratios[0])}};
  }
  HPolyhedron xs = io::resolve_set(p, nullptr);
  if (p.kind == "sublinear" && !p.x_set) {
    PolyCone dom = sublinear_analysis(*p.d).domain;
    xs = HPolyhedron(dom.ineq(), Vec::Zero(dom.ineq().rows()), dom.eq(), Vec::Zero(dom.eq().rows()));
  }
  Vec x = c.point("--x", c.opt.x, p.x, h.dim);
  EstimateReport r = estimate_function_modulus(h, xs, x, cfg);
  if (r.witness) witness_out = witness_to_json(*r.witness);
  json j = io::to_json(r);
  j["seed"] = cfg.seed;
  j["pairs_per_radius"] = cfg.pairs_per_radius;
  return j;
}

int run(Context& c) {
  const std::string& cmd = c.opt.command;
  std::filesystem::path out(c.opt.out);
  std::filesystem::create_directories(out);
  json report;
  int code = kOk;
  std::optional<std::string> witness;
  if (cmd == "reproduce-paper") {
    json rows = json::array();
    bool all = true;
    for (int id = 1; id <= acceptance::criterion_count(); ++id) {
      acceptance::Result r = acceptance::run_criterion(id);
      std::cout << acceptance::format_line(r) << std::endl;
      rows.push_back({{"id", r.id}, {"criterion", r.title}, {"pass", r.pass}, {"seconds", r.seconds},
                      {"detail", r.detail}});
      all = all && r.pass;
    }
    report = {{"all_pass", all}, {"criteria", rows}};
    code = all ? kOk : kAcceptance;
  } else {
    c.problem = io::parse_problem(read_all(c.opt.in));
    if (cmd == "criterion") {
      report = criterion_report(c);
    } else if (cmd == "modulus") {
      report = modulus_report(c);
    } else if (cmd == "coderivative") {
      report = coderivative_report(c);
    } else if (cmd == "subdiff") {
      report = subdiff_report(c);
    } else if (cmd == "levelset") {
      report = levelset_report(c);
    } else if (cmd == "sublinear") {
      report = sublinear_cmd(c);
    } else {
      report = estimate_report(c, witness);
    }
    json head = {{"command", cmd}, {"kind", c.problem.kind}, {"tolerance", tolerance().tau()}};
    head.update(report);
    report = head;
  }
  write_file(out / "report.json", report.dump(2) + "\n");
  write_file(out / "report.md", io::to_markdown("polylip " + cmd, report));
  if (witness) write_file(out / "witness.json", *witness + "\n");
  if (cmd != "reproduce-paper") {
    json summary = json::object();
    for (auto it = report.begin(); it != report.end(); ++it)
      if (it->is_primitive()) summary[it.key()] = *it;
    std::cout << summary.dump() << std::endl;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"polylip: relative Lipschitz-like analysis of polyhedral mappings and piecewise-linear functions"};
  app.require_subcommand(1);
  app.add_option("--in", o.in, "problem file (JSON), - for stdin");
  app.add_option("--out", o.out, "directory for report.json / report.md");
  app.add_option("--config", o.config, "JSON file with defaults for the flags");
  app.add_option("--tol", o.tol, "tolerance tau (overrides POLYLIP_TOL)");
  app.add_option("--threads", o.threads, "sampling threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "sampling seed");
  app.add_option("--pairs", o.pairs, "pairs per radius")->check(CLI::PositiveNumber);
  app.add_option("--radii", o.radii, "radii, comma separated and decreasing");
  app.add_option("--x", o.x, "base point x (comma separated)");
  app.add_option("--u", o.u, "base value u in S(x)");
  app.add_option("--v", o.v, "vector v for levelset");
  app.add_option("--dx", o.dx, "direction in x for the directional coderivative");
  app.add_option("--du", o.du, "direction in u for the directional coderivative");
  app.add_option("--claim", o.claim, "claimed modulus to falsify (estimate)");
  app.add_option("--replay", o.replay, "witness file to replay (estimate)");
  const std::vector<std::pair<const char*, const char*>> cmds = {
      {"criterion", "generalized coderivative criterion with sampled checks"},
      {"modulus", "exact modulus"},
      {"coderivative", "classical and projectional coderivatives"},
      {"subdiff", "subgradients of a piecewise-linear function"},
      {"levelset", "level-set mapping moduli"},
      {"sublinear", "support-function analysis"},
      {"estimate", "sampling lower bounds"},
      {"reproduce-paper", "run the acceptance suite"}};
  for (auto& [name, help] : cmds) {
    CLI::App* sc = app.add_subcommand(name, help);
    sc->fallthrough();
    sc->callback([&o, n = std::string(name)] { o.command = n; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kSchema;
  }
  try {
    o.seed_set = app.count("--seed") > 0;
    o.pairs_set = app.count("--pairs") > 0;
    o.claim_set = app.count("--claim") > 0;
    apply_config(o, app);
    double tau = o.tol;
    if (app.count("--tol") == 0) {
      if (const char* env = std::getenv("POLYLIP_TOL")) {
        try {
          tau = std::stod(env);
        } catch (const std::exception&) {
          throw SchemaError(std::string("POLYLIP_TOL: cannot parse '") + env + "'");
        }
      }
    }
    if (!(tau > 0 && tau < 1e-2)) throw SchemaError("--tol: expected 0 < tau < 1e-2");
    set_tolerance(tau);
    if (o.command != "reproduce-paper" && o.in.empty()) throw SchemaError("--in: required for " + o.command);
    Context c;
    c.opt = o;
    c.app = &app;
    return run(c);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const UnsupportedError& e) {
    std::cerr << "domain error (unsupported local structure): " << e.what() << "\n";
    return kDomain;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
