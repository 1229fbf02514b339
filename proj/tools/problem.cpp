#include "problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polylip/errors.hpp"

namespace polylip::io {

namespace {

std::string sub(const std::string& field, const std::string& key) {
  return field.empty() ? key : field + "." + key;
}

double number_at(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw SchemaError(field + ": expected a number");
}

int int_at(const json& j, const std::string& field, int lo) {
  if (!j.is_number_integer()) throw SchemaError(field + ": expected an integer");
  long long v = j.get<long long>();
  if (v < lo || v > 1000000000) throw SchemaError(field + ": out of range");
  return static_cast<int>(v);
}

const json& need(const json& j, const std::string& field, const std::string& key) {
  if (!j.contains(key)) throw SchemaError(sub(field, key) + ": missing");
  return j.at(key);
}

SampleConfig sampling_from(const json& j, const std::string& field) {
  if (!j.is_object()) throw SchemaError(field + ": expected an object");
  reject_unknown(j, field, {"seed", "radii", "pairs", "threads", "set_discretization"});
  SampleConfig c;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SchemaError(field + ".seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("radii")) {
    Vec r = vec_from(j["radii"], sub(field, "radii"), -1);
    c.radii.assign(r.data(), r.data() + r.size());
  }
  if (j.contains("pairs")) c.pairs_per_radius = int_at(j["pairs"], sub(field, "pairs"), 1);
  if (j.contains("threads")) c.threads = int_at(j["threads"], sub(field, "threads"), 1);
  if (j.contains("set_discretization"))
    c.set_discretization = int_at(j["set_discretization"], sub(field, "set_discretization"), 1);
  c.validate();
  return c;
}

PLFunction function_from(const json& j) {
  const int n = int_at(need(j, "", "n"), "n", 1);
  const json& cells = need(j, "", "cells");
  if (!cells.is_array() || cells.empty()) throw SchemaError("cells: expected a non-empty array");
  std::vector<PLCell> out;
  for (size_t i = 0; i < cells.size(); ++i) {
    const std::string f = "cells[" + std::to_string(i) + "]";
    const json& c = cells[i];
    if (!c.is_object()) throw SchemaError(f + ": expected an object");
    reject_unknown(c, f, {"C", "g", "c"});
    PLCell cell;
    cell.cell = c.contains("C") ? hpoly_from(c["C"], f + ".C", n) : HPolyhedron::whole(n);
    cell.g = vec_from(need(c, f, "g"), f + ".g", n);
    cell.c = c.contains("c") ? number_at(c["c"], f + ".c") : 0.0;
    if (!std::isfinite(cell.c)) throw SchemaError(f + ".c: must be finite");
    out.push_back(cell);
  }
  return PLFunction(n, out);
}

void read_query(Problem& p, const json& q, const std::string& field) {
  const int n = p.point_dim();
  if (q.contains("x")) p.x = vec_from(q["x"], sub(field, "x"), n);
  if (q.contains("v")) p.v = vec_from(q["v"], sub(field, "v"), n);
  if (q.contains("X")) {
    const json& x = q["X"];
    if (x.is_string()) {
      const std::string s = x.get<std::string>();
      if (s == "whole") {
        p.x_set = HPolyhedron::whole(n);
      } else if (s != "domain") {
        throw SchemaError(sub(field, "X") + ": expected a polyhedron, \"domain\" or \"whole\"");
      }
    } else {
      p.x_set = hpoly_from(x, sub(field, "X"), n);
    }
  }
  if (q.contains("claim")) p.claim = number_at(q["claim"], sub(field, "claim"));
}

int u_dim(const Problem& p) {
  if (p.kind == "lcp") return static_cast<int>(p.lcp_m.rows());
  if (p.kind == "linsys") return static_cast<int>(p.lin_a.cols());
  return p.union_m;
}

}  // namespace

void reject_unknown(const json& j, const std::string& field, const std::vector<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw SchemaError(sub(field, it.key()) + ": unknown field");
}

Vec vec_from(const json& j, const std::string& field, int size) {
  if (!j.is_array()) throw SchemaError(field + ": expected an array of numbers");
  if (size >= 0 && static_cast<int>(j.size()) != size)
    throw SchemaError(field + ": expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
  Vec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = number_at(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Mat mat_from(const json& j, const std::string& field, int cols) {
  if (!j.is_array()) throw SchemaError(field + ": expected an array of rows");
  const int r = static_cast<int>(j.size());
  if (r > 0 && cols < 0) {
    if (!j[0].is_array()) throw SchemaError(field + "[0]: expected an array of numbers");
    cols = static_cast<int>(j[0].size());
  }
  Mat m(r, std::max(cols, 0));
  for (int i = 0; i < r; ++i) {
    Vec row = vec_from(j[i], field + "[" + std::to_string(i) + "]", cols);
    for (int k = 0; k < cols; ++k)
      if (!std::isfinite(row(k))) throw SchemaError(field + ": entries must be finite");
    m.row(i) = row.transpose();
  }
  return m;
}

HPolyhedron hpoly_from(const json& j, const std::string& field, int n) {
  if (!j.is_object()) throw SchemaError(field + ": expected an object with A, b, C, d");
  reject_unknown(j, field, {"n", "A", "b", "C", "d"});
  if (j.contains("n")) {
    int given = int_at(j["n"], sub(field, "n"), 1);
    if (n >= 0 && given != n) throw SchemaError(sub(field, "n") + ": expected " + std::to_string(n));
    n = given;
  }
  auto cols_of = [&](const char* key) {
    if (j.contains(key) && j[key].is_array() && !j[key].empty() && j[key][0].is_array())
      return static_cast<int>(j[key][0].size());
    return -1;
  };
  if (n < 0) n = std::max(cols_of("A"), cols_of("C"));
  if (n < 1) throw SchemaError(field + ": cannot infer the dimension (give n)");
  Mat a = j.contains("A") ? mat_from(j["A"], sub(field, "A"), n) : Mat(0, n);
  Mat c = j.contains("C") ? mat_from(j["C"], sub(field, "C"), n) : Mat(0, n);
  if (a.rows() > 0 && !j.contains("b")) throw SchemaError(sub(field, "b") + ": missing");
  if (c.rows() > 0 && !j.contains("d")) throw SchemaError(sub(field, "d") + ": missing");
  Vec b = j.contains("b") ? vec_from(j["b"], sub(field, "b"), static_cast<int>(a.rows())) : Vec::Zero(a.rows());
  Vec d = j.contains("d") ? vec_from(j["d"], sub(field, "d"), static_cast<int>(c.rows())) : Vec::Zero(c.rows());
  if (!b.allFinite() || !d.allFinite()) throw SchemaError(field + ": right-hand sides must be finite");
  return HPolyhedron(a, b, c, d);
}

int Problem::point_dim() const {
  if (kind == "lcp") return static_cast<int>(lcp_m.rows());
  if (kind == "linsys") return static_cast<int>(lin_a.rows());
  if (kind == "union") return union_n;
  if (kind == "pl_function") return function->dim();
  if (kind == "sublinear") return d->dim();
  return blackbox_dim;
}

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("problem: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("problem: expected an object");
  const json& k = need(j, "", "kind");
  if (!k.is_string()) throw SchemaError("kind: expected a string");
  Problem p;
  p.kind = k.get<std::string>();
  std::vector<std::string> allowed = {"kind", "query", "sampling"};
  if (p.kind == "lcp") {
    allowed.push_back("M");
    p.lcp_m = mat_from(need(j, "", "M"), "M", -1);
    if (p.lcp_m.rows() < 1 || p.lcp_m.rows() != p.lcp_m.cols()) throw SchemaError("M: expected a square matrix");
  } else if (p.kind == "linsys") {
    allowed.insert(allowed.end(), {"A", "K"});
    p.lin_a = mat_from(need(j, "", "A"), "A", -1);
    if (p.lin_a.rows() < 1 || p.lin_a.cols() < 1) throw SchemaError("A: expected a non-empty matrix");
    p.lin_k = hpoly_from(need(j, "", "K"), "K", static_cast<int>(p.lin_a.rows()));
  } else if (p.kind == "union") {
    allowed.insert(allowed.end(), {"n", "m", "pieces"});
    p.union_n = int_at(need(j, "", "n"), "n", 1);
    p.union_m = int_at(need(j, "", "m"), "m", 1);
    const json& pcs = need(j, "", "pieces");
    if (!pcs.is_array() || pcs.empty()) throw SchemaError("pieces: expected a non-empty array");
    for (size_t i = 0; i < pcs.size(); ++i)
      p.union_pieces.push_back(hpoly_from(pcs[i], "pieces[" + std::to_string(i) + "]", p.union_n + p.union_m));
  } else if (p.kind == "pl_function") {
    allowed.insert(allowed.end(), {"n", "cells", "x", "v", "X"});
    p.function = function_from(j);
  } else if (p.kind == "sublinear") {
    allowed.push_back("D");
    p.d = hpoly_from(need(j, "", "D"), "D", -1);
    if (p.d->empty()) throw SchemaError("D: must be nonempty");
  } else if (p.kind == "blackbox") {
    allowed.insert(allowed.end(), {"name", "n"});
    const json& nm = need(j, "", "name");
    if (!nm.is_string()) throw SchemaError("name: expected a string");
    p.blackbox = nm.get<std::string>();
    if (p.blackbox != "norm_plus_last" && p.blackbox != "neg_sqrt_product")
      throw SchemaError("name: expected norm_plus_last or neg_sqrt_product");
    p.blackbox_dim = j.contains("n") ? int_at(j["n"], "n", 1) : 2;
    if (p.blackbox == "neg_sqrt_product" && p.blackbox_dim != 2) throw SchemaError("n: neg_sqrt_product needs n = 2");
  } else {
    throw SchemaError("kind: unknown kind " + p.kind);
  }
  reject_unknown(j, "", allowed);
  if (p.kind == "pl_function") read_query(p, j, "");
  if (j.contains("query")) {
    const json& q = j["query"];
    if (!q.is_object()) throw SchemaError("query: expected an object");
    reject_unknown(q, "query", {"x", "u", "v", "X", "claim"});
    read_query(p, q, "query");
    if (q.contains("u")) {
      if (!p.is_mapping()) throw SchemaError("query.u: only mappings have a u");
      p.u = vec_from(q["u"], "query.u", u_dim(p));
    }
  }
  if (j.contains("sampling")) p.sampling = sampling_from(j["sampling"], "sampling");
  return p;
}

StratifiedMapping build_mapping(const Problem& p) {
  if (p.kind == "lcp") return build_lcp(p.lcp_m);
  if (p.kind == "linsys") return build_linear_system(p.lin_a, p.lin_k);
  if (p.kind == "union") return stratify_union(p.union_pieces, p.union_n, p.union_m);
  throw SchemaError("kind: " + p.kind + " is not a set-valued mapping");
}

BlackBoxFunction build_blackbox(const Problem& p) {
  BlackBoxFunction h;
  if (p.kind == "pl_function") {
    PLFunction f = *p.function;
    h.dim = f.dim();
    h.value = [f](const Vec& x) { return f.value(x); };
    h.in_domain = [f](const Vec& x) { return f.in_domain(x); };
    return h;
  }
  if (p.kind == "sublinear") {
    HPolyhedron d = *p.d;
    h.dim = d.dim();
    h.value = [d](const Vec& x) { return support(d, x).value; };
    return h;
  }
  if (p.kind != "blackbox") throw SchemaError("kind: " + p.kind + " is not a function");
  h.dim = p.blackbox_dim;
  if (p.blackbox == "norm_plus_last") {
    h.value = [](const Vec& x) { return x.norm() + x(x.size() - 1); };
    h.in_domain = [](const Vec& x) { return x(x.size() - 1) <= 0; };
  } else {
    h.value = [](const Vec& x) { return -std::sqrt(2.0 * x(0) * x(1)); };
    h.in_domain = [](const Vec& x) { return x(0) <= 0 && x(1) <= 0; };
  }
  return h;
}

HPolyhedron resolve_set(const Problem& p, const StratifiedMapping* s) {
  if (p.x_set) return *p.x_set;
  if (!s) return HPolyhedron::whole(p.point_dim());
  if (std::optional<HPolyhedron> dom = convex_domain(*s)) return *dom;
  throw DomainError("X: dom S could not be certified convex; give query.X explicitly");
}

Vec parse_vec(const std::string& text, const std::string& what) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw SchemaError(what + ": cannot parse '" + tok + "'");
    }
  }
  if (vals.empty()) throw SchemaError(what + ": empty vector");
  return Eigen::Map<Vec>(vals.data(), static_cast<int>(vals.size()));
}

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json to_json(const Mat& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(to_json(Vec(m.row(i).transpose())));
  return a;
}

json to_json(const HPolyhedron& p) {
  return {{"n", p.dim()}, {"A", to_json(p.A())}, {"b", to_json(p.b())}, {"C", to_json(p.C())}, {"d", to_json(p.d())}};
}

json to_json(const PolyCone& k) {
  json rays = json::array();
  for (const Vec& r : k.rays()) rays.push_back(to_json(r));
  return {{"rays", rays}, {"lineality", to_json(Mat(k.lineality().transpose()))}};
}

json to_json(const ConeUnion& u) {
  json a = json::array();
  for (const PolyCone& k : u.pieces()) a.push_back(to_json(k));
  return a;
}

json to_json(const PolySet& s) {
  json a = json::array();
  for (const VRep& v : s.gens) {
    json vs = json::array(), rs = json::array();
    for (const Vec& x : v.vertices) vs.push_back(to_json(x));
    for (const Vec& r : v.rays) rs.push_back(to_json(r));
    a.push_back({{"vertices", vs}, {"rays", rs}, {"lineality", to_json(Mat(v.lineality.transpose()))}});
  }
  return a;
}

json to_json(const PHMap& h) {
  json pcs = json::array();
  for (const LinearPiece& pc : h.pieces)
    pcs.push_back({{"param", to_json(pc.param)}, {"P", to_json(pc.p)}, {"Q", to_json(pc.q)}});
  return {{"m", h.m}, {"n", h.n}, {"pieces", pcs}};
}

json to_json(const Witness& w) {
  return {{"x", to_json(w.x)}, {"xp", to_json(w.xp)}, {"up", to_json(w.up)}, {"radius", w.radius},
          {"kappa", num(w.kappa)}};
}

json to_json(const EstimateReport& r) {
  json rows = json::array();
  for (size_t i = 0; i < r.radii.size(); ++i) rows.push_back({{"radius", r.radii[i]}, {"lower_bound", num(r.lower_bounds[i])}});
  json out = {{"per_radius", rows}, {"trend", r.trend == Trend::kBounded ? "bounded" : "unbounded"}};
  if (r.claimed) {
    out["claimed"] = num(*r.claimed);
    out["falsified"] = r.falsified;
  }
  if (r.witness) out["witness"] = to_json(*r.witness);
  if (r.dom_violation) out["dom_violation"] = to_json(*r.dom_violation);
  return out;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

std::string cell(const json& v) {
  if (v.is_string()) return escape(v.get<std::string>());
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(12);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

bool flat_object(const json& v) {
  if (!v.is_object()) return false;
  for (auto it = v.begin(); it != v.end(); ++it)
    if (it->is_object() || it->is_array()) return false;
  return true;
}

}  // namespace

std::string to_markdown(const std::string& title, const json& report) {
  std::ostringstream os;
  os << "# " << title << "\n\n";
  std::vector<std::string> rest;
  bool header = false;
  for (auto it = report.begin(); it != report.end(); ++it) {
    if (it->is_primitive()) {
      if (!header) os << "| field | value |\n|---|---|\n";
      header = true;
      os << "| " << it.key() << " | " << cell(*it) << " |\n";
    } else {
      rest.push_back(it.key());
    }
  }
  for (const std::string& key : rest) {
    const json& v = report[key];
    os << "\n## " << key << "\n\n";
    bool table = v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), flat_object);
    if (table) {
      std::vector<std::string> cols;
      for (auto it = v[0].begin(); it != v[0].end(); ++it) cols.push_back(it.key());
      os << "|";
      for (auto& c : cols) os << " " << c << " |";
      os << "\n|";
      for (size_t i = 0; i < cols.size(); ++i) os << "---|";
      os << "\n";
      for (const json& row : v) {
        os << "|";
        for (auto& c : cols) os << " " << (row.contains(c) ? cell(row[c]) : "") << " |";
        os << "\n";
      }
    } else if (flat_object(v)) {
      os << "| field | value |\n|---|---|\n";
      for (auto it = v.begin(); it != v.end(); ++it) os << "| " << it.key() << " | " << cell(*it) << " |\n";
    } else {
      os << "```json\n" << v.dump(2) << "\n```\n";
    }
  }
  return os.str();
}

}  // namespace polylip::io
