#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polylip/coderivative.hpp"
#include "polylip/functions.hpp"
#include "polylip/oracle.hpp"

namespace polylip::io {

using json = nlohmann::json;

/// Parsed problem file. Exactly one payload group is filled, by kind.
struct Problem {
  std::string kind;  // lcp, linsys, union, pl_function, sublinear, blackbox

  Mat lcp_m;
  Mat lin_a;
  HPolyhedron lin_k;
  int union_n = 0, union_m = 0;
  std::vector<HPolyhedron> union_pieces;
  std::optional<PLFunction> function;
  std::optional<HPolyhedron> d;
  std::string blackbox;
  int blackbox_dim = 0;

  std::optional<Vec> x, u, v;
  // Absent: dom S for mappings, the whole space otherwise.
  std::optional<HPolyhedron> x_set;
  std::optional<double> claim;
  SampleConfig sampling;

  bool is_mapping() const { return kind == "lcp" || kind == "linsys" || kind == "union"; }
  // Ambient dimension of the point x.
  int point_dim() const;
};

Problem parse_problem(const std::string& text);

StratifiedMapping build_mapping(const Problem& p);
BlackBoxFunction build_blackbox(const Problem& p);
// The set X after defaults (needs the mapping for dom S).
HPolyhedron resolve_set(const Problem& p, const StratifiedMapping* s);

// Comma separated numbers, e.g. "1,-2.5".
Vec parse_vec(const std::string& text, const std::string& what);

Mat mat_from(const json& j, const std::string& field, int cols);
Vec vec_from(const json& j, const std::string& field, int size);
HPolyhedron hpoly_from(const json& j, const std::string& field, int n);
void reject_unknown(const json& j, const std::string& field, const std::vector<std::string>& allowed);

json num(double v);
json to_json(const Vec& v);
json to_json(const Mat& m);
json to_json(const HPolyhedron& p);
json to_json(const PolyCone& k);
json to_json(const ConeUnion& u);
json to_json(const PolySet& s);
json to_json(const PHMap& h);
json to_json(const EstimateReport& r);
json to_json(const Witness& w);

// Markdown rendering of a flat report: scalars as a table, arrays of flat
// objects as tables, anything else as a fenced block.
std::string to_markdown(const std::string& title, const json& report);

}  // namespace polylip::io
