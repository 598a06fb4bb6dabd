#pragma once

// Text formats (elements, family indices and colours are 1-based on disk):
//   family:     "n=<int>", then one set per line as "1,3,4" or "-" for ∅
//   system:     "ell=<int>", lines "k k' m", then ell family blocks each
//               preceded by a "---" line
//   coloring:   "n=<int> arity=<int> ell=<int>", then "e1,...,er -> c" per edge
//               in lex edge order
//   tournament: "ell=<int>", then "k -> k'" per edge
//   centers:    "ell=<int>", then one set per line (same syntax as family sets)
// Blank lines and lines starting with '#' are ignored.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "overlap/coloring.hpp"
#include "overlap/constructions.hpp"
#include "overlap/core.hpp"
#include "overlap/tournament.hpp"

namespace overlap::io {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

inline long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, "expected an integer for " + what + ", got '" + s + "'");
  }
}

inline long parse_key(const std::string& line, const std::string& key) {
  const std::string prefix = key + "=";
  if (line.rfind(prefix, 0) != 0) throw Error(ErrorCode::parse_error, "expected '" + prefix + "...', got '" + line + "'");
  return parse_int(trim(line.substr(prefix.size())), key);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace detail

inline SetWord parse_set(const std::string& text, int n) {
  const std::string t = detail::trim(text);
  if (t == "-") return 0;
  if (t.empty()) throw Error(ErrorCode::parse_error, "empty set text; write '-' for the empty set");
  SetWord s = 0;
  long prev = 0;
  for (const auto& tok : detail::split(t, ',')) {
    const long e = detail::parse_int(tok, "set element");
    if (e < 1 || e > n) throw Error(ErrorCode::parse_error, "element " + tok + " outside [1, " + std::to_string(n) + "]");
    if (e <= prev) throw Error(ErrorCode::parse_error, "set elements must be strictly increasing: '" + t + "'");
    prev = e;
    s |= SetWord{1} << (e - 1);
  }
  return s;
}

inline std::string format_set_line(SetWord s) {
  if (s == 0) return "-";
  std::string out;
  for (int e : elements_of(s)) {
    if (!out.empty()) out += ",";
    out += std::to_string(e);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// family

inline Family parse_family_lines(const std::vector<std::string>& lines) {
  if (lines.empty()) throw Error(ErrorCode::parse_error, "empty family");
  const long n = detail::parse_key(lines[0], "n");
  if (n < 0 || n > kMaxGround) throw Error(ErrorCode::parse_error, "n outside [0, 62]");
  std::vector<SetWord> sets;
  for (std::size_t i = 1; i < lines.size(); ++i) sets.push_back(parse_set(lines[i], static_cast<int>(n)));
  return Family(GroundSet(static_cast<int>(n)), std::move(sets));
}

inline Family parse_family(const std::string& text) { return parse_family_lines(detail::content_lines(text)); }

inline std::string format_family(const Family& f) {
  std::string out = "n=" + std::to_string(f.ground().n()) + "\n";
  for (SetWord s : f) out += format_set_line(s) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// spec header shared by the system format and `formula --spec`

inline OverlapSpec parse_spec_lines(const std::vector<std::string>& lines, std::size_t& pos) {
  if (pos >= lines.size()) throw Error(ErrorCode::parse_error, "missing ell line");
  const long ell = detail::parse_key(lines[pos++], "ell");
  if (ell < 1 || ell > 64) throw Error(ErrorCode::parse_error, "ell outside [1, 64]");
  OverlapSpec spec(static_cast<int>(ell));
  std::map<std::pair<int, int>, bool> seen;
  if (pos < lines.size() && lines[pos] == "m") ++pos;
  while (pos < lines.size() && lines[pos] != "---") {
    std::istringstream in(lines[pos]);
    std::string a, b, m, extra;
    if (!(in >> a >> b >> m) || (in >> extra)) throw Error(ErrorCode::parse_error, "expected 'k k' m', got '" + lines[pos] + "'");
    const long ka = detail::parse_int(a, "k"), kb = detail::parse_int(b, "k'"), mv = detail::parse_int(m, "m");
    if (ka < 1 || kb < 1 || ka > ell || kb > ell || ka == kb)
      throw Error(ErrorCode::parse_error, "invalid pair in '" + lines[pos] + "'");
    if (mv < 0) throw Error(ErrorCode::parse_error, "negative overlap bound");
    const std::pair<int, int> key = std::minmax(static_cast<int>(ka - 1), static_cast<int>(kb - 1));
    if (seen[key]) throw Error(ErrorCode::parse_error, "duplicate pair in '" + lines[pos] + "'");
    seen[key] = true;
    spec.set(key.first, key.second, static_cast<int>(mv));
    ++pos;
  }
  if (seen.size() != spec.pairs().size())
    throw Error(ErrorCode::parse_error, "the m block must list all C(ell, 2) pairs");
  return spec;
}

inline OverlapSpec parse_spec(const std::string& text) {
  const auto lines = detail::content_lines(text);
  std::size_t pos = 0;
  auto spec = parse_spec_lines(lines, pos);
  if (pos != lines.size()) throw Error(ErrorCode::parse_error, "unexpected content after the m block");
  return spec;
}

inline std::string format_spec(const OverlapSpec& spec) {
  std::string out = "ell=" + std::to_string(spec.ell()) + "\n";
  for (auto [a, b] : spec.pairs())
    out += std::to_string(a + 1) + " " + std::to_string(b + 1) + " " + std::to_string(spec.at(a, b)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// system

inline FamilySystem parse_system(const std::string& text) {
  const auto lines = detail::content_lines(text);
  std::size_t pos = 0;
  OverlapSpec spec = parse_spec_lines(lines, pos);
  std::vector<Family> fams;
  while (pos < lines.size()) {
    ++pos;  // "---"
    std::vector<std::string> block;
    while (pos < lines.size() && lines[pos] != "---") block.push_back(lines[pos++]);
    fams.push_back(parse_family_lines(block));
  }
  if (static_cast<int>(fams.size()) != spec.ell())
    throw Error(ErrorCode::parse_error, "expected " + std::to_string(spec.ell()) + " family blocks, got " +
                                            std::to_string(fams.size()));
  const GroundSet g = fams.front().ground();
  for (const auto& f : fams)
    if (!(f.ground() == g)) throw Error(ErrorCode::parse_error, "family blocks disagree on n");
  return FamilySystem(g, std::move(fams), std::move(spec));
}

inline std::string format_system(const FamilySystem& sys) {
  std::string out = format_spec(sys.spec);
  for (const auto& f : sys.families) out += "---\n" + format_family(f);
  return out;
}

// ---------------------------------------------------------------------------
// coloring

inline EdgeColoring parse_coloring(const std::string& text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::parse_error, "empty coloring");
  std::istringstream head(lines[0]);
  std::string a, b, c;
  head >> a >> b >> c;
  const long n = detail::parse_key(a, "n"), arity = detail::parse_key(b, "arity"), ell = detail::parse_key(c, "ell");
  if (n < 1 || n > kColoringGroundCap || arity < 1 || arity > n || ell < 1 || ell > 255)
    throw Error(ErrorCode::parse_error, "coloring header out of range");
  EdgeColoring col(GroundSet(static_cast<int>(n)), static_cast<int>(arity), static_cast<int>(ell));
  if (lines.size() - 1 != col.edge_count())
    throw Error(ErrorCode::parse_error, "expected " + std::to_string(col.edge_count()) + " edge lines");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto arrow = lines[i].find("->");
    if (arrow == std::string::npos) throw Error(ErrorCode::parse_error, "expected 'e1,...,er -> c': " + lines[i]);
    const SetWord e = parse_set(lines[i].substr(0, arrow), static_cast<int>(n));
    if (e != col.edges()[i - 1]) throw Error(ErrorCode::parse_error, "edges must be listed in lex order: " + lines[i]);
    const long colour = detail::parse_int(detail::trim(lines[i].substr(arrow + 2)), "colour");
    if (colour < 1 || colour > ell) throw Error(ErrorCode::parse_error, "colour out of range: " + lines[i]);
    col.set_color(i - 1, static_cast<int>(colour - 1));
  }
  return col;
}

inline std::string format_coloring(const EdgeColoring& c) {
  std::string out = "n=" + std::to_string(c.n()) + " arity=" + std::to_string(c.arity()) +
                    " ell=" + std::to_string(c.ell()) + "\n";
  for (std::size_t i = 0; i < c.edge_count(); ++i)
    out += format_set_line(c.edges()[i]) + " -> " + std::to_string(c.colors()[i] + 1) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// tournament

inline OrientedGraph parse_tournament(const std::string& text) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::parse_error, "empty tournament");
  const long ell = detail::parse_key(lines[0], "ell");
  if (ell < 1 || ell > 64) throw Error(ErrorCode::parse_error, "ell outside [1, 64]");
  OrientedGraph t(static_cast<int>(ell));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto arrow = lines[i].find("->");
    if (arrow == std::string::npos) throw Error(ErrorCode::parse_error, "expected 'k -> k'': " + lines[i]);
    const long a = detail::parse_int(detail::trim(lines[i].substr(0, arrow)), "k");
    const long b = detail::parse_int(detail::trim(lines[i].substr(arrow + 2)), "k'");
    if (a < 1 || b < 1 || a > ell || b > ell || a == b) throw Error(ErrorCode::parse_error, "invalid edge: " + lines[i]);
    if (t.adjacent(static_cast<int>(a - 1), static_cast<int>(b - 1)))
      throw Error(ErrorCode::parse_error, "pair oriented twice: " + lines[i]);
    t.add_edge(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  return t;
}

inline std::string format_tournament(const OrientedGraph& t) {
  std::string out = "ell=" + std::to_string(t.ell()) + "\n";
  for (auto [a, b] : t.edges()) out += std::to_string(a + 1) + " -> " + std::to_string(b + 1) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// centers

inline std::vector<SetWord> parse_centers(const std::string& text, int n) {
  const auto lines = detail::content_lines(text);
  if (lines.empty()) throw Error(ErrorCode::parse_error, "empty centers file");
  const long ell = detail::parse_key(lines[0], "ell");
  if (static_cast<long>(lines.size()) - 1 != ell)
    throw Error(ErrorCode::parse_error, "expected " + std::to_string(ell) + " center lines");
  std::vector<SetWord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) out.push_back(parse_set(lines[i], n));
  return out;
}

inline std::string format_centers(const std::vector<SetWord>& centers) {
  std::string out = "ell=" + std::to_string(centers.size()) + "\n";
  for (SetWord c : centers) out += format_set_line(c) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// plans (JSON):
//   {"n": 6, "ell": 3, "m": [[1,2,1], [1,3,1], [2,3,1]],
//    "blocks": [{"edge": [1,2], "elements": [1,2]}, ...],
//    "w": [[...], [...], [...]]}          // "w" only for ell = 5 plans

using nlohmann::json;

inline std::vector<int> to_elements(SetWord s) { return elements_of(s); }

inline SetWord from_elements(const json& arr, int n) {
  SetWord s = 0;
  for (const auto& e : arr) {
    const int v = e.get<int>();
    if (v < 1 || v > n) throw Error(ErrorCode::parse_error, "plan element outside [1, n]");
    if (s >> (v - 1) & 1u) throw Error(ErrorCode::parse_error, "duplicate plan element");
    s |= SetWord{1} << (v - 1);
  }
  return s;
}

inline OctopusPlan parse_octopus_plan(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int ell = j.at("ell").get<int>();
    OctopusPlan plan{GroundSet(n), OverlapSpec(ell), OrientedGraph(ell), {}};
    for (const auto& row : j.at("m")) {
      const int a = row.at(0).get<int>() - 1, b = row.at(1).get<int>() - 1;
      plan.spec.set(a, b, row.at(2).get<int>());
    }
    for (const auto& blk : j.at("blocks")) {
      const int a = blk.at("edge").at(0).get<int>() - 1, b = blk.at("edge").at(1).get<int>() - 1;
      plan.graph.add_edge(a, b);
      plan.blocks[{a, b}] = from_elements(blk.at("elements"), n);
    }
    plan.validate();
    return plan;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("plan: ") + e.what());
  }
}

inline json plan_to_json(const OctopusPlan& plan) {
  json j;
  j["n"] = plan.ground.n();
  j["ell"] = plan.spec.ell();
  j["m"] = json::array();
  for (auto [a, b] : plan.spec.pairs()) j["m"].push_back({a + 1, b + 1, plan.spec.at(a, b)});
  j["blocks"] = json::array();
  for (const auto& [e, s] : plan.blocks)
    j["blocks"].push_back({{"edge", {e.first + 1, e.second + 1}}, {"elements", to_elements(s)}});
  return j;
}

inline L5Plan parse_l5_plan(const json& j) {
  const OctopusPlan base = parse_octopus_plan(j);
  require(base.graph == t5(), ErrorCode::parse_error, "an ell=5 plan must use the fixed tournament");
  L5Plan plan{base.ground, base.blocks, {}};
  try {
    const auto& w = j.at("w");
    if (w.size() != 3) throw Error(ErrorCode::parse_error, "w must hold three lists");
    for (int i = 0; i < 3; ++i) plan.w[i] = from_elements(w.at(i), base.ground.n());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("plan: ") + e.what());
  }
  plan.validate();
  return plan;
}

inline json plan_to_json(const L5Plan& plan) {
  json j = plan_to_json(plan.as_octopus());
  j["w"] = {to_elements(plan.w[0]), to_elements(plan.w[1]), to_elements(plan.w[2])};
  return j;
}

}  // namespace overlap::io
