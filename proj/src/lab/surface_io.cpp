#include "flatlab/surface_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace flatlab {

namespace {

using nlohmann::json;

// Where things sit in the raw text: the line of each top-level key and of
// each element of a top-level array.
struct Layout {
  std::map<std::string, int> key_line;
  std::map<std::string, std::vector<int>> element_lines;
};

Layout scan_layout(const std::string& t) {
  Layout out;
  int line = 1, depth = 0;
  std::string key;          // last top-level key
  bool want_element = false;
  bool in_array = false;    // inside a top-level array value
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    const char c = t[i];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (want_element && c != ']') {
      out.element_lines[key].push_back(line);
      want_element = false;
    }
    if (c == '"') {
      std::string s;
      for (++i; i < n && t[i] != '"'; ++i) {
        if (t[i] == '\\' && i + 1 < n) ++i;
        s += t[i];
      }
      if (depth == 1) {
        std::size_t k = i + 1;
        while (k < n && std::isspace(static_cast<unsigned char>(t[k]))) ++k;
        if (k < n && t[k] == ':') {
          key = s;
          out.key_line[key] = line;
        }
      }
      continue;
    }
    if (c == '[' || c == '{') {
      ++depth;
      if (depth == 2 && c == '[') {
        in_array = true;
        want_element = true;
        out.element_lines[key];
      }
    } else if (c == ']' || c == '}') {
      if (depth == 2) in_array = false;
      want_element = false;
      --depth;
    } else if (c == ',' && depth == 2 && in_array) {
      want_element = true;
    }
  }
  return out;
}

int line_of_byte(const std::string& t, std::size_t byte) {
  byte = std::min(byte, t.size());
  return 1 + static_cast<int>(std::count(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

struct Parsed {
  std::vector<Polygon> polygons;
  std::vector<Gluing> gluings;
  Markings markings;
  Layout layout;
};

struct Failure {
  Diagnostic d;
};

[[noreturn]] void fail(int line, ErrorCode code, const std::string& msg) { throw Failure{{line, code, msg}}; }

// Error::what() carries a "Code: " prefix; diagnostics keep the code separately
std::string bare(const Error& e) {
  const std::string w = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

int element_line(const Layout& L, const std::string& key, std::size_t k) {
  auto it = L.element_lines.find(key);
  if (it != L.element_lines.end() && k < it->second.size()) return it->second[k];
  auto kt = L.key_line.find(key);
  return kt == L.key_line.end() ? 1 : kt->second;
}

EdgeRef parse_ref(const json& j, int line, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    fail(line, ErrorCode::ParseError, std::string(what) + " must be [polygon, index] with integers");
  return {j[0].get<int>(), j[1].get<int>()};
}

Parsed parse_structure(const std::string& text) {
  Parsed p;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1), ErrorCode::ParseError, e.what());
  }
  p.layout = scan_layout(text);
  const Layout& L = p.layout;
  if (!doc.is_object()) fail(1, ErrorCode::ParseError, "surface file must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (k != "schema" && k != "polygons" && k != "gluings" && k != "markings")
      fail(element_line(L, k, 0), ErrorCode::ParseError, "unknown key '" + k + "'");
  if (!doc.contains("schema") || !doc["schema"].is_number_integer() || doc["schema"].get<int>() != kSurfaceSchema)
    fail(L.key_line.count("schema") ? L.key_line.at("schema") : 1, ErrorCode::ParseError,
         "schema must be " + std::to_string(kSurfaceSchema));
  if (!doc.contains("polygons") || !doc["polygons"].is_array())
    fail(1, ErrorCode::ParseError, "missing array 'polygons'");
  if (!doc.contains("gluings") || !doc["gluings"].is_array()) fail(1, ErrorCode::ParseError, "missing array 'gluings'");

  const auto& polys = doc["polygons"];
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const int line = element_line(L, "polygons", k);
    if (!polys[k].is_array()) fail(line, ErrorCode::ParseError, "polygon " + std::to_string(k) + " must be a list of points");
    Polygon poly;
    for (const auto& pt : polys[k]) {
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_string() || !pt[1].is_string())
        fail(line, ErrorCode::ParseError, "polygon " + std::to_string(k) + ": points are [\"p/q\", \"r/s\"] strings");
      try {
        poly.vertices.push_back({parse_rational(pt[0].get<std::string>()), parse_rational(pt[1].get<std::string>())});
      } catch (const Error& e) {
        fail(line, ErrorCode::ParseError, "polygon " + std::to_string(k) + ": " + bare(e));
      }
    }
    p.polygons.push_back(std::move(poly));
  }
  const auto& glue = doc["gluings"];
  for (std::size_t k = 0; k < glue.size(); ++k) {
    const int line = element_line(L, "gluings", k);
    const auto& g = glue[k];
    if (!g.is_array() || g.size() != 3 || !g[2].is_number_integer())
      fail(line, ErrorCode::ParseError, "gluing " + std::to_string(k) + " must be [[poly, edge], [poly, edge], sign]");
    p.gluings.push_back({parse_ref(g[0], line, "edge"), parse_ref(g[1], line, "edge"), g[2].get<int>()});
  }
  if (doc.contains("markings")) {
    const int line = L.key_line.count("markings") ? L.key_line.at("markings") : 1;
    const auto& m = doc["markings"];
    if (!m.is_object()) fail(line, ErrorCode::ParseError, "markings must be an object");
    for (const auto& [k, v] : m.items()) {
      if (k != "edges" && k != "vertices") fail(line, ErrorCode::ParseError, "unknown marking kind '" + k + "'");
      if (!v.is_array()) fail(line, ErrorCode::ParseError, "markings." + k + " must be a list");
      for (const auto& entry : v) {
        if (!entry.is_array() || entry.size() != 2 || !entry[1].is_string())
          fail(line, ErrorCode::ParseError, "marking entries are [[poly, index], label]");
        const EdgeRef r = parse_ref(entry[0], line, "marking target");
        if (k == "edges")
          p.markings.edges[r] = entry[1].get<std::string>();
        else
          p.markings.vertices[{r.polygon, r.edge}] = entry[1].get<std::string>();
      }
    }
  }
  return p;
}

std::string ref_text(EdgeRef e) { return "[" + std::to_string(e.polygon) + ", " + std::to_string(e.edge) + "]"; }

// Gluing checks with the line of each gluing; the kernel repeats them.
void check_gluings(const Parsed& p, Diagnostics& out) {
  const int np = static_cast<int>(p.polygons.size());
  auto exists = [&](EdgeRef e) {
    return e.polygon >= 0 && e.polygon < np && e.edge >= 0 &&
           e.edge < static_cast<int>(p.polygons[e.polygon].vertices.size());
  };
  auto vec = [&](EdgeRef e) {
    const auto& v = p.polygons[e.polygon].vertices;
    return v[(e.edge + 1) % v.size()] - v[e.edge];
  };
  std::map<EdgeRef, int> used;
  for (std::size_t k = 0; k < p.gluings.size(); ++k) {
    const Gluing& g = p.gluings[k];
    const int line = element_line(p.layout, "gluings", k);
    bool ok = true;
    for (EdgeRef e : {g.a, g.b}) {
      if (!exists(e)) {
        out.items.push_back({line, ErrorCode::UnmatchedEdge, "gluing refers to missing edge " + ref_text(e)});
        ok = false;
      } else if (used.count(e)) {
        out.items.push_back({line, ErrorCode::UnmatchedEdge,
                             "edge " + ref_text(e) + " already glued on line " + std::to_string(used[e])});
        ok = false;
      } else {
        used[e] = line;
      }
    }
    if (g.sign != 1 && g.sign != -1) {
      out.items.push_back({line, ErrorCode::InvalidArgument, "gluing sign must be +1 or -1"});
      ok = false;
    }
    if (ok && g.a == g.b) {
      out.items.push_back({line, ErrorCode::UnmatchedEdge, "edge " + ref_text(g.a) + " glued to itself"});
      ok = false;
    }
    if (ok && !(vec(g.b) == Rational(-g.sign) * vec(g.a)))
      out.items.push_back({line, ErrorCode::VectorMismatch,
                           "edges " + ref_text(g.a) + " and " + ref_text(g.b) + " have incompatible vectors"});
  }
  for (int q = 0; q < np; ++q)
    for (int e = 0; e < static_cast<int>(p.polygons[q].vertices.size()); ++e)
      if (!used.count({q, e}))
        out.items.push_back(
            {element_line(p.layout, "polygons", q), ErrorCode::UnmatchedEdge, "edge " + ref_text({q, e}) + " is not glued"});
}

// kernel errors mention "polygon N" when they concern one polygon
int anchor_kernel_error(const Parsed& p, const std::string& what) {
  static const std::regex poly_re("polygon (\\d+)");
  std::smatch m;
  if (std::regex_search(what, m, poly_re)) {
    const std::size_t k = std::stoul(m[1]);
    if (k < p.polygons.size()) return element_line(p.layout, "polygons", k);
  }
  return p.layout.key_line.count("polygons") ? p.layout.key_line.at("polygons") : 1;
}

std::pair<Diagnostics, std::optional<FlatSurface>> load(const std::string& text) {
  Diagnostics out;
  Parsed p;
  try {
    p = parse_structure(text);
  } catch (const Failure& f) {
    out.items.push_back(f.d);
    return {out, std::nullopt};
  }
  check_gluings(p, out);
  if (!out.ok()) return {out, std::nullopt};
  try {
    return {out, FlatSurface::build(p.polygons, p.gluings, p.markings)};
  } catch (const Error& e) {
    out.items.push_back({anchor_kernel_error(p, e.what()), e.code(), bare(e)});
  }
  return {out, std::nullopt};
}

std::string quoted(const std::string& s) { return json(s).dump(); }

}  // namespace

std::string serialize_surface(const FlatSurface& s) {
  std::ostringstream os;
  os << "{\n  \"schema\": " << kSurfaceSchema << ",\n  \"polygons\": [\n";
  const auto& polys = s.polygons();
  for (std::size_t k = 0; k < polys.size(); ++k) {
    os << "    [";
    const auto& v = polys[k].vertices;
    for (std::size_t i = 0; i < v.size(); ++i)
      os << (i ? ", " : "") << "[" << quoted(format_rational(v[i].x)) << ", " << quoted(format_rational(v[i].y)) << "]";
    os << "]" << (k + 1 < polys.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"gluings\": [\n";
  const auto& gl = s.gluings();
  for (std::size_t k = 0; k < gl.size(); ++k)
    os << "    [" << ref_text(gl[k].a) << ", " << ref_text(gl[k].b) << ", " << gl[k].sign << "]"
       << (k + 1 < gl.size() ? "," : "") << "\n";
  os << "  ]";
  const Markings& m = s.markings();
  if (!m.edges.empty() || !m.vertices.empty()) {
    os << ",\n  \"markings\": {\n    \"edges\": [";
    bool first = true;
    for (const auto& [r, label] : m.edges) {
      os << (first ? "" : ", ") << "[" << ref_text(r) << ", " << quoted(label) << "]";
      first = false;
    }
    os << "],\n    \"vertices\": [";
    first = true;
    for (const auto& [c, label] : m.vertices) {
      os << (first ? "" : ", ") << "[" << ref_text({c.polygon, c.vertex}) << ", " << quoted(label) << "]";
      first = false;
    }
    os << "]\n  }";
  }
  os << "\n}\n";
  return os.str();
}

FlatSurface parse_surface(const std::string& text) {
  auto [diag, surface] = load(text);
  if (!surface) {
    const Diagnostic& d = diag.items.front();
    throw Error(d.code, "line " + std::to_string(d.line) + ": " + d.message);
  }
  return *surface;
}

Diagnostics validate_surface_text(const std::string& text) { return load(text).first; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Diagnostics validate_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    return Diagnostics{{{0, ErrorCode::ParseError, bare(e)}}};
  }
  return validate_surface_text(text);
}

}  // namespace flatlab

namespace flatlab {

namespace {

const char* side_name(BranchSide s) {
  switch (s) {
    case BranchSide::Bottom: return "bottom";
    case BranchSide::Right: return "right";
    case BranchSide::Top: return "top";
    case BranchSide::Left: return "left";
  }
  return "?";
}

BranchSide side_of(const nlohmann::json& j) {
  const std::string s = j.get<std::string>();
  if (s == "bottom") return BranchSide::Bottom;
  if (s == "right") return BranchSide::Right;
  if (s == "top") return BranchSide::Top;
  if (s == "left") return BranchSide::Left;
  throw Error(ErrorCode::ParseError, "unknown branch side '" + s + "'");
}

Rational rat(const nlohmann::json& j) { return parse_rational(j.get<std::string>()); }

}  // namespace

std::string serialize_track(const TrainTrackData& t) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["branches"] = ordered_json::array();
  for (const auto& b : t.branches)
    out["branches"].push_back({{"weight", format_rational(b.weight)},
                               {"height", format_rational(b.height)},
                               {"kind", b.kind == BranchKind::Annulus ? "annulus" : "rectangle"}});
  out["gluings"] = ordered_json::array();
  for (const auto& g : t.gluings)
    out["gluings"].push_back({{"a", {g.branch_a, side_name(g.side_a), format_rational(g.offset_a)}},
                              {"b", {g.branch_b, side_name(g.side_b), format_rational(g.offset_b)}},
                              {"length", format_rational(g.length)}});
  out["pieces"] = ordered_json::array();
  for (const auto& p : t.pieces) {
    ordered_json sides = ordered_json::array();
    for (const auto& side : p.sides) {
      ordered_json run = ordered_json::array();
      for (const auto& hb : side) run.push_back({hb.branch, side_name(hb.side)});
      sides.push_back(run);
    }
    out["pieces"].push_back({{"sides", sides}, {"residue", format_rational(p.residue)}});
  }
  out["min_height"] = format_rational(t.min_height);
  return out.dump(2) + "\n";
}

TrainTrackData parse_track(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TrainTrackData t;
    for (const auto& b : j.at("branches")) {
      const std::string kind = b.value("kind", "rectangle");
      if (kind != "rectangle" && kind != "annulus") throw Error(ErrorCode::ParseError, "unknown branch kind '" + kind + "'");
      t.branches.push_back({rat(b.at("weight")), rat(b.at("height")), kind == "annulus" ? BranchKind::Annulus : BranchKind::Rectangle});
    }
    for (const auto& g : j.value("gluings", nlohmann::json::array())) {
      const auto &a = g.at("a"), &b = g.at("b");
      t.gluings.push_back({a.at(0).get<int>(), side_of(a.at(1)), rat(a.at(2)), b.at(0).get<int>(), side_of(b.at(1)),
                           rat(b.at(2)), rat(g.at("length"))});
    }
    for (const auto& p : j.value("pieces", nlohmann::json::array())) {
      TrackPiece piece;
      for (const auto& side : p.at("sides")) {
        std::vector<HalfBranch> run;
        for (const auto& hb : side) run.push_back({hb.at(0).get<int>(), side_of(hb.at(1))});
        piece.sides.push_back(run);
      }
      piece.residue = rat(p.at("residue"));
      t.pieces.push_back(piece);
    }
    if (j.contains("min_height")) t.min_height = rat(j.at("min_height"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("track file: ") + e.what());
  }
}

}  // namespace flatlab
