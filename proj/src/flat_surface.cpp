#include "flatlab/flat_surface.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

namespace flatlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnmatchedEdge: return "UnmatchedEdge";
    case ErrorCode::VectorMismatch: return "VectorMismatch";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::SimplePole: return "SimplePole";
    case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::NonRationalSurface: return "NonRationalSurface";
    case ErrorCode::FeelersCollide: return "FeelersCollide";
    case ErrorCode::CollarOverlap: return "CollarOverlap";
    case ErrorCode::HTooSmall: return "HTooSmall";
    case ErrorCode::UnattachableSide: return "UnattachableSide";
    case ErrorCode::LocusNotVertical: return "LocusNotVertical";
    case ErrorCode::LocusNotEmbedded: return "LocusNotEmbedded";
    case ErrorCode::ResidueMismatch: return "ResidueMismatch";
    case ErrorCode::InvalidTrack: return "InvalidTrack";
    case ErrorCode::DegenerateJacobian: return "DegenerateJacobian";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DTooSmall: return "DTooSmall";
    case ErrorCode::DerivativeNotNormalized: return "DerivativeNotNormalized";
    case ErrorCode::NotGoodBoundary: return "NotGoodBoundary";
    case ErrorCode::BoundaryNotPreserved: return "BoundaryNotPreserved";
    case ErrorCode::ModulusTooSmall: return "ModulusTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownExperiment: return "UnknownExperiment";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Unrenderable: return "Unrenderable";
  }
  return "Unknown";
}

namespace {

std::string ref_str(EdgeRef e) {
  return "[" + std::to_string(e.polygon) + "," + std::to_string(e.edge) + "]";
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c) { return sgn(cross(b - a, c - a)); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return cmp(p.x, std::min(a.x, b.x)) >= 0 && cmp(p.x, std::max(a.x, b.x)) <= 0 &&
         cmp(p.y, std::min(a.y, b.y)) >= 0 && cmp(p.y, std::max(a.y, b.y)) <= 0;
}

bool segments_touch(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0) {
    if (o1 != 0 || o2 != 0) return true;
  }
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

void check_polygon(const Polygon& poly, int index) {
  const auto& v = poly.vertices;
  const int n = static_cast<int>(v.size());
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidPolygon, "polygon " + std::to_string(index) + ": " + why);
  };
  if (n < 3) fail("fewer than three vertices");
  Rational twice_area = 0;
  for (int i = 0; i < n; ++i) twice_area += cross(v[i], v[(i + 1) % n]);
  if (twice_area <= 0) fail("not positively oriented");
  for (int i = 0; i < n; ++i) {
    const Vec2 out = v[(i + 1) % n] - v[i];
    const Vec2 back = v[(i + n - 1) % n] - v[i];
    if (out.x == 0 && out.y == 0) fail("zero-length edge " + std::to_string(i));
    if (cross(out, back) == 0 && dot(out, back) > 0) fail("degenerate corner " + std::to_string(i));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_touch(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        fail("edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
  }
}

double corner_angle(const Vec2& out, const Vec2& back) {
  double a = std::atan2(cross(out, back).get_d(), dot(out, back).get_d());
  if (a <= 0) a += 2 * std::numbers::pi;
  return a;
}

}  // namespace

FlatSurface FlatSurface::build(std::vector<Polygon> polygons, std::vector<Gluing> gluings,
                               Markings markings) {
  FlatSurface s;
  s.polygons_ = std::move(polygons);
  s.gluings_ = std::move(gluings);
  s.markings_ = std::move(markings);
  for (auto& poly : s.polygons_)
    for (auto& p : poly.vertices) {
      p.x.canonicalize();
      p.y.canonicalize();
    }
  s.resolve();
  return s;
}

FlatSurface build_surface(std::vector<Polygon> polygons, std::vector<Gluing> gluings,
                          Markings markings) {
  return FlatSurface::build(std::move(polygons), std::move(gluings), std::move(markings));
}

Vec2 FlatSurface::vertex(Corner c) const { return polygons_[c.polygon].vertices[c.vertex]; }

Vec2 FlatSurface::edge_start(EdgeRef e) const { return polygons_[e.polygon].vertices[e.edge]; }

Vec2 FlatSurface::edge_end(EdgeRef e) const {
  const auto& v = polygons_[e.polygon].vertices;
  return v[(e.edge + 1) % v.size()];
}

int FlatSurface::vertex_class_of(Corner c) const {
  return class_of_corner_[polygon_offset_[c.polygon] + c.vertex];
}

int FlatSurface::gluing_index(EdgeRef e) const {
  return gluing_of_edge_[polygon_offset_[e.polygon] + e.edge];
}

EdgeMap FlatSurface::edge_map(EdgeRef e) const {
  const Gluing& g = gluings_[gluing_index(e)];
  const bool forward = g.a == e;
  EdgeMap m;
  m.target = forward ? g.b : g.a;
  m.sign = g.sign;
  // start of e meets end of target
  const Vec2 p0 = edge_start(e);
  const Vec2 q1 = edge_end(m.target);
  m.offset = g.sign == 1 ? q1 - p0 : q1 + p0;
  return m;
}

void FlatSurface::resolve() {
  const int np = static_cast<int>(polygons_.size());
  if (np == 0) throw Error(ErrorCode::InvalidPolygon, "surface has no polygons");
  polygon_offset_.assign(np + 1, 0);
  for (int p = 0; p < np; ++p) {
    check_polygon(polygons_[p], p);
    polygon_offset_[p + 1] = polygon_offset_[p] + edge_count(p);
  }
  const int total = polygon_offset_[np];

  gluing_of_edge_.assign(total, -1);
  auto flat = [&](EdgeRef e) -> int {
    if (e.polygon < 0 || e.polygon >= np || e.edge < 0 || e.edge >= edge_count(e.polygon))
      throw Error(ErrorCode::UnmatchedEdge, "gluing refers to missing edge " + ref_str(e));
    return polygon_offset_[e.polygon] + e.edge;
  };
  for (int gi = 0; gi < static_cast<int>(gluings_.size()); ++gi) {
    const Gluing& g = gluings_[gi];
    if (g.sign != 1 && g.sign != -1)
      throw Error(ErrorCode::InvalidArgument, "gluing sign must be +1 or -1");
    if (g.a == g.b) throw Error(ErrorCode::UnmatchedEdge, "edge " + ref_str(g.a) + " glued to itself");
    for (EdgeRef e : {g.a, g.b}) {
      int f = flat(e);
      if (gluing_of_edge_[f] != -1)
        throw Error(ErrorCode::UnmatchedEdge, "edge " + ref_str(e) + " appears in two gluings");
      gluing_of_edge_[f] = gi;
    }
    const Vec2 va = edge_vector(g.a), vb = edge_vector(g.b);
    if (!(vb == Rational(-g.sign) * va))
      throw Error(ErrorCode::VectorMismatch,
                  "edges " + ref_str(g.a) + " and " + ref_str(g.b) + " have incompatible vectors");
  }
  for (int p = 0; p < np; ++p)
    for (int e = 0; e < edge_count(p); ++e)
      if (gluing_of_edge_[polygon_offset_[p] + e] == -1)
        throw Error(ErrorCode::UnmatchedEdge, "edge " + ref_str({p, e}) + " is not glued");

  // connectivity of the polygon adjacency graph
  std::vector<int> parent(np);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : gluings_) parent[find(g.a.polygon)] = find(g.b.polygon);
  for (int p = 1; p < np; ++p)
    if (find(p) != find(0)) throw Error(ErrorCode::Disconnected, "polygon " + std::to_string(p) + " is unreachable");

  // vertex classes: walk counterclockwise around each point
  class_of_corner_.assign(total, -1);
  classes_.clear();
  for (int p = 0; p < np; ++p) {
    for (int v = 0; v < edge_count(p); ++v) {
      if (class_of_corner_[polygon_offset_[p] + v] != -1) continue;
      VertexClass vc;
      const int id = static_cast<int>(classes_.size());
      double angle = 0;
      int holonomy = 1;
      Corner c{p, v};
      while (class_of_corner_[polygon_offset_[c.polygon] + c.vertex] == -1) {
        class_of_corner_[polygon_offset_[c.polygon] + c.vertex] = id;
        vc.corners.push_back(c);
        const int n = edge_count(c.polygon);
        const Vec2 here = vertex(c);
        angle += corner_angle(vertex({c.polygon, (c.vertex + 1) % n}) - here,
                              vertex({c.polygon, (c.vertex + n - 1) % n}) - here);
        // the incoming edge continues the walk on the other side of its gluing
        const EdgeRef incoming{c.polygon, (c.vertex + n - 1) % n};
        const EdgeMap m = edge_map(incoming);
        holonomy *= m.sign;
        c = Corner{m.target.polygon, m.target.edge};
      }
      if (!(c == vc.corners.front()))
        throw Error(ErrorCode::InvalidPolygon, "corner walk did not close up");
      const int k = static_cast<int>(std::lround(angle / std::numbers::pi));
      const bool parity_ok = (k % 2 == 0) == (holonomy == 1);
      if (k < 1 || std::abs(angle - k * std::numbers::pi) > 1e-6 || !parity_ok)
        throw Error(ErrorCode::InvalidPolygon, "cone angle is not a multiple of pi");
      if (k == 1)
        throw Error(ErrorCode::SimplePole, "vertex class " + std::to_string(id) + " has cone angle pi");
      vc.angle_pi = k;
      classes_.push_back(std::move(vc));
    }
  }
  const int g2 = 2 - (static_cast<int>(classes_.size()) - static_cast<int>(gluings_.size()) + np);
  if (g2 % 2 != 0) throw Error(ErrorCode::InvalidPolygon, "odd Euler characteristic");
}

std::vector<ConePoint> cone_data(const FlatSurface& s) {
  std::vector<ConePoint> out;
  const auto& classes = s.vertex_classes();
  for (int i = 0; i < static_cast<int>(classes.size()); ++i)
    if (classes[i].angle_pi != 2) out.push_back({i, classes[i].angle_pi, classes[i].angle_pi - 2});
  return out;
}

int genus(const FlatSurface& s) {
  const int chi = static_cast<int>(s.vertex_classes().size()) - static_cast<int>(s.gluings().size()) +
                  static_cast<int>(s.polygons().size());
  return (2 - chi) / 2;
}

Rational area(const FlatSurface& s) {
  Rational twice = 0;
  for (const auto& poly : s.polygons()) {
    const auto& v = poly.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  }
  return twice / 2;
}

}  // namespace flatlab
