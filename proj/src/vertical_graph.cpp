#include "flatlab/vertical_graph.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace flatlab {

namespace {

Vec2 out_dir(const FlatSurface& s, Corner c) {
  const int n = s.edge_count(c.polygon);
  return s.vertex({c.polygon, (c.vertex + 1) % n}) - s.vertex(c);
}

Vec2 back_dir(const FlatSurface& s, Corner c) {
  const int n = s.edge_count(c.polygon);
  return s.vertex({c.polygon, (c.vertex + n - 1) % n}) - s.vertex(c);
}

bool is_vertical(const Vec2& d, int dy) { return d.x == 0 && sgn(d.y) == dy; }

Vec2 up(int dy) { return Vec2{0, dy}; }

struct Tracer {
  const FlatSurface& s;
  // prong table of each cone class: (corner, dy) in ccw order
  std::map<int, std::vector<std::pair<Corner, int>>> prongs;

  explicit Tracer(const FlatSurface& surface) : s(surface) {
    const auto& classes = s.vertex_classes();
    for (int id = 0; id < static_cast<int>(classes.size()); ++id) {
      if (classes[id].angle_pi == 2) continue;
      auto& list = prongs[id];
      for (Corner c : classes[id].corners) {
        const Vec2 out = out_dir(s, c), back = back_dir(s, c);
        std::vector<int> here;
        for (int dy : {1, -1})
          if (in_sector(up(dy), out, back)) here.push_back(dy);
        auto rel = [&](int dy) { return Vec2{dot(out, up(dy)), cross(out, up(dy))}; };
        std::sort(here.begin(), here.end(), [&](int a, int b) { return compare_angle(rel(a), rel(b)) < 0; });
        for (int dy : here) list.emplace_back(c, dy);
      }
      if (static_cast<int>(list.size()) != classes[id].angle_pi)
        throw Error(ErrorCode::InvalidPolygon, "prong count does not match the cone angle");
    }
  }

  bool is_cone(Corner c) const { return s.vertex_classes()[s.vertex_class_of(c)].angle_pi != 2; }

  // Crosses the incoming edge of c, moving counterclockwise to the next corner.
  Corner next_corner(Corner c, int& dy) const {
    const int n = s.edge_count(c.polygon);
    const EdgeMap m = s.edge_map({c.polygon, (c.vertex + n - 1) % n});
    dy *= m.sign;
    return {m.target.polygon, m.target.edge};
  }

  Prong find_prong(Corner c, int dy) const {
    if (is_vertical(back_dir(s, c), dy)) c = next_corner(c, dy);
    const int id = s.vertex_class_of(c);
    const auto& list = prongs.at(id);
    for (int i = 0; i < static_cast<int>(list.size()); ++i)
      if (list[i].first == c && list[i].second == dy) return {id, i};
    throw Error(ErrorCode::InvalidPolygon, "arrival direction is not a prong");
  }

  // Leaves a flat point straight on after arriving with vertical direction dy.
  std::pair<Corner, int> continue_through(Corner c, int dy) const {
    const Vec2 rev = up(-dy);
    if (!is_vertical(back_dir(s, c), -dy) && in_sector(up(dy), rev, back_dir(s, c))) return {c, dy};
    const std::size_t limit = s.vertex_classes()[s.vertex_class_of(c)].corners.size() + 1;
    for (std::size_t step = 0; step < limit; ++step) {
      c = next_corner(c, dy);
      if (in_sector(up(dy), out_dir(s, c), back_dir(s, c))) return {c, dy};
    }
    throw Error(ErrorCode::InvalidPolygon, "no straight continuation at a flat vertex");
  }

  struct Result {
    bool hit = false;
    Prong end;
    Rational length;
    std::vector<TraceSegment> path;
  };

  // Follows the vertical trajectory leaving corner c in direction dy for at
  // most `budget`; stops early on reaching a cone point.
  Result trace(Corner c, int dy, const Rational& budget) const {
    Result r;
    r.length = 0;
    int polygon = c.polygon;
    Vec2 z = s.vertex(c);
    int exclude = -1;
    bool at_vertex = true;
    auto add = [&](int poly, const Vec2& from, const Rational& dist, int d, int edge) {
      r.path.push_back({poly, from.x, from.y, from.y + d * dist, edge});
      r.length += dist;
    };
    for (;;) {
      const Rational remaining = budget - r.length;
      if (at_vertex) {
        const Vec2 out = out_dir(s, c);
        if (is_vertical(out, dy)) {
          const Rational len = abs(out.y);
          if (len > remaining) {
            if (remaining > 0) add(c.polygon, z, remaining, dy, c.vertex);
            return r;
          }
          add(c.polygon, z, len, dy, c.vertex);
          const Corner arrive{c.polygon, (c.vertex + 1) % s.edge_count(c.polygon)};
          if (is_cone(arrive)) {
            r.hit = true;
            r.end = find_prong(arrive, -dy);
            return r;
          }
          std::tie(c, dy) = continue_through(arrive, dy);
          polygon = c.polygon;
          z = s.vertex(c);
          continue;
        }
        polygon = c.polygon;
        exclude = -1;
      }
      // straight ray through the interior of `polygon`
      const auto& v = s.polygons()[polygon].vertices;
      const int n = static_cast<int>(v.size());
      std::optional<Rational> best;
      int best_vertex = -1, best_edge = -1;
      for (int w = 0; w < n; ++w) {
        if (v[w].x != z.x) continue;
        const Rational d = (v[w].y - z.y) * dy;
        if (d > 0 && (!best || d < *best)) best = d, best_vertex = w, best_edge = -1;
      }
      for (int e = 0; e < n; ++e) {
        if (e == exclude) continue;
        const Vec2& p0 = v[e];
        const Vec2& p1 = v[(e + 1) % n];
        if (p0.x == p1.x) continue;
        if (!(cmp(z.x, std::min(p0.x, p1.x)) > 0 && cmp(z.x, std::max(p0.x, p1.x)) < 0)) continue;
        const Rational y = p0.y + (z.x - p0.x) * (p1.y - p0.y) / (p1.x - p0.x);
        const Rational d = (y - z.y) * dy;
        if (d > 0 && (!best || d < *best)) best = d, best_vertex = -1, best_edge = e;
      }
      if (!best) throw Error(ErrorCode::InvalidPolygon, "vertical ray leaves a polygon without an exit");
      if (*best > remaining) {
        if (remaining > 0) add(polygon, z, remaining, dy, -1);
        return r;
      }
      add(polygon, z, *best, dy, -1);
      if (best_vertex >= 0) {
        const Corner arrive{polygon, best_vertex};
        if (is_cone(arrive)) {
          r.hit = true;
          r.end = find_prong(arrive, -dy);
          return r;
        }
        std::tie(c, dy) = continue_through(arrive, dy);
        z = s.vertex(c);
        at_vertex = true;
        continue;
      }
      const Vec2 hit{z.x, z.y + dy * *best};
      const EdgeMap m = s.edge_map({polygon, best_edge});
      z = m.apply(hit);
      dy *= m.sign;
      polygon = m.target.polygon;
      exclude = m.target.edge;
      at_vertex = false;
    }
  }

  Result trace_prong(Prong p, const Rational& budget) const {
    const auto& [corner, dy] = prongs.at(p.vertex)[p.index];
    return trace(corner, dy, budget);
  }
};

std::vector<TraceSegment> reversed(std::vector<TraceSegment> path) {
  std::reverse(path.begin(), path.end());
  for (auto& seg : path) std::swap(seg.y_start, seg.y_end);
  return path;
}

std::vector<TraceSegment> cut(const std::vector<TraceSegment>& path, const Rational& len) {
  std::vector<TraceSegment> out;
  Rational left = len;
  for (const auto& seg : path) {
    if (left <= 0) break;
    TraceSegment piece = seg;
    if (seg.length() > left) piece.y_end = seg.y_start + seg.dy() * left;
    left -= piece.length();
    out.push_back(piece);
  }
  return out;
}

}  // namespace

int VerticalGraph::vertex_index(int vertex_class) const {
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
    if (vertices[i].vertex_class == vertex_class) return i;
  return -1;
}

std::vector<SaddleConnection> vertical_saddle_connections(const FlatSurface& s, const Rational& bound) {
  const Tracer tracer(s);
  std::vector<SaddleConnection> out;
  for (const auto& [id, list] : tracer.prongs) {
    for (int i = 0; i < static_cast<int>(list.size()); ++i) {
      const Prong from{id, i};
      auto r = tracer.trace_prong(from, bound);
      if (!r.hit || !(from < r.end)) continue;
      out.push_back({from, r.end, r.length, std::move(r.path)});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  return out;
}

VerticalGraph appended_graph(const FlatSurface& s, const Rational& L) {
  if (L < 0) throw Error(ErrorCode::InvalidArgument, "feeler length must be non-negative");
  const Tracer tracer(s);
  VerticalGraph g;
  g.L = L;
  for (const auto& [id, list] : tracer.prongs)
    g.vertices.push_back({id, static_cast<int>(list.size())});
  std::set<Prong> used;
  for (auto& c : vertical_saddle_connections(s, 2 * L)) {
    if (c.length > L) {
      throw Error(ErrorCode::FeelersCollide,
                  "feelers from vertices " + std::to_string(c.from.vertex) + " and " + std::to_string(c.to.vertex) +
                      " overlap along a saddle connection of length " + format_rational(c.length));
    }
    used.insert(c.from);
    used.insert(c.to);
    g.edges.push_back(std::move(c));
  }
  if (L == 0) return g;
  for (const auto& [id, list] : tracer.prongs) {
    for (int i = 0; i < static_cast<int>(list.size()); ++i) {
      const Prong p{id, i};
      if (used.count(p)) continue;
      auto r = tracer.trace_prong(p, L);
      if (r.hit) throw Error(ErrorCode::FeelersCollide, "feeler hits a cone point before length L");
      g.feelers.push_back({p, L, std::move(r.path)});
    }
  }
  return g;
}

VerticalGraph restrict_graph(const VerticalGraph& g, const Rational& L) {
  VerticalGraph out;
  out.vertices = g.vertices;
  out.L = L;
  for (const auto& e : g.edges) {
    if (e.length <= L) {
      out.edges.push_back(e);
      continue;
    }
    out.feelers.push_back({e.from, L, cut(e.path, L)});
    out.feelers.push_back({e.to, L, cut(reversed(e.path), L)});
  }
  for (const auto& f : g.feelers) out.feelers.push_back({f.prong, std::min(f.length, L), cut(f.path, L)});
  if (L == 0) out.feelers.clear();
  std::sort(out.feelers.begin(), out.feelers.end(), [](const auto& a, const auto& b) { return a.prong < b.prong; });
  return out;
}

}  // namespace flatlab
