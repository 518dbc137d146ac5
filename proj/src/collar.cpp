#include <algorithm>
#include <map>
#include <optional>

#include "flatlab/vertical_graph.hpp"

namespace flatlab {

namespace {

struct Obstacle {
  Rational x, y_lo, y_hi;
};

// Horizontal family of leaves crossing a segment A-B of polygon `polygon`,
// moving in x-direction `dir`. t is the height on the originating side and d
// the distance already travelled; both are affine along the segment.
struct Band {
  int polygon = 0;
  Vec2 a, b;
  Rational ta, tb, da, db;
  int dir = 1;
  int side = 0;
  int start_polygon = 0;
  Rational start_x;
  int start_dir = 1;
};

Rational lerp(const Rational& u, const Rational& v, const Rational& lambda) { return u + lambda * (v - u); }

constexpr int kMaxBandSteps = 200000;

}  // namespace

std::vector<PolygonalPiece> polygonal_decomposition(const FlatSurface& s, const Rational& L) {
  const VerticalGraph g = appended_graph(s, L);
  const auto side_list = sides(g);
  const int np = static_cast<int>(s.polygons().size());

  std::map<Dart, int> side_of;
  for (int i = 0; i < static_cast<int>(side_list.size()); ++i)
    for (Dart d : side_list[i].walk) side_of[d] = i;

  auto path_of = [&](Dart d) -> const std::vector<TraceSegment>& {
    return (d.kind == Dart::EdgeForward || d.kind == Dart::EdgeBackward) ? g.edges[d.id].path : g.feelers[d.id].path;
  };
  auto forward = [](Dart d) { return d.kind == Dart::EdgeForward || d.kind == Dart::FeelerOut; };

  // obstacles per polygon, including copies of segments lying on glued edges
  std::vector<std::vector<Obstacle>> obstacles(np);
  auto add_segment = [&](const TraceSegment& seg) {
    obstacles[seg.polygon].push_back({seg.x, std::min(seg.y_start, seg.y_end), std::max(seg.y_start, seg.y_end)});
    if (seg.along_edge >= 0) {
      const EdgeMap m = s.edge_map({seg.polygon, seg.along_edge});
      const Vec2 p = m.apply({seg.x, seg.y_start}), q = m.apply({seg.x, seg.y_end});
      obstacles[m.target.polygon].push_back({p.x, std::min(p.y, q.y), std::max(p.y, q.y)});
    }
  };
  for (const auto& e : g.edges)
    for (const auto& seg : e.path) add_segment(seg);
  for (const auto& f : g.feelers)
    for (const auto& seg : f.path) add_segment(seg);

  std::vector<Band> work;
  for (int si = 0; si < static_cast<int>(side_list.size()); ++si) {
    for (Dart d : side_list[si].walk) {
      for (const auto& seg : path_of(d)) {
        const int face = forward(d) ? seg.dy() : -seg.dy();
        Band band;
        band.side = si;
        band.polygon = seg.polygon;
        band.a = {seg.x, std::min(seg.y_start, seg.y_end)};
        band.b = {seg.x, std::max(seg.y_start, seg.y_end)};
        band.dir = face;
        if (seg.along_edge >= 0) {
          const Vec2 ev = s.edge_vector({seg.polygon, seg.along_edge});
          const int interior = -sgn(ev.y);
          if (face != interior) {
            const EdgeMap m = s.edge_map({seg.polygon, seg.along_edge});
            band.polygon = m.target.polygon;
            band.a = m.apply(band.a);
            band.b = m.apply(band.b);
            band.dir = m.sign * face;
          }
        }
        band.ta = band.a.y;
        band.tb = band.b.y;
        band.da = band.db = 0;
        band.start_polygon = band.polygon;
        band.start_x = band.a.x;
        band.start_dir = band.dir;
        work.push_back(band);
      }
    }
  }

  std::vector<CollarRect> rects;
  int steps = 0;
  while (!work.empty()) {
    if (++steps > kMaxBandSteps)
      throw Error(ErrorCode::CollarOverlap, "horizontal leaves do not return to the graph; L is too short");
    Band band = work.back();
    work.pop_back();
    const auto& v = s.polygons()[band.polygon].vertices;
    const int n = static_cast<int>(v.size());
    const Rational lo = std::min(band.a.y, band.b.y), hi = std::max(band.a.y, band.b.y);
    std::vector<Rational> cuts{lo, hi};
    for (const auto& p : v)
      if (p.y > lo && p.y < hi) cuts.push_back(p.y);
    for (const auto& ob : obstacles[band.polygon])
      for (const Rational& y : {ob.y_lo, ob.y_hi})
        if (y > lo && y < hi) cuts.push_back(y);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto at = [&](const Rational& y) {
      const Rational lambda = (y - band.a.y) / (band.b.y - band.a.y);
      return std::tuple{Vec2{lerp(band.a.x, band.b.x, lambda), y}, lerp(band.ta, band.tb, lambda),
                        lerp(band.da, band.db, lambda)};
    };
    auto edge_x = [&](int e, const Rational& y) {
      const Vec2& p0 = v[e];
      const Vec2& p1 = v[(e + 1) % n];
      return Rational(p0.x + (y - p0.y) * (p1.x - p0.x) / (p1.y - p0.y));
    };

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const Rational y0 = cuts[k], y1 = cuts[k + 1];
      const Rational mid = (y0 + y1) / 2;
      const auto [pm, tm, dm] = at(mid);
      std::optional<Rational> best;
      std::optional<Rational> hit_x;
      int best_edge = -1;
      for (const auto& ob : obstacles[band.polygon]) {
        if (!(ob.y_lo < mid && mid < ob.y_hi)) continue;
        const Rational gap = (ob.x - pm.x) * band.dir;
        if (gap > 0 && (!best || gap <= *best)) best = gap, hit_x = ob.x, best_edge = -1;
      }
      for (int e = 0; e < n; ++e) {
        const Vec2& p0 = v[e];
        const Vec2& p1 = v[(e + 1) % n];
        if (p0.y == p1.y) continue;
        if (!(std::min(p0.y, p1.y) < mid && mid < std::max(p0.y, p1.y))) continue;
        const Rational gap = (edge_x(e, mid) - pm.x) * band.dir;
        if (gap > 0 && (!best || gap < *best)) best = gap, hit_x.reset(), best_edge = e;
      }
      if (!best) throw Error(ErrorCode::CollarOverlap, "horizontal leaf escapes its polygon");
      const auto [p0, t0, d0] = at(y0);
      const auto [p1, t1, d1] = at(y1);
      if (best_edge < 0) {
        const Rational w0 = d0 + (*hit_x - p0.x) * band.dir;
        const Rational w1 = d1 + (*hit_x - p1.x) * band.dir;
        if (w0 != w1) throw Error(ErrorCode::CollarOverlap, "leaf lengths vary across a band");
        rects.push_back({band.side, band.start_polygon, Vec2{band.start_x, std::min(t0, t1)}, abs(t1 - t0), w0 / 2,
                         band.start_dir});
        continue;
      }
      const EdgeMap m = s.edge_map({band.polygon, best_edge});
      const Vec2 q0{edge_x(best_edge, y0), y0}, q1{edge_x(best_edge, y1), y1};
      Band next = band;
      next.polygon = m.target.polygon;
      next.a = m.apply(q0);
      next.b = m.apply(q1);
      next.ta = t0;
      next.tb = t1;
      next.da = d0 + (q0.x - p0.x) * band.dir;
      next.db = d1 + (q1.x - p1.x) * band.dir;
      next.dir = m.sign * band.dir;
      work.push_back(next);
    }
  }

  Rational covered = 0;
  for (const auto& r : rects) covered += r.height * r.width;
  if (covered != area(s))
    throw Error(ErrorCode::CollarOverlap,
                "collars cover area " + format_rational(covered) + " of " + format_rational(area(s)));

  const auto comps = graph_components(g);
  int k = 0;
  for (int c : comps) k = std::max(k, c + 1);
  std::vector<PolygonalPiece> pieces(k);
  for (int c = 0; c < k; ++c) pieces[c].component = c;
  std::map<int, int> slot;  // side -> index in its piece
  for (int si = 0; si < static_cast<int>(side_list.size()); ++si) {
    auto& piece = pieces[side_list[si].component];
    slot[si] = static_cast<int>(piece.sides.size());
    piece.sides.push_back(si);
    piece.collar_widths.push_back(-1);
  }
  for (const auto& r : rects) {
    auto& piece = pieces[side_list[r.side].component];
    Rational& w = piece.collar_widths[slot[r.side]];
    if (w < 0 || r.width < w) w = r.width;
    piece.region.push_back(r);
  }
  return pieces;
}

}  // namespace flatlab
