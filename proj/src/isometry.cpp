#include <algorithm>
#include <deque>
#include <optional>

#include "flatlab/flat_surface.hpp"

namespace flatlab {

namespace {

// Mutable copy of a surface description used while rewriting it.
struct Draft {
  std::vector<Polygon> polys;
  std::vector<Gluing> gluings;
  Markings marks;

  explicit Draft(const FlatSurface& s)
      : polys(s.polygons()), gluings(s.gluings()), marks(s.markings()) {}

  FlatSurface build() const { return FlatSurface::build(polys, gluings, marks); }
};

bool straight(const std::vector<Vec2>& v, int i) {
  const int n = static_cast<int>(v.size());
  const Vec2 out = v[(i + 1) % n] - v[i];
  const Vec2 back = v[(i + n - 1) % n] - v[i];
  return cross(out, back) == 0;
}

bool axis_parallel(const Vec2& d) { return d.x == 0 || d.y == 0; }

// Rectangle possibly carrying extra vertices on its sides.
bool is_rectangle(const Polygon& p) {
  const auto& v = p.vertices;
  int corners = 0;
  for (int i = 0; i < static_cast<int>(v.size()); ++i) {
    if (!axis_parallel(v[(i + 1) % v.size()] - v[i])) return false;
    if (!straight(v, i)) ++corners;
  }
  return corners == 4;
}

bool full_vertical_side(const Polygon& p, int e) {
  const auto& v = p.vertices;
  const int n = static_cast<int>(v.size());
  const Vec2 d = v[(e + 1) % n] - v[e];
  return d.x == 0 && !straight(v, e) && !straight(v, (e + 1) % n);
}

// Glue polygon q onto polygon p along the gluing (p,i) ~ (q,j); q is moved
// into the plane of p. The merged polygon replaces p and q is deleted.
Draft merge_pair(const FlatSurface& s, int gi) {
  const Gluing& g = s.gluings()[gi];
  const int p = g.a.polygon, q = g.b.polygon, i = g.a.edge, j = g.b.edge;
  const int np = s.edge_count(p), nq = s.edge_count(q);
  const int sigma = g.sign;
  const EdgeMap m = s.edge_map(g.a);  // p-plane -> q-plane
  auto to_p = [&](const Vec2& w) { return sigma == 1 ? w - m.offset : m.offset - w; };

  Polygon merged;
  std::map<EdgeRef, int> new_edge;  // old edge -> edge index in merged
  std::map<Corner, int> new_corner;
  for (int k = 0; k < np; ++k) {
    merged.vertices.push_back(s.vertex({p, (i + 1 + k) % np}));
    new_corner[{p, (i + 1 + k) % np}] = k;
    if (k < np - 1) new_edge[{p, (i + 1 + k) % np}] = k;
  }
  for (int k = 0; k < nq - 2; ++k) {
    merged.vertices.push_back(to_p(s.vertex({q, (j + 2 + k) % nq})));
    new_corner[{q, (j + 2 + k) % nq}] = np + k;
  }
  for (int k = 0; k < nq - 1; ++k) new_edge[{q, (j + 1 + k) % nq}] = np - 1 + k;

  auto renum = [&](int poly) { return poly > q ? poly - 1 : poly; };
  const int target = renum(p);
  auto map_edge = [&](EdgeRef e) -> EdgeRef {
    if (e.polygon == p || e.polygon == q) return {target, new_edge.at(e)};
    return {renum(e.polygon), e.edge};
  };
  auto flip = [&](int poly) { return poly == q ? sigma : 1; };

  Draft d(s);
  d.polys.clear();
  for (int k = 0; k < static_cast<int>(s.polygons().size()); ++k) {
    if (k == q) continue;
    d.polys.push_back(k == p ? merged : s.polygons()[k]);
  }
  d.gluings.clear();
  for (int k = 0; k < static_cast<int>(s.gluings().size()); ++k) {
    if (k == gi) continue;
    const Gluing& h = s.gluings()[k];
    d.gluings.push_back({map_edge(h.a), map_edge(h.b), h.sign * flip(h.a.polygon) * flip(h.b.polygon)});
  }
  d.marks = {};
  for (const auto& [e, label] : s.markings().edges)
    if (s.gluing_index(e) != gi) d.marks.edges[map_edge(e)] = label;
  for (const auto& [c, label] : s.markings().vertices) {
    if (c.polygon == p || c.polygon == q) {
      auto it = new_corner.find(c);
      if (it != new_corner.end()) d.marks.vertices[{target, it->second}] = label;
      else if (c.polygon == q) {
        // corner of q that lands on a corner of p along the seam
        const Corner twin = c.vertex == (j + 1) % nq ? Corner{p, i} : Corner{p, (i + 1) % np};
        d.marks.vertices[{target, new_corner.at(twin)}] = label;
      }
    } else {
      d.marks.vertices[{renum(c.polygon), c.vertex}] = label;
    }
  }
  return d;
}

std::optional<Draft> merge_rectangles(const FlatSurface& s) {
  for (int gi = 0; gi < static_cast<int>(s.gluings().size()); ++gi) {
    const Gluing& g = s.gluings()[gi];
    if (g.a.polygon == g.b.polygon) continue;
    const auto& pa = s.polygons()[g.a.polygon];
    const auto& pb = s.polygons()[g.b.polygon];
    if (!is_rectangle(pa) || !is_rectangle(pb)) continue;
    if (!full_vertical_side(pa, g.a.edge) || !full_vertical_side(pb, g.b.edge)) continue;
    if (s.markings().edges.count(g.a) || s.markings().edges.count(g.b)) continue;
    return merge_pair(s, gi);
  }
  return std::nullopt;
}

// A rectangle whose right side is glued to its own left side by a
// translation closes up into a cylinder; where it was cut open is arbitrary.
// Recutting moves the cut to x0 + c for each vertex abscissa c on the top
// and bottom sides.
struct Strip {
  int polygon = 0;
  Rational x0, y0, width, height;
  std::vector<Rational> cuts;
};

std::vector<Strip> strips(const FlatSurface& s) {
  std::vector<Strip> out;
  if (!s.markings().edges.empty() || !s.markings().vertices.empty()) return out;
  for (const auto& g : s.gluings()) {
    if (g.a.polygon != g.b.polygon || g.sign != 1) continue;
    const auto& poly = s.polygons()[g.a.polygon];
    if (!is_rectangle(poly) || !full_vertical_side(poly, g.a.edge) || !full_vertical_side(poly, g.b.edge)) continue;
    Strip st;
    st.polygon = g.a.polygon;
    Rational x1, y1;
    bool first = true;
    for (const auto& v : poly.vertices) {
      if (first || v.x < st.x0) st.x0 = v.x;
      if (first || v.y < st.y0) st.y0 = v.y;
      if (first || v.x > x1) x1 = v.x;
      if (first || v.y > y1) y1 = v.y;
      first = false;
    }
    st.width = x1 - st.x0;
    st.height = y1 - st.y0;
    if (s.edge_vector(g.a).x != 0) continue;
    for (const auto& v : poly.vertices)
      if (v.x > st.x0 && v.x < x1) st.cuts.push_back(v.x - st.x0);
    std::sort(st.cuts.begin(), st.cuts.end());
    st.cuts.erase(std::unique(st.cuts.begin(), st.cuts.end()), st.cuts.end());
    out.push_back(std::move(st));
  }
  return out;
}

// Gluings keyed by edge start points, which survive vertex insertion.
struct KeyedGluing {
  int pa;
  Vec2 sa;
  int pb;
  Vec2 sb;
  int sign;
};

FlatSurface recut(const FlatSurface& s, const Strip& st, const Rational& c) {
  std::vector<Polygon> polys = s.polygons();
  std::vector<KeyedGluing> keyed;
  for (const auto& g : s.gluings())
    keyed.push_back({g.a.polygon, s.edge_start(g.a), g.b.polygon, s.edge_start(g.b), g.sign});
  auto insert_vertex = [&](int poly, const Vec2& start, const Vec2& z) {
    auto& v = polys[poly].vertices;
    const auto it = std::find(v.begin(), v.end(), start);
    v.insert(it + 1, z);
  };
  auto edge_end = [&](int poly, const Vec2& start) {
    const auto& v = polys[poly].vertices;
    const auto it = std::find(v.begin(), v.end(), start);
    return std::next(it) == v.end() ? v.front() : *std::next(it);
  };
  // split the horizontal sides of the strip at x0 + c
  for (const Rational& y : {st.y0, Rational(st.y0 + st.height)}) {
    const Vec2 z{st.x0 + c, y};
    const auto& v = polys[st.polygon].vertices;
    if (std::find(v.begin(), v.end(), z) != v.end()) continue;
    for (std::size_t k = 0; k < keyed.size(); ++k) {
      KeyedGluing g = keyed[k];
      for (int side = 0; side < 2; ++side) {
        const int p = side == 0 ? g.pa : g.pb;
        const Vec2 a0 = side == 0 ? g.sa : g.sb;
        if (p != st.polygon) continue;
        const Vec2 a1 = edge_end(p, a0);
        if (a0.y != y || a1.y != y || !(std::min(a0.x, a1.x) < z.x && z.x < std::max(a0.x, a1.x))) continue;
        const int q = side == 0 ? g.pb : g.pa;
        const Vec2 b0 = side == 0 ? g.sb : g.sa;
        const Vec2 b1 = edge_end(q, b0);
        // start of a meets end of b
        const Vec2 zq = g.sign == 1 ? z - a0 + b1 : a0 + b1 - z;
        insert_vertex(p, a0, z);
        insert_vertex(q, b0, zq);
        keyed[k] = {p, a0, q, zq, g.sign};
        keyed.push_back({p, z, q, b0, g.sign});
        side = 2;
        k = keyed.size();
      }
    }
  }
  // rotate the strip so that x0 + c becomes its left side
  auto shift = [&](const Vec2& w, bool top) {
    Rational nx = w.x - st.x0 - c;
    if (nx < 0 || (nx == 0 && top)) nx += st.width;
    return Vec2{st.x0 + nx, w.y};
  };
  const Rational y1 = st.y0 + st.height;
  std::vector<Vec2> bottom, top;
  for (const auto& w : polys[st.polygon].vertices) {
    if (w.x == st.x0 + c) continue;
    if (w.y == st.y0) bottom.push_back(shift(w, false));
    if (w.y == y1) top.push_back(shift(w, true));
  }
  auto by_x = [](const Vec2& a, const Vec2& b) { return a.x < b.x; };
  std::sort(bottom.begin(), bottom.end(), by_x);
  std::sort(top.begin(), top.end(), [](const Vec2& a, const Vec2& b) { return a.x > b.x; });
  // the old corners meet in one straight vertex on each side
  auto dedupe = [](std::vector<Vec2>& v) { v.erase(std::unique(v.begin(), v.end()), v.end()); };
  dedupe(bottom);
  dedupe(top);
  const Rational x1 = st.x0 + st.width;
  Polygon strip;
  strip.vertices.push_back({st.x0, st.y0});
  for (const auto& w : bottom) strip.vertices.push_back(w);
  strip.vertices.push_back({x1, st.y0});
  strip.vertices.push_back({x1, y1});
  for (const auto& w : top) strip.vertices.push_back(w);
  strip.vertices.push_back({st.x0, y1});

  auto moved = [&](int poly, const Vec2& start) -> Vec2 {
    if (poly != st.polygon) return start;
    return shift(start, start.y == y1);
  };
  auto vertical_side = [&](int poly, const Vec2& start) {
    return poly == st.polygon && edge_end(poly, start).x == start.x;
  };
  std::vector<KeyedGluing> next;
  for (const auto& g : keyed) {
    // the old cut becomes interior
    if (vertical_side(g.pa, g.sa) && vertical_side(g.pb, g.sb)) continue;
    next.push_back({g.pa, moved(g.pa, g.sa), g.pb, moved(g.pb, g.sb), g.sign});
  }
  next.push_back({st.polygon, Vec2{x1, st.y0}, st.polygon, Vec2{st.x0, y1}, 1});
  polys[st.polygon] = strip;

  std::vector<Gluing> gluings;
  auto ref = [&](int poly, const Vec2& start) {
    const auto& v = polys[poly].vertices;
    return EdgeRef{poly, static_cast<int>(std::find(v.begin(), v.end(), start) - v.begin())};
  };
  for (const auto& g : next) gluings.push_back({ref(g.pa, g.sa), ref(g.pb, g.sb), g.sign});
  return normalize(FlatSurface::build(std::move(polys), std::move(gluings)));
}

constexpr std::size_t kMaxRecuts = 256;

// The normal form together with its strips cut open at every vertex position.
std::vector<FlatSurface> recut_variants(const FlatSurface& s) {
  std::vector<FlatSurface> out{s};
  const auto list = strips(s);
  std::size_t combos = 1;
  for (const auto& st : list) combos *= st.cuts.size() + 1;
  if (combos > kMaxRecuts) {
    for (const auto& st : list)
      for (const auto& c : st.cuts) out.push_back(recut(s, st, c));
    return out;
  }
  // strips are recut one after another and found again by polygon index,
  // which recut keeps
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::size_t count = out.size();
    for (std::size_t k = 0; k < count; ++k) {
      for (const auto& st : strips(out[k])) {
        if (st.polygon != list[i].polygon) continue;
        for (const auto& c : st.cuts) out.push_back(recut(out[k], st, c));
      }
    }
  }
  return out;
}

bool same_map(const EdgeMap& a, const EdgeMap& b) { return a.sign == b.sign && a.offset == b.offset; }

// Removes one flat point that is a straight corner on both sides and whose
// two adjacent segments are glued by the same isometry.
std::optional<Draft> remove_flat_vertex(const FlatSurface& s) {
  const auto& classes = s.vertex_classes();
  for (const auto& vc : classes) {
    if (vc.angle_pi != 2 || vc.corners.size() != 2) continue;
    const Corner c0 = vc.corners[0], c1 = vc.corners[1];
    if (s.markings().vertices.count(c0) || s.markings().vertices.count(c1)) continue;
    const auto& v0 = s.polygons()[c0.polygon].vertices;
    const auto& v1 = s.polygons()[c1.polygon].vertices;
    if (!straight(v0, c0.vertex) || !straight(v1, c1.vertex)) continue;
    if (v0.size() <= 3 || v1.size() <= 3) continue;
    const int n0 = static_cast<int>(v0.size()), n1 = static_cast<int>(v1.size());
    const EdgeRef e1{c0.polygon, (c0.vertex + n0 - 1) % n0}, e2{c0.polygon, c0.vertex};
    const EdgeRef f1{c1.polygon, (c1.vertex + n1 - 1) % n1}, f2{c1.polygon, c1.vertex};
    if (c0.polygon == c1.polygon) {
      // the four edges must be distinct
      if (e1 == f1 || e1 == f2 || e2 == f1 || e2 == f2) continue;
      if (n0 <= 4) continue;
    }
    const EdgeMap m1 = s.edge_map(e1), m2 = s.edge_map(e2);
    if (!(m1.target == f2) || !(m2.target == f1) || !same_map(m1, m2)) continue;
    if (s.markings().edges.count(e1) || s.markings().edges.count(e2) || s.markings().edges.count(f1) ||
        s.markings().edges.count(f2))
      continue;

    // drop the higher vertex first so the lower index stays valid
    std::vector<std::pair<int, int>> drops{{c0.polygon, c0.vertex}, {c1.polygon, c1.vertex}};
    std::sort(drops.begin(), drops.end(), [](auto x, auto y) { return x > y; });
    std::vector<int> sizes;
    for (const auto& poly : s.polygons()) sizes.push_back(static_cast<int>(poly.vertices.size()));
    auto edge_after = [&](EdgeRef e) {
      std::vector<int> n = sizes;
      for (auto [poly, r] : drops) {
        if (e.polygon == poly) {
          const int k = e.edge == r ? (r + n[poly] - 1) % n[poly] : e.edge;
          e.edge = k > r ? k - 1 : k;
        }
        --n[poly];
      }
      return e;
    };
    Draft d(s);
    for (auto [poly, r] : drops) d.polys[poly].vertices.erase(d.polys[poly].vertices.begin() + r);
    d.gluings.clear();
    const int drop_gluing = s.gluing_index(e2);
    for (int k = 0; k < static_cast<int>(s.gluings().size()); ++k) {
      if (k == drop_gluing) continue;
      const Gluing& h = s.gluings()[k];
      d.gluings.push_back({edge_after(h.a), edge_after(h.b), h.sign});
    }
    d.marks.edges.clear();
    for (const auto& [e, label] : s.markings().edges) d.marks.edges[edge_after(e)] = label;
    d.marks.vertices.clear();
    for (const auto& [c, label] : s.markings().vertices) {
      Corner out = c;
      for (auto [poly, r] : drops)
        if (out.polygon == poly && out.vertex > r) --out.vertex;
      d.marks.vertices[out] = label;
    }
    return d;
  }
  return std::nullopt;
}

}  // namespace

FlatSurface normalize(const FlatSurface& s) {
  FlatSurface cur = s;
  for (;;) {
    if (auto d = merge_rectangles(cur)) {
      cur = d->build();
      continue;
    }
    if (auto d = remove_flat_vertex(cur)) {
      cur = d->build();
      continue;
    }
    return cur;
  }
}

namespace {

struct PolyMap {
  int target = -1;
  int shift = 0;
  int sign = 1;
  Vec2 offset;
};

bool place(const FlatSurface& a, const FlatSurface& b, int p, PolyMap& m) {
  const auto& va = a.polygons()[p].vertices;
  const auto& vb = b.polygons()[m.target].vertices;
  if (va.size() != vb.size()) return false;
  const int n = static_cast<int>(va.size());
  m.offset = vb[m.shift] - Rational(m.sign) * va[0];
  for (int k = 0; k < n; ++k)
    if (!(vb[(k + m.shift) % n] == Rational(m.sign) * va[k] + m.offset)) return false;
  return true;
}

bool try_from(const FlatSurface& a, const FlatSurface& b, PolyMap seed) {
  const int np = static_cast<int>(a.polygons().size());
  std::vector<PolyMap> maps(np);
  std::vector<bool> used(np, false);
  if (!place(a, b, 0, seed)) return false;
  maps[0] = seed;
  used[seed.target] = true;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop_front();
    const PolyMap& mp = maps[p];
    const int n = a.edge_count(p);
    for (int e = 0; e < n; ++e) {
      const EdgeMap ga = a.edge_map({p, e});
      const EdgeRef image{mp.target, (e + mp.shift) % n};
      const EdgeMap gb = b.edge_map(image);
      const int q = ga.target.polygon;
      const int sign_q = ga.sign * gb.sign * mp.sign;
      const int nq = a.edge_count(q);
      if (b.edge_count(gb.target.polygon) != nq) return false;
      const int shift_q = ((gb.target.edge - ga.target.edge) % nq + nq) % nq;
      if (maps[q].target >= 0) {
        if (maps[q].target != gb.target.polygon || maps[q].shift != shift_q || maps[q].sign != sign_q)
          return false;
        continue;
      }
      if (used[gb.target.polygon]) return false;
      PolyMap mq{gb.target.polygon, shift_q, sign_q, {}};
      if (!place(a, b, q, mq)) return false;
      maps[q] = mq;
      used[mq.target] = true;
      queue.push_back(q);
    }
  }
  // connectivity guarantees every polygon got a map; check labels
  const auto& ma = a.markings();
  const auto& mb = b.markings();
  if (ma.edges.size() != mb.edges.size() || ma.vertices.size() != mb.vertices.size()) return false;
  for (const auto& [e, label] : ma.edges) {
    const PolyMap& m = maps[e.polygon];
    auto it = mb.edges.find({m.target, (e.edge + m.shift) % a.edge_count(e.polygon)});
    if (it == mb.edges.end() || it->second != label) return false;
  }
  for (const auto& [c, label] : ma.vertices) {
    const PolyMap& m = maps[c.polygon];
    auto it = mb.vertices.find({m.target, (c.vertex + m.shift) % a.edge_count(c.polygon)});
    if (it == mb.vertices.end() || it->second != label) return false;
  }
  return true;
}

std::vector<int> sorted_orders(const FlatSurface& s) {
  std::vector<int> out;
  for (const auto& c : cone_data(s)) out.push_back(c.order);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool isometric(const FlatSurface& s1, const FlatSurface& s2, std::size_t max_polygons) {
  if (s1.polygons().size() > max_polygons || s2.polygons().size() > max_polygons)
    throw Error(ErrorCode::SizeLimitExceeded,
                "isometry search is capped at " + std::to_string(max_polygons) + " polygons");
  if (area(s1) != area(s2) || genus(s1) != genus(s2) || sorted_orders(s1) != sorted_orders(s2))
    return false;
  const FlatSurface a = normalize(s1);
  const FlatSurface b = normalize(s2);
  auto match = [](const FlatSurface& x, const FlatSurface& y) {
    if (x.polygons().size() != y.polygons().size() || x.gluings().size() != y.gluings().size()) return false;
    const int n0 = x.edge_count(0);
    for (int q = 0; q < static_cast<int>(y.polygons().size()); ++q) {
      if (y.edge_count(q) != n0) continue;
      for (int shift = 0; shift < n0; ++shift)
        for (int sign : {1, -1})
          if (try_from(x, y, {q, shift, sign, {}})) return true;
    }
    return false;
  };
  if (match(a, b)) return true;
  const auto va = recut_variants(a), vb = recut_variants(b);
  for (const auto& x : va)
    for (const auto& y : vb)
      if (match(x, y)) return true;
  return false;
}

}  // namespace flatlab
