#pragma once

#include <algorithm>
#include <numeric>
#include <random>

#include "flatlab/flat_surface.hpp"
#include "flatlab/grafting.hpp"

namespace testing_support {

using flatlab::Corner;
using flatlab::EdgeRef;
using flatlab::FlatSurface;
using flatlab::Gluing;
using flatlab::Polygon;
using flatlab::Rational;
using flatlab::Vec2;
using flatlab::BranchSide;
using flatlab::Error;
using flatlab::ErrorCode;
using flatlab::TrackPiece;
using flatlab::TrainTrackData;
using flatlab::build_Yt;

inline Vec2 v(Rational x, Rational y) { return Vec2{x, y}; }

inline Polygon rect(Rational x0, Rational y0, Rational w, Rational h) {
  return Polygon{{v(x0, y0), v(x0 + w, y0), v(x0 + w, y0 + h), v(x0, y0 + h)}};
}

inline FlatSurface torus(Rational w, Rational h) {
  return FlatSurface::build({rect(0, 0, w, h)}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}});
}

// Three unit squares in an L; one cone point of angle 6 pi.
inline FlatSurface l_shape() {
  Polygon p{{v(0, 0), v(1, 0), v(2, 0), v(2, 1), v(1, 1), v(1, 2), v(0, 2), v(0, 1)}};
  return FlatSurface::build({p}, {{{0, 0}, {0, 5}, 1}, {{0, 1}, {0, 3}, 1}, {{0, 2}, {0, 7}, 1}, {{0, 4}, {0, 6}, 1}});
}

// Random polygon permutation, cyclic vertex shift, half-turn and translation.
// Produces a surface isometric to s by construction.
inline FlatSurface relabel(const FlatSurface& s, std::mt19937_64& rng) {
  const int np = static_cast<int>(s.polygons().size());
  std::vector<int> perm(np);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> shift(np), sign(np);
  std::vector<Polygon> polys(np);
  for (int p = 0; p < np; ++p) {
    const auto& src = s.polygons()[p].vertices;
    const int n = static_cast<int>(src.size());
    shift[p] = std::uniform_int_distribution<int>(0, n - 1)(rng);
    sign[p] = std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1;
    const Vec2 c{Rational(std::uniform_int_distribution<int>(-9, 9)(rng), 7),
                 Rational(std::uniform_int_distribution<int>(-9, 9)(rng), 5)};
    std::vector<Vec2> out(n);
    for (int k = 0; k < n; ++k) out[(k + shift[p]) % n] = Rational(sign[p]) * src[k] + c;
    polys[perm[p]].vertices = out;
  }
  auto map_edge = [&](EdgeRef e) {
    return EdgeRef{perm[e.polygon], (e.edge + shift[e.polygon]) % s.edge_count(e.polygon)};
  };
  std::vector<Gluing> gl;
  for (const auto& g : s.gluings()) {
    Gluing h{map_edge(g.a), map_edge(g.b), g.sign * sign[g.a.polygon] * sign[g.b.polygon]};
    if (std::uniform_int_distribution<int>(0, 1)(rng)) std::swap(h.a, h.b);
    gl.push_back(h);
  }
  std::shuffle(gl.begin(), gl.end(), rng);
  flatlab::Markings marks;
  for (const auto& [e, label] : s.markings().edges) marks.edges[map_edge(e)] = label;
  for (const auto& [c, label] : s.markings().vertices)
    marks.vertices[{perm[c.polygon], (c.vertex + shift[c.polygon]) % s.edge_count(c.polygon)}] = label;
  return FlatSurface::build(polys, gl, marks);
}

using flatlab::random_track;

}  // namespace testing_support
