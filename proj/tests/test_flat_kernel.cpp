#include "doctest.h"
#include "support.hpp"

using namespace flatlab;
using namespace testing_support;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("square torus") {
  const auto s = torus(1, 1);
  CHECK(cone_data(s).empty());
  CHECK(genus(s) == 1);
  CHECK(area(s) == 1);
  CHECK(s.vertex_classes().size() == 1);
  CHECK(s.vertex_classes()[0].angle_pi == 2);
}

TEST_CASE("two by one torus") {
  const auto s = torus(2, 1);
  CHECK(cone_data(s).empty());
  CHECK(genus(s) == 1);
  CHECK(area(s) == 2);
}

TEST_CASE("L shaped surface has one zero of order four") {
  const auto s = l_shape();
  const auto cones = cone_data(s);
  REQUIRE(cones.size() == 1);
  CHECK(cones[0].angle_pi == 6);
  CHECK(cones[0].order == 4);
  CHECK(genus(s) == 2);
  CHECK(area(s) == 3);
}

TEST_CASE("validation errors") {
  CHECK(code_of([] { FlatSurface::build({rect(0, 0, 1, 1)}, {{{0, 0}, {0, 2}, 1}}); }) ==
        ErrorCode::UnmatchedEdge);
  CHECK(code_of([] { FlatSurface::build({rect(0, 0, 1, 1)}, {{{0, 0}, {0, 2}, -1}, {{0, 1}, {0, 3}, 1}}); }) ==
        ErrorCode::VectorMismatch);
  CHECK(code_of([] { FlatSurface::build({rect(0, 0, 2, 1)}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 1}, -1}}); }) ==
        ErrorCode::UnmatchedEdge);
  CHECK(code_of([] {
          FlatSurface::build({rect(0, 0, 1, 1), rect(0, 0, 1, 1)},
                             {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}, {{1, 0}, {1, 2}, 1}, {{1, 1}, {1, 3}, 1}});
        }) == ErrorCode::Disconnected);
  // pillowcase: four corners of angle pi
  CHECK(code_of([] {
          FlatSurface::build({rect(0, 0, 1, 1), rect(0, 0, 1, 1)},
                             {{{0, 0}, {1, 0}, -1}, {{0, 1}, {1, 3}, 1}, {{0, 2}, {1, 2}, -1}, {{0, 3}, {1, 1}, 1}});
        }) == ErrorCode::SimplePole);
  CHECK(code_of([] {
          Polygon cw{{v(0, 0), v(0, 1), v(1, 1), v(1, 0)}};
          FlatSurface::build({cw}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}});
        }) == ErrorCode::InvalidPolygon);
  CHECK(code_of([] {
          Polygon bow{{v(0, 0), v(1, 1), v(1, 0), v(0, 1)}};
          FlatSurface::build({bow}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}});
        }) == ErrorCode::InvalidPolygon);
}

TEST_CASE("invariants under random relabeling") {
  std::mt19937_64 rng(7);
  const FlatSurface base[] = {torus(1, 1), torus(2, 1), l_shape()};
  for (int trial = 0; trial < 100; ++trial) {
    const auto& s = base[trial % 3];
    const auto r = relabel(s, rng);
    auto orders = [](const FlatSurface& x) {
      std::vector<int> o;
      for (auto c : cone_data(x)) o.push_back(c.order);
      std::sort(o.begin(), o.end());
      return o;
    };
    CHECK(orders(r) == orders(s));
    CHECK(genus(r) == genus(s));
    CHECK(area(r) == area(s));
    CHECK(isometric(s, r));
  }
}

TEST_CASE("isometry distinguishes shapes") {
  CHECK_FALSE(isometric(torus(2, 1), torus(1, 2)));
  CHECK_FALSE(isometric(torus(1, 1), torus(2, 1)));
  const Polygon slanted{{v(0, 0), v(1, 0), v(Rational(3, 2), 1), v(Rational(1, 2), 1)}};
  const auto twisted = FlatSurface::build({slanted}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}});
  CHECK(cone_data(twisted).empty());
  CHECK_FALSE(isometric(torus(1, 1), twisted));
}

TEST_CASE("split rectangles normalize back") {
  const Rational h(1, 2);
  const auto split = FlatSurface::build(
      {rect(0, 0, h, 1), rect(h, 0, h, 1)},
      {{{0, 1}, {1, 3}, 1}, {{1, 1}, {0, 3}, 1}, {{0, 0}, {0, 2}, 1}, {{1, 0}, {1, 2}, 1}});
  const auto n = normalize(split);
  CHECK(n.polygons().size() == 1);
  CHECK(n.polygons()[0].vertices.size() == 4);
  CHECK(isometric(split, torus(1, 1)));
}

TEST_CASE("marked edges are respected") {
  Markings m;
  m.edges[{0, 0}] = "a";
  const auto marked = FlatSurface::build({rect(0, 0, 1, 1)}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}}, m);
  Markings m2;
  m2.edges[{0, 1}] = "a";
  const auto other = FlatSurface::build({rect(0, 0, 1, 1)}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}}, m2);
  CHECK_FALSE(isometric(marked, other));
  std::mt19937_64 rng(3);
  CHECK(isometric(marked, relabel(marked, rng)));
}

TEST_CASE("size cap") {
  std::vector<Polygon> polys;
  std::vector<Gluing> gl;
  const int n = 70;
  for (int k = 0; k < n; ++k) polys.push_back(rect(0, 0, 1, 1));
  for (int k = 0; k < n; ++k) {
    gl.push_back({{k, 0}, {k, 2}, 1});
    gl.push_back({{k, 1}, {(k + 1) % n, 3}, 1});
  }
  const auto s = FlatSurface::build(polys, gl);
  CHECK(code_of([&] { isometric(s, s); }) == ErrorCode::SizeLimitExceeded);
}
