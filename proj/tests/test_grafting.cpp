#include <cmath>

#include "doctest.h"
#include "flatlab/grafting.hpp"
#include "support.hpp"

using namespace flatlab;
using namespace testing_support;

namespace {

// two unit squares side by side; each top glued to its own bottom
FlatSurface two_squares() {
  return build_surface({rect(0, 0, 1, 1), rect(1, 0, 1, 1)},
                       {{{0, 1}, {1, 3}, 1}, {{1, 1}, {0, 3}, 1}, {{0, 2}, {0, 0}, 1}, {{1, 2}, {1, 0}, 1}});
}

// lattice spanned by (0, 2) and (w, -1), as a parallelogram
FlatSurface parallelogram(const Rational& w) {
  return build_surface({Polygon{{v(0, 0), v(w, -1), v(w, 1), v(0, 2)}}}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}});
}

// parallelogram(1) with the strip [1, 3] x [-1, 1] spliced in along x = 1
FlatSurface spliced() {
  return build_surface({Polygon{{v(0, 0), v(1, -1), v(1, 1), v(0, 2)}}, rect(1, -1, 2, 2)},
                       {{{0, 0}, {0, 2}, 1}, {{0, 1}, {1, 3}, 1}, {{1, 1}, {0, 3}, 1}, {{1, 0}, {1, 2}, 1}});
}

std::complex<double> I(0, 1);

}  // namespace

TEST_CASE("grafting the square torus along a vertical curve") {
  const auto s = torus(1, 1);
  const GraftLocus locus{{{0, 1}}};
  CHECK(locus_length(s, locus) == 1);
  CHECK(isometric(graft_cylinder(s, locus, 0), s));
  for (const Rational t : {Rational(1, 3), Rational(2), Rational(7, 5)}) {
    const auto g = graft_cylinder(s, locus, t);
    CHECK(isometric(g, torus(1 + t, 1)));
    CHECK(area(g) == area(s) + t);
    CHECK(genus(g) == 1);
    CHECK(cone_data(g).empty());
  }
}

TEST_CASE("grafting along disjoint curves commutes") {
  const auto s = two_squares();
  const GraftLocus a{{{0, 1}}}, b{{{1, 1}}};
  const Rational t1(1, 2), t2(3, 4);
  const auto ab = graft_cylinder(graft_cylinder(s, a, t1), b, t2);
  const auto ba = graft_cylinder(graft_cylinder(s, b, t2), a, t1);
  CHECK(isometric(ab, ba));
  CHECK(isometric(ab, torus(2 + t1 + t2, 1)));
}

TEST_CASE("grafting keeps cone data on the L shape") {
  const auto s = l_shape();
  // the vertical curve through the middle of the upper square
  const auto& polys = s.polygons();
  int found = 0;
  for (int p = 0; p < static_cast<int>(polys.size()); ++p) {
    for (int e = 0; e < s.edge_count(p); ++e) {
      const GraftLocus locus{{{p, e}}};
      try {
        const auto g = graft_cylinder(s, locus, Rational(1, 2));
        CHECK(cone_data(g) == cone_data(s));
        CHECK(genus(g) == genus(s));
        CHECK(area(g) == area(s) + locus_length(s, locus) / 2);
        ++found;
      } catch (const Error& err) {
        CHECK((err.code() == ErrorCode::LocusNotVertical || err.code() == ErrorCode::LocusNotEmbedded));
      }
    }
  }
  CHECK(found >= 1);
}

TEST_CASE("locus validation") {
  const auto s = torus(1, 1);
  auto code = [&](const GraftLocus& l) {
    try {
      graft_cylinder(s, l, 1);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code({{{0, 0}}}) == ErrorCode::LocusNotVertical);
  CHECK(code({{{0, 1}, {0, 1}}}) == ErrorCode::LocusNotEmbedded);
  CHECK(code({{{0, 1}, {0, 3}}}) == ErrorCode::LocusNotEmbedded);
  CHECK(code({{}}) == ErrorCode::LocusNotEmbedded);
}

TEST_CASE("torus grafting closed form") {
  const TorusPoint square{I};
  CHECK(std::abs(graft_torus(square, {1, 0}, 0).tau - I) < 1e-15);
  for (double t : {0.25, 1.0, 3.0}) {
    CHECK(std::abs(graft_torus(square, {1, 0}, t).tau - I * (1 + t)) < 1e-12);
    CHECK(std::abs(graft_torus(square, {0, 1}, t).tau - I / (1 + t)) < 1e-12);
  }
  CHECK_THROWS_AS(graft_torus(square, {2, 4}, 1), Error);
}

TEST_CASE("torus grafting along (1,1) matches the polygon model") {
  // rotating C/(Z + iZ) by i(1 - i) makes 1 + i vertical of length 2; the
  // complementary generator i becomes -1 + i. Width t|1 + i| scales to 2t.
  const auto model = parallelogram(1);
  const auto grafted = graft_cylinder(model, {{{0, 1}}}, 2);
  CHECK(isometric(grafted, spliced()));
  CHECK(area(grafted) == area(parallelogram(3)));
  // in the grafted lattice, the image of i over the image of 1 + i
  const auto tau = graft_torus({I}, {1, 1}, 1).tau;
  const std::complex<double> ratio = tau / (1.0 + tau);
  CHECK(std::abs(ratio - std::complex<double>(-3, 1) / (2.0 * I)) < 1e-12);
}

TEST_CASE("torus grafting is a semigroup along a fixed curve") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  const std::vector<std::pair<int, int>> curves{{1, 0}, {0, 1}, {1, 1}, {2, 1}, {-1, 3}};
  for (int trial = 0; trial < 100; ++trial) {
    const TorusPoint tau{std::complex<double>(u(rng) - 1, u(rng))};
    const auto c = curves[trial % curves.size()];
    const double t1 = u(rng), t2 = u(rng);
    const auto once = graft_torus(tau, c, t1 + t2);
    const auto twice = graft_torus(graft_torus(tau, c, t1), c, t2);
    CHECK(std::abs(once.tau - twice.tau) < 1e-9 * (1 + std::abs(once.tau)));
    CHECK(once.tau.imag() > 0);
  }
}

TEST_CASE("branch width") {
  CHECK(branch_width(1.5, 0) == 0);
  CHECK(branch_width(2, 3) == 6);
  CHECK_THROWS_AS(branch_width(0, 1), Error);
}

TEST_CASE("annulus branch closes to a flat torus") {
  TrainTrackData track;
  track.branches.push_back({1, 1, BranchKind::Annulus});
  track.gluings.push_back({0, BranchSide::Right, 0, 0, BranchSide::Left, 0, 1});
  track.pieces.push_back({{{{0, BranchSide::Right}}, {{0, BranchSide::Left}}}, 0});
  for (const Rational t : {Rational(1, 4), Rational(3)}) CHECK(isometric(build_Yt(track, t), torus(t, 1)));
  track.pieces[0].residue = 1;
  CHECK_THROWS_WITH_AS(build_Yt(track, 1), doctest::Contains("ResidueMismatch"), Error);
}

TEST_CASE("malformed tracks") {
  std::mt19937_64 rng(9);
  const auto good = random_track(rng, 3);
  CHECK_NOTHROW(validate_track(good));
  auto gap = good;
  gap.gluings.pop_back();
  CHECK_THROWS_WITH_AS(validate_track(gap), doctest::Contains("InvalidTrack"), Error);
  auto low = good;
  low.min_height = 100;
  CHECK_THROWS_WITH_AS(validate_track(low), doctest::Contains("InvalidTrack"), Error);
  auto twice = good;
  twice.pieces[1].sides.push_back({{0, BranchSide::Left}});
  CHECK_THROWS_WITH_AS(validate_track(twice), doctest::Contains("InvalidTrack"), Error);
  CHECK_THROWS_AS(build_Yt(good, 0), Error);
}

TEST_CASE("Y_t lies on a Teichmueller ray") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> num(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const auto track = random_track(rng, 1 + trial % 4);
    Rational t1(num(rng), 8), t2(num(rng), 8);
    t1.canonicalize();
    t2.canonicalize();
    if (t1 == t2) t2 += 1;
    if (t2 < t1) std::swap(t1, t2);
    const auto y1 = build_Yt(track, t1), y2 = build_Yt(track, t2);
    CHECK(isometric(y2, flow_by_factor(y1, t2 / t1)));
    CHECK(area(y2) == area(y1) * (t2 / t1));
  }
}

TEST_CASE("Y_t does not depend on refining the track") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> frac(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const auto track = random_track(rng, 1 + trial % 3);
    const int b = static_cast<int>(rng() % track.branches.size());
    const auto finer = split_branch(track, b, Rational(frac(rng), 5));
    CHECK_NOTHROW(validate_track(finer));
    const Rational t(3, 2);
    CHECK(isometric(build_Yt(track, t), build_Yt(finer, t)));
  }
}
