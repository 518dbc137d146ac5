#include "flatlab/catalog.hpp"

namespace flatlab {

namespace {

Vec2 pt(const Rational& x, const Rational& y) { return {x, y}; }

}  // namespace

FlatSurface rect_torus(const Rational& width, const Rational& height) {
  Polygon p{{pt(0, 0), pt(width, 0), pt(width, height), pt(0, height)}};
  return FlatSurface::build({p}, {{{0, 0}, {0, 2}, 1}, {{0, 1}, {0, 3}, 1}});
}

FlatSurface l_shape_surface() {
  Polygon p{{pt(0, 0), pt(1, 0), pt(2, 0), pt(2, 1), pt(1, 1), pt(1, 2), pt(0, 2), pt(0, 1)}};
  return FlatSurface::build({p}, {{{0, 0}, {0, 5}, 1}, {{0, 1}, {0, 3}, 1}, {{0, 2}, {0, 7}, 1}, {{0, 4}, {0, 6}, 1}});
}

FlatSurface slit_torus(const Rational& twist, const std::vector<int>& perm) {
  const int k = static_cast<int>(perm.size());
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "slit exchange needs at least one piece");
  if (twist < 0 || twist >= Rational(1, 2)) throw Error(ErrorCode::InvalidArgument, "twist must lie in [0, 1/2)");
  std::vector<bool> seen(k, false);
  for (int j : perm) {
    if (j < 0 || j >= k || seen[j]) throw Error(ErrorCode::InvalidArgument, "bank exchange is not a permutation");
    seen[j] = true;
  }
  const Rational half(1, 2), lo(1, 4), hi(3, 4), piece = Rational(1, 2) / k;
  const bool twisted = twist != 0;

  // west rectangle [0,1/2] x [0,1]
  Polygon west;
  std::vector<Gluing> gl;
  west.vertices.push_back(pt(0, 0));
  if (twisted) west.vertices.push_back(pt(twist, 0));
  west.vertices.push_back(pt(half, 0));
  for (int i = 0; i <= k; ++i) west.vertices.push_back(pt(half, lo + i * piece));
  west.vertices.push_back(pt(half, 1));
  if (twisted) west.vertices.push_back(pt(half - twist, 1));
  west.vertices.push_back(pt(0, 1));
  // east rectangle [1/2,1] x [0,1]
  Polygon east;
  east.vertices.push_back(pt(half, 0));
  if (twisted) east.vertices.push_back(pt(half + twist, 0));
  east.vertices.push_back(pt(1, 0));
  east.vertices.push_back(pt(1, 1));
  if (twisted) east.vertices.push_back(pt(1 - twist, 1));
  east.vertices.push_back(pt(half, 1));
  for (int i = k; i >= 0; --i) east.vertices.push_back(pt(half, lo + i * piece));

  const int t = twisted ? 1 : 0;
  // west edge indices
  const int w_bottom_a = 0, w_bottom_b = t;  // equal when untwisted
  const int w_right_lo = 1 + t;
  const int w_bank0 = 2 + t;
  const int w_right_hi = 2 + t + k;
  const int w_top_b = 3 + t + k;
  const int w_top_a = 3 + 2 * t + k;
  const int w_left = 4 + 2 * t + k;
  // east edge indices
  const int e_bottom_a = 0, e_bottom_b = t;
  const int e_right = 1 + t;
  const int e_top_a = 2 + t, e_top_b = 2 + 2 * t;
  const int e_left_hi = 3 + 2 * t;
  const int e_bank_top = 4 + 2 * t;
  const int e_left_lo = 4 + 2 * t + k;

  if (twisted) {
    gl.push_back({{0, w_top_a}, {0, w_bottom_b}, 1});  // [0, 1/2-s] -> [s, 1/2]
    gl.push_back({{0, w_top_b}, {1, e_bottom_a}, 1});  // [1/2-s, 1/2] -> [1/2, 1/2+s]
    gl.push_back({{1, e_top_b}, {1, e_bottom_b}, 1});  // [1/2, 1-s] -> [1/2+s, 1]
    gl.push_back({{1, e_top_a}, {0, w_bottom_a}, 1});  // [1-s, 1] -> [0, s]
  } else {
    gl.push_back({{0, w_top_a}, {0, w_bottom_a}, 1});
    gl.push_back({{1, e_top_a}, {1, e_bottom_a}, 1});
  }
  gl.push_back({{0, w_left}, {1, e_right}, 1});
  gl.push_back({{0, w_right_lo}, {1, e_left_lo}, 1});
  gl.push_back({{0, w_right_hi}, {1, e_left_hi}, 1});
  for (int i = 0; i < k; ++i) gl.push_back({{0, w_bank0 + i}, {1, e_bank_top + (k - 1 - perm[i])}, 1});
  return FlatSurface::build({west, east}, gl);
}

FlatSurface slit_torus_example() { return slit_torus(Rational(1, 7), {2, 1, 0}); }

FlatSurface strebel_warmup() { return slit_torus(0, {1, 0}); }

FlatSurface generic_simple_zeros() {
  const int N = 4, M = 3;
  std::vector<Vec2> pts;
  for (int i = 0; i < N; ++i) pts.push_back(pt(i, 0));
  for (int j = 0; j < M; ++j) pts.push_back(pt(N, j));
  for (int i = 0; i < N; ++i) pts.push_back(pt(N - i, M));
  for (int j = 0; j < M; ++j) pts.push_back(pt(0, M - j));
  const Rational shear(1, 1009);
  for (auto& p : pts) p.x += shear * p.y;
  const std::vector<Gluing> gl{{{0, 7}, {0, 10}, -1}, {{0, 3}, {0, 0}, -1}, {{0, 2}, {0, 9}, 1},
                               {{0, 1}, {0, 8}, 1},   {{0, 13}, {0, 6}, 1}, {{0, 4}, {0, 11}, 1},
                               {{0, 5}, {0, 12}, 1}};
  return FlatSurface::build({Polygon{pts}}, gl);
}

std::vector<std::string> catalog_names() {
  return {"square-torus", "l-shape", "slit-torus", "strebel-warmup", "generic-simple-zeros"};
}

FlatSurface catalog_surface(const std::string& name) {
  if (name == "square-torus") return rect_torus(1, 1);
  if (name == "l-shape") return l_shape_surface();
  if (name == "slit-torus") return slit_torus_example();
  if (name == "strebel-warmup") return strebel_warmup();
  if (name == "generic-simple-zeros") return generic_simple_zeros();
  throw Error(ErrorCode::InvalidArgument, "unknown catalog surface '" + name + "'");
}

}  // namespace flatlab
