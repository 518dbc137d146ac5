#include "flatlab/half_plane.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace flatlab {

namespace {

Rational alternating(const std::vector<Rational>& xs) {
  if (xs.size() % 2 == 1) return 0;
  Rational sum = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sum += (i % 2 == 0) ? xs[i] : Rational(-xs[i]);
  return abs(sum);
}

}  // namespace

Rational metric_residue(const PlanarEnd& e) {
  if (e.notches.empty()) throw Error(ErrorCode::InvalidArgument, "planar end needs at least one half-plane");
  std::vector<Rational> widths;
  for (const auto& [a, b] : e.notches) {
    if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "notch must satisfy a < b");
    widths.push_back(b - a);
  }
  return alternating(widths);
}

Rational crown_residue(const CrownEnd& c) {
  if (c.L.empty() || c.L.size() != c.R.size()) throw Error(ErrorCode::InvalidArgument, "crown needs matching L and R heights");
  std::vector<Rational> sides;
  for (std::size_t i = 0; i < c.L.size(); ++i) sides.push_back(c.R[i] - c.L[i]);
  return alternating(sides);
}

std::vector<Rational> normalize_truncation(const CrownEnd& c, const Rational& H) {
  crown_residue(c);  // validates the heights
  const int n = static_cast<int>(c.L.size());
  if (H <= 0) throw Error(ErrorCode::HTooSmall, "truncation height must be positive");
  // spike i joins geodesic i to i+1; a leaf at height r on i meets i+1 at kappa_i - r
  std::vector<Rational> kappa(n);
  for (int i = 0; i < n; ++i) kappa[i] = c.R[i] + c.L[(i + 1) % n];

  // walk from geodesic j: R'_j = x, every later side has length H, and the
  // side on j closes the loop
  auto walk = [&](int j, const Rational& x) {
    std::vector<Rational> Rn(n), Ln(n);
    Rn[j] = x;
    for (int step = 1; step < n; ++step) {
      const int i = (j + step) % n, prev = (j + step - 1) % n;
      Ln[i] = kappa[prev] - Rn[prev];
      Rn[i] = Ln[i] + H;
    }
    const int last = (j + n - 1) % n;
    Ln[j] = kappa[last] - Rn[last];
    return std::pair{Rn, Ln};
  };

  int start = 0;
  Rational x;
  if (n % 2 == 1) {
    // the closing side is affine in x with slope 2; solve for length H
    auto [R0, L0] = walk(0, 0);
    x = (H - (R0[0] - L0[0])) / 2;
  } else {
    // the closing side does not depend on x; start where it comes out as H + C
    Rational signed_sum = 0;
    for (int i = 0; i < n; ++i) signed_sum += (i % 2 == 0 ? 1 : -1) * (c.R[i] - c.L[i]);
    start = signed_sum >= 0 ? 0 : 1;
    // leaves at even offsets deepen with x, the others get shallower;
    // take the least x keeping every leaf at least as deep as the given one
    auto [R0, L0] = walk(start, 0);
    for (int k = 0; k < n; k += 2) {
      const int i = (start + k) % n;
      if (k == 0 || c.R[i] - R0[i] > x) x = c.R[i] - R0[i];
    }
  }
  auto [Rn, Ln] = walk(start, x);
  std::vector<Rational> lengths(n);
  for (int i = 0; i < n; ++i) {
    if (Rn[i] < c.R[i])
      throw Error(ErrorCode::HTooSmall, "H = " + format_rational(H) + " needs a leaf shallower than the given one");
    lengths[i] = Rn[i] - Ln[i];
  }
  return lengths;
}

int GeneralizedHalfPlaneSurface::half_planes() const {
  return static_cast<int>(std::count_if(attachments.begin(), attachments.end(), [](auto& a) { return !a.cylinder; }));
}

int GeneralizedHalfPlaneSurface::cylinders() const {
  return static_cast<int>(attachments.size()) - half_planes();
}

GeneralizedHalfPlaneSurface build_hps(const VerticalGraph& spine) {
  std::set<Prong> occupied;
  for (const auto& e : spine.edges) occupied.insert(e.from), occupied.insert(e.to);
  for (const auto& f : spine.feelers) occupied.insert(f.prong);
  for (const auto& v : spine.vertices)
    for (int i = 0; i < v.prongs; ++i)
      if (!occupied.count({v.vertex_class, i}))
        throw Error(ErrorCode::UnattachableSide, "prong " + std::to_string(i) + " of vertex " +
                                                     std::to_string(v.vertex_class) + " carries neither edge nor ray");
  GeneralizedHalfPlaneSurface s;
  s.spine = spine;
  s.sides = sides(spine);
  for (int i = 0; i < static_cast<int>(s.sides.size()); ++i) s.attachments.push_back({i, s.sides[i].is_cycle});
  for (int i = 0; i < static_cast<int>(s.sides.size()); ++i) {
    const Side& side = s.sides[i];
    if (side.is_cycle) {
      s.ends.push_back({{i}, true, side.component});
    } else if (s.ends.empty() || s.ends.back().cylinder || s.sides[s.ends.back().sides.back()].boundary != side.boundary) {
      s.ends.push_back({{i}, false, side.component});
    } else {
      s.ends.back().sides.push_back(i);
    }
  }
  for (int c : graph_components(spine)) s.components = std::max(s.components, c + 1);
  return s;
}

EndData end_local_data(const GeneralizedHalfPlaneSurface& s, int end) {
  if (end < 0 || end >= static_cast<int>(s.ends.size())) throw Error(ErrorCode::InvalidArgument, "no such end");
  const EndInfo& info = s.ends[end];
  EndData d;
  if (info.cylinder) {
    d.order = 2;
    d.residue = side_length(s.sides[info.sides.front()]).get_d() / (2 * std::numbers::pi);
    return d;
  }
  // notch model: each half-plane keeps its finite boundary part between two rays
  PlanarEnd planar;
  const Rational T = 1;
  for (int side : info.sides) planar.notches.emplace_back(-T, side_length(s.sides[side]) + T);
  d.order = static_cast<int>(info.sides.size()) + 2;
  d.exact_residue = metric_residue(planar);
  d.residue = d.exact_residue->get_d();
  return d;
}

Truncation truncate(const GeneralizedHalfPlaneSurface& s, int end, const Rational& H) {
  if (end < 0 || end >= static_cast<int>(s.ends.size())) throw Error(ErrorCode::InvalidArgument, "no such end");
  if (H <= 0) throw Error(ErrorCode::HTooSmall, "truncation height must be positive");
  const EndInfo& info = s.ends[end];
  Truncation t;
  t.end = end;
  t.H = H;
  if (info.cylinder) {
    t.closed = true;
    t.side_lengths = {side_length(s.sides[info.sides.front()])};
    t.widths = {H / 2};
    return t;
  }
  // crown data of the spine: leaves start at the finite ends of each side
  CrownEnd crown;
  for (int side : info.sides) {
    crown.L.push_back(0);
    crown.R.push_back(side_length(s.sides[side]));
  }
  t.side_lengths = normalize_truncation(crown, H);
  t.widths.assign(info.sides.size(), H / 2);
  return t;
}

GeneralizedHalfPlaneSurface y_infinity(const FlatSurface& s, const Rational& L) {
  return build_hps(appended_graph(s, L));
}

Rational limit_residue_from_lengths(const std::vector<Rational>& lengths) { return alternating(lengths); }

double limit_residue_from_graph(const VerticalGraph& g, const std::vector<Side>& end_sides) {
  (void)g;
  if (end_sides.size() == 1 && end_sides.front().is_cycle)
    return side_length(end_sides.front()).get_d() / (2 * std::numbers::pi);
  std::vector<Rational> lengths;
  for (const auto& side : end_sides) lengths.push_back(side_length(side));
  return alternating(lengths).get_d();
}

BoundaryExchange boundary_exchange(const GeneralizedHalfPlaneSurface& s, int component) {
  std::vector<int> planes;
  for (const auto& a : s.attachments)
    if (!a.cylinder && s.sides[a.side].component == component) planes.push_back(a.side);
  if (planes.size() != 2) throw Error(ErrorCode::InvalidArgument, "component does not have exactly two half-planes");
  BoundaryExchange x;
  x.half_plane_a = planes[0];
  x.half_plane_b = planes[1];
  auto edges_of = [&](int side) {
    std::vector<int> ids;
    for (Dart d : s.sides[side].walk)
      if (d.kind == Dart::EdgeForward || d.kind == Dart::EdgeBackward) ids.push_back(d.id);
    return ids;
  };
  const auto a = edges_of(planes[0]);
  auto b = edges_of(planes[1]);
  // the facing half-plane runs along the shared edges in the opposite sense
  std::reverse(b.begin(), b.end());
  auto duplicated = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  x.self_glued = duplicated(a) || duplicated(b);
  std::vector<int> shared, pos;
  for (int e : a) {
    auto it = std::find(b.begin(), b.end(), e);
    if (it == b.end()) continue;
    shared.push_back(e);
    pos.push_back(static_cast<int>(it - b.begin()));
  }
  // merge runs that stay adjacent on both sides
  std::vector<int> block_start;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i == 0 || pos[i] != pos[i - 1] + 1) {
      block_start.push_back(pos[i]);
      x.lengths.push_back(0);
    }
    x.lengths.back() += s.spine.edges[shared[i]].length;
  }
  std::vector<int> order(block_start.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int p, int q) { return block_start[p] < block_start[q]; });
  x.permutation.assign(order.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) x.permutation[order[r]] = static_cast<int>(r);
  return x;
}

std::complex<double> pullback_leading_term(std::complex<double> a_n, int n, double fprime0) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "pole order must be at least 2");
  if (!(fprime0 > 0)) throw Error(ErrorCode::InvalidArgument, "|f'(0)| must be positive");
  return std::pow(fprime0, 2 - n) * a_n;
}

double truncation_height_schedule(double H0, int n, int i) {
  if (!(H0 > 0) || i < 0) throw Error(ErrorCode::InvalidArgument, "need H0 > 0 and i >= 0");
  return std::pow(H0 * std::ldexp(1.0, i), n / 2.0);
}

std::vector<std::string> parity_warnings(const GeneralizedHalfPlaneSurface& s) {
  std::vector<std::string> out;
  for (int e = 0; e < static_cast<int>(s.ends.size()); ++e) {
    const EndData d = end_local_data(s, e);
    if (d.order % 2 == 0 && d.residue != 0)
      out.push_back("end " + std::to_string(e) + " has even order " + std::to_string(d.order) + " and residue " +
                    std::to_string(d.residue));
  }
  return out;
}

}  // namespace flatlab
