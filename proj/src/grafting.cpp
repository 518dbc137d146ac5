#include "flatlab/grafting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "flatlab/half_plane.hpp"

namespace flatlab {

namespace {

double corner_angle(const FlatSurface& s, Corner c) {
  const int n = s.edge_count(c.polygon);
  const Vec2 here = s.vertex(c);
  const Vec2 out = s.vertex({c.polygon, (c.vertex + 1) % n}) - here;
  const Vec2 back = s.vertex({c.polygon, (c.vertex + n - 1) % n}) - here;
  double a = std::atan2(cross(out, back).get_d(), dot(out, back).get_d());
  if (a <= 0) a += 2 * std::numbers::pi;
  return a;
}

// Angle swept on the left of the locus where it leaves along `out_edge`
// after arriving along `in_edge`.
double left_angle(const FlatSurface& s, EdgeRef in_edge, EdgeRef out_edge) {
  const Corner stop{in_edge.polygon, (in_edge.edge + 1) % s.edge_count(in_edge.polygon)};
  Corner c{out_edge.polygon, out_edge.edge};
  double total = 0;
  const std::size_t limit = s.vertex_classes()[s.vertex_class_of(c)].corners.size();
  for (std::size_t step = 0; step < limit; ++step) {
    total += corner_angle(s, c);
    if (c == stop) return total;
    const int n = s.edge_count(c.polygon);
    const EdgeMap m = s.edge_map({c.polygon, (c.vertex + n - 1) % n});
    c = {m.target.polygon, m.target.edge};
  }
  return -1;
}

}  // namespace

Rational locus_length(const FlatSurface& s, const GraftLocus& locus) {
  Rational total = 0;
  for (EdgeRef e : locus.path) total += abs(s.edge_vector(e).y);
  return total;
}

FlatSurface graft_cylinder(const FlatSurface& s, const GraftLocus& locus, const Rational& t) {
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "graft width must be non-negative");
  const auto& path = locus.path;
  if (path.empty()) throw Error(ErrorCode::LocusNotEmbedded, "empty locus");
  std::set<int> used_gluings;
  for (EdgeRef e : path) {
    if (e.polygon < 0 || e.polygon >= static_cast<int>(s.polygons().size()) || e.edge < 0 ||
        e.edge >= s.edge_count(e.polygon))
      throw Error(ErrorCode::InvalidArgument, "locus edge does not exist");
    if (s.edge_vector(e).x != 0) throw Error(ErrorCode::LocusNotVertical, "locus edge is not vertical");
    if (!used_gluings.insert(s.gluing_index(e)).second)
      throw Error(ErrorCode::LocusNotEmbedded, "locus crosses the same edge twice");
  }
  const int k = static_cast<int>(path.size());
  std::set<int> visited;
  for (int i = 0; i < k; ++i) {
    const EdgeRef in = path[i], out = path[(i + 1) % k];
    const int n = s.edge_count(in.polygon);
    const int end_class = s.vertex_class_of({in.polygon, (in.edge + 1) % n});
    if (end_class != s.vertex_class_of({out.polygon, out.edge}))
      throw Error(ErrorCode::LocusNotEmbedded, "consecutive locus edges do not meet");
    if (!visited.insert(end_class).second)
      throw Error(ErrorCode::LocusNotEmbedded, "locus passes a point twice");
    if (std::abs(left_angle(s, in, out) - std::numbers::pi) > 1e-9)
      throw Error(ErrorCode::LocusNotEmbedded, "locus turns at a vertex");
  }
  if (t == 0) return s;

  std::vector<Polygon> polygons = s.polygons();
  std::vector<Gluing> gluings;
  for (int g = 0; g < static_cast<int>(s.gluings().size()); ++g)
    if (!used_gluings.count(g)) gluings.push_back(s.gluings()[g]);
  const int first = static_cast<int>(polygons.size());
  for (int i = 0; i < k; ++i) {
    const EdgeRef e = path[i];
    const Vec2 v = s.edge_vector(e);
    const Rational len = abs(v.y);
    const int r = first + i;
    polygons.push_back({{{0, 0}, {t, 0}, {t, len}, {0, len}}});
    const EdgeMap m = s.edge_map(e);
    const int up = sgn(v.y);
    gluings.push_back({e, {r, 3}, up});
    gluings.push_back({m.target, {r, 1}, m.sign * up});
    gluings.push_back({{r, 2}, {first + (i + 1) % k, 0}, 1});
  }
  return FlatSurface::build(std::move(polygons), std::move(gluings), s.markings());
}

TorusPoint graft_torus(TorusPoint tau, std::pair<int, int> curve, double t) {
  const auto [p, q] = curve;
  if (std::gcd(p, q) != 1) throw Error(ErrorCode::InvalidArgument, "curve must be a primitive pair");
  if (!(tau.tau.imag() > 0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in the upper half-plane");
  const std::complex<double> gamma = double(p) + double(q) * tau.tau;
  // a + b tau crosses the curve p b - q a times; each crossing gains t i gamma
  const std::complex<double> push = t * std::complex<double>(0, 1) * gamma;
  const std::complex<double> one = 1.0 - double(q) * push;
  const std::complex<double> tau_image = tau.tau + double(p) * push;
  return {tau_image / one};
}

double branch_width(double mu, double t) {
  if (!(mu > 0) || t < 0) throw Error(ErrorCode::InvalidArgument, "need mu > 0 and t >= 0");
  return t * mu;
}

namespace {

bool horizontal(BranchSide s) { return s == BranchSide::Top || s == BranchSide::Bottom; }

Rational extent(const Branch& b, BranchSide s) { return horizontal(s) ? b.weight : b.height; }

int glue_sign(BranchSide a, BranchSide b) {
  if (horizontal(a) != horizontal(b)) throw Error(ErrorCode::InvalidTrack, "horizontal side glued to a vertical one");
  return a == b ? -1 : 1;
}

struct Segment {
  Rational offset, length;
  int gluing = -1;  // -1 for the implicit annulus closing
  bool is_a = true;
};

using SideKey = std::pair<int, BranchSide>;

std::map<SideKey, std::vector<Segment>> segments_of(const TrainTrackData& track) {
  std::map<SideKey, std::vector<Segment>> out;
  for (int g = 0; g < static_cast<int>(track.gluings.size()); ++g) {
    const auto& sg = track.gluings[g];
    out[{sg.branch_a, sg.side_a}].push_back({sg.offset_a, sg.length, g, true});
    out[{sg.branch_b, sg.side_b}].push_back({sg.offset_b, sg.length, g, false});
  }
  for (int b = 0; b < static_cast<int>(track.branches.size()); ++b) {
    if (track.branches[b].kind != BranchKind::Annulus) continue;
    out[{b, BranchSide::Top}].push_back({0, track.branches[b].weight, -1, true});
    out[{b, BranchSide::Bottom}].push_back({0, track.branches[b].weight, -1, false});
  }
  for (auto& [key, list] : out)
    std::sort(list.begin(), list.end(), [](const Segment& x, const Segment& y) { return x.offset < y.offset; });
  return out;
}

}  // namespace

void validate_track(const TrainTrackData& track) {
  const int nb = static_cast<int>(track.branches.size());
  if (nb == 0) throw Error(ErrorCode::InvalidTrack, "track has no branches");
  for (int b = 0; b < nb; ++b) {
    const auto& br = track.branches[b];
    if (br.weight <= 0 || br.height <= 0)
      throw Error(ErrorCode::InvalidTrack, "branch " + std::to_string(b) + " needs positive weight and height");
    if (br.kind == BranchKind::Rectangle && br.height <= track.min_height)
      throw Error(ErrorCode::InvalidTrack, "branch " + std::to_string(b) + " is not taller than the minimum height");
  }
  for (const auto& g : track.gluings) {
    for (auto [b, side, off] : {std::tuple{g.branch_a, g.side_a, g.offset_a}, std::tuple{g.branch_b, g.side_b, g.offset_b}}) {
      if (b < 0 || b >= nb) throw Error(ErrorCode::InvalidTrack, "gluing names a missing branch");
      if (horizontal(side) && track.branches[b].kind == BranchKind::Annulus)
        throw Error(ErrorCode::InvalidTrack, "annulus branch " + std::to_string(b) + " takes no horizontal gluings");
      if (off < 0 || off + g.length > extent(track.branches[b], side))
        throw Error(ErrorCode::InvalidTrack, "gluing runs off branch " + std::to_string(b));
    }
    if (g.length <= 0) throw Error(ErrorCode::InvalidTrack, "gluing segment must have positive length");
    glue_sign(g.side_a, g.side_b);
  }
  const auto segs = segments_of(track);
  for (int b = 0; b < nb; ++b) {
    for (BranchSide side : {BranchSide::Bottom, BranchSide::Right, BranchSide::Top, BranchSide::Left}) {
      Rational at = 0;
      auto it = segs.find({b, side});
      if (it != segs.end())
        for (const auto& seg : it->second) {
          if (seg.offset != at) break;
          at += seg.length;
        }
      if (at != extent(track.branches[b], side))
        throw Error(ErrorCode::InvalidTrack, "side of branch " + std::to_string(b) + " is not tiled by gluings");
    }
  }
  std::set<std::pair<int, BranchSide>> seen;
  for (int j = 0; j < static_cast<int>(track.pieces.size()); ++j) {
    const auto& piece = track.pieces[j];
    if (piece.sides.empty()) throw Error(ErrorCode::InvalidTrack, "piece without sides");
    CrownEnd crown;
    for (const auto& side : piece.sides) {
      Rational len = 0;
      for (const auto& hb : side) {
        if (hb.branch < 0 || hb.branch >= nb || horizontal(hb.side))
          throw Error(ErrorCode::InvalidTrack, "piece side names a missing half-branch");
        if (!seen.insert({hb.branch, hb.side}).second)
          throw Error(ErrorCode::InvalidTrack, "half-branch assigned to two pieces");
        len += track.branches[hb.branch].height;
      }
      crown.L.push_back(0);
      crown.R.push_back(len);
    }
    const Rational c = crown_residue(crown);
    if (c != piece.residue)
      throw Error(ErrorCode::ResidueMismatch, "piece " + std::to_string(j) + " has side residue " + format_rational(c) +
                                                  " but records " + format_rational(piece.residue));
  }
}

FlatSurface build_Yt(const TrainTrackData& track, const Rational& t) {
  if (t <= 0) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  validate_track(track);
  const auto segs = segments_of(track);
  const int nb = static_cast<int>(track.branches.size());
  std::vector<Polygon> polygons(nb);
  // (gluing, is_a) -> edge; annulus closings keyed by gluing -1 - branch
  std::map<std::pair<int, bool>, EdgeRef> edge_of;
  for (int b = 0; b < nb; ++b) {
    const Rational w = t * track.branches[b].weight, h = track.branches[b].height;
    auto& verts = polygons[b].vertices;
    auto emit = [&](const Segment& seg, Vec2 start) {
      const int key = seg.gluing >= 0 ? seg.gluing : -1 - b;
      edge_of[{key, seg.is_a}] = {b, static_cast<int>(verts.size())};
      verts.push_back(start);
    };
    const auto& bottom = segs.at({b, BranchSide::Bottom});
    for (const auto& seg : bottom) emit(seg, {t * seg.offset, 0});
    const auto& right = segs.at({b, BranchSide::Right});
    for (const auto& seg : right) emit(seg, {w, seg.offset});
    const auto& top = segs.at({b, BranchSide::Top});
    for (auto it = top.rbegin(); it != top.rend(); ++it) emit(*it, {t * (it->offset + it->length), h});
    const auto& left = segs.at({b, BranchSide::Left});
    for (auto it = left.rbegin(); it != left.rend(); ++it) emit(*it, {0, it->offset + it->length});
  }
  std::vector<Gluing> gluings;
  for (int g = 0; g < static_cast<int>(track.gluings.size()); ++g) {
    const auto& sg = track.gluings[g];
    gluings.push_back({edge_of.at({g, true}), edge_of.at({g, false}), glue_sign(sg.side_a, sg.side_b)});
  }
  for (int b = 0; b < nb; ++b)
    if (track.branches[b].kind == BranchKind::Annulus)
      gluings.push_back({edge_of.at({-1 - b, true}), edge_of.at({-1 - b, false}), 1});
  return FlatSurface::build(std::move(polygons), std::move(gluings));
}

namespace {

// Splits every gluing segment straddling position x on the given side.
void split_at(std::vector<SideGluing>& gluings, int branch, BranchSide side, const Rational& x) {
  for (std::size_t i = 0; i < gluings.size(); ++i) {
    SideGluing g = gluings[i];
    const bool on_a = g.branch_a == branch && g.side_a == side && g.offset_a < x && x < g.offset_a + g.length;
    const bool on_b = g.branch_b == branch && g.side_b == side && g.offset_b < x && x < g.offset_b + g.length;
    if (!on_a && !on_b) continue;
    const bool flip = g.side_a == g.side_b;
    // cut position measured along side a
    Rational u;
    if (on_a) {
      u = x - g.offset_a;
    } else {
      u = flip ? Rational(g.offset_b + g.length - x) : Rational(x - g.offset_b);
    }
    SideGluing first = g, second = g;
    first.length = u;
    second.length = g.length - u;
    second.offset_a = g.offset_a + u;
    if (flip) {
      first.offset_b = g.offset_b + g.length - u;
      second.offset_b = g.offset_b;
    } else {
      second.offset_b = g.offset_b + u;
    }
    gluings[i] = first;
    gluings.push_back(second);
  }
}

}  // namespace

TrainTrackData split_branch(const TrainTrackData& track, int b, const Rational& f) {
  if (b < 0 || b >= static_cast<int>(track.branches.size())) throw Error(ErrorCode::InvalidArgument, "no such branch");
  if (!(f > 0 && f < 1)) throw Error(ErrorCode::InvalidArgument, "split fraction must lie in (0, 1)");
  TrainTrackData out = track;
  const Branch old = track.branches[b];
  const Rational x = f * old.weight;
  const int nb = static_cast<int>(out.branches.size());
  out.branches[b].weight = x;
  out.branches.push_back({old.weight - x, old.height, old.kind});
  split_at(out.gluings, b, BranchSide::Top, x);
  split_at(out.gluings, b, BranchSide::Bottom, x);
  auto move = [&](int& branch, BranchSide side, Rational& offset) {
    if (branch != b) return;
    if (side == BranchSide::Right) {
      branch = nb;
    } else if (horizontal(side) && offset >= x) {
      branch = nb;
      offset -= x;
    }
  };
  for (auto& g : out.gluings) {
    move(g.branch_a, g.side_a, g.offset_a);
    move(g.branch_b, g.side_b, g.offset_b);
  }
  out.gluings.push_back({b, BranchSide::Right, 0, nb, BranchSide::Left, 0, old.height});
  for (auto& piece : out.pieces)
    for (auto& side : piece.sides)
      for (auto& hb : side)
        if (hb.branch == b && hb.side == BranchSide::Right) hb.branch = nb;
  return out;
}

// Rectangle branches whose tops are glued to a shuffled row of bottoms and
// whose right sides to a shuffled column of left sides. Retries until the
// result is connected. One piece collects the left halves, one the right.
TrainTrackData random_track(std::mt19937_64& rng, int branches) {
  std::uniform_int_distribution<int> weight(1, 8), height(4, 9);
  for (;;) {
    TrainTrackData track;
    track.min_height = 1;
    for (int b = 0; b < branches; ++b) {
      Rational w(weight(rng), 2), h(height(rng), 3);
      w.canonicalize();
      h.canonicalize();
      track.branches.push_back({w, h});
    }
    auto glue_rows = [&](BranchSide first, BranchSide second, bool horizontal) {
      std::vector<int> order(branches);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      auto size = [&](int b) { return horizontal ? track.branches[b].weight : track.branches[b].height; };
      // walk both rows in step, cutting at every breakpoint of either
      int i = 0, j = 0;
      Rational used_i = 0, used_j = 0;
      while (i < branches && j < branches) {
        const int a = i, b = order[j];
        const Rational len = std::min(size(a) - used_i, size(b) - used_j);
        track.gluings.push_back({a, first, used_i, b, second, used_j, len});
        used_i += len;
        used_j += len;
        if (used_i == size(a)) ++i, used_i = 0;
        if (used_j == size(b)) ++j, used_j = 0;
      }
    };
    glue_rows(BranchSide::Top, BranchSide::Bottom, true);
    glue_rows(BranchSide::Right, BranchSide::Left, false);
    TrackPiece lefts, rights;
    std::vector<Rational> lens;
    for (int b = 0; b < branches; ++b) {
      lefts.sides.push_back({{b, BranchSide::Left}});
      rights.sides.push_back({{b, BranchSide::Right}});
      lens.push_back(track.branches[b].height);
    }
    Rational alt = 0;
    for (int b = 0; b < branches; ++b) alt += (b % 2 == 0 ? 1 : -1) * lens[b];
    lefts.residue = rights.residue = branches % 2 == 0 ? abs(alt) : Rational(0);
    track.pieces = {lefts, rights};
    try {
      build_Yt(track, 1);
      return track;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Disconnected) throw;
    }
  }
}

}  // namespace flatlab
