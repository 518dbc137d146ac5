#pragma once

#include <random>
#include <utility>
#include <vector>

#include "flatlab/flat_surface.hpp"
#include "flatlab/teich_flow.hpp"

namespace flatlab {

/// Closed vertical curve made of polygon edges, listed in the order they are
/// travelled. Each edge is travelled in its own boundary direction, so its
/// polygon lies on the left of the curve.
struct GraftLocus {
  std::vector<EdgeRef> path;
};

Rational locus_length(const FlatSurface& s, const GraftLocus& locus);

/// Cuts along the locus and inserts a euclidean cylinder of width t. The
/// left bank keeps its coordinates; the right bank moves t to the right.
/// Throws LocusNotVertical or LocusNotEmbedded.
FlatSurface graft_cylinder(const FlatSurface& s, const GraftLocus& locus, const Rational& t);

/// Grafting of C / (Z + tau Z) along the (p, q) curve p + q tau. The inserted
/// cylinder has width t |p + q tau|; the result is written in the image of
/// the marking (1, tau).
TorusPoint graft_torus(TorusPoint tau, std::pair<int, int> curve, double t);

/// Euclidean width t mu of a branch after grafting.
double branch_width(double mu, double t);

enum class BranchKind { Rectangle, Annulus };
enum class BranchSide { Bottom, Right, Top, Left };

struct Branch {
  Rational weight;  // transverse measure mu
  Rational height;
  BranchKind kind = BranchKind::Rectangle;
};

/// Identifies a segment on one branch side with a segment on another.
/// Offsets run left to right on horizontal sides (in weight units) and bottom
/// to top on vertical sides (in height units). Top/Bottom and Left/Right
/// pairs are translations; Top/Top, Bottom/Bottom, Left/Left and Right/Right
/// are half-turns, under which offset_a + u meets offset_b + length - u.
struct SideGluing {
  int branch_a = 0;
  BranchSide side_a = BranchSide::Top;
  Rational offset_a;
  int branch_b = 0;
  BranchSide side_b = BranchSide::Bottom;
  Rational offset_b;
  Rational length;
};

struct HalfBranch {
  int branch = 0;
  BranchSide side = BranchSide::Left;  // Left or Right
};

/// Complementary piece: its sides, each a run of half-branches, and the
/// residue of its end.
struct TrackPiece {
  std::vector<std::vector<HalfBranch>> sides;
  Rational residue;
};

/// Weighted train track with explicit heights. Annulus branches close up on
/// themselves (top glued to bottom) and take no horizontal gluings.
struct TrainTrackData {
  std::vector<Branch> branches;
  std::vector<SideGluing> gluings;
  std::vector<TrackPiece> pieces;
  Rational min_height = 0;  // rectangle branches must be taller than this
};

/// Throws InvalidTrack for malformed data and ResidueMismatch when a piece's
/// side lengths do not have the recorded residue.
void validate_track(const TrainTrackData& track);

/// Rectangles of width t mu and recorded height glued by the track's pattern.
/// The 2 pi of the model width is absorbed into t.
FlatSurface build_Yt(const TrainTrackData& track, const Rational& t);

/// Cuts branch b lengthwise into parallel branches of weights f mu and
/// (1 - f) mu, 0 < f < 1. Yields the same surfaces under build_Yt.
TrainTrackData split_branch(const TrainTrackData& track, int b, const Rational& f);

/// Random rectangle track: tops glued to a shuffled row of bottoms, right
/// sides to a shuffled column of left sides, redrawn until connected. Weights
/// are in (1/2)Z, heights in (1/3)Z above 1.
TrainTrackData random_track(std::mt19937_64& rng, int branches);

}  // namespace flatlab
