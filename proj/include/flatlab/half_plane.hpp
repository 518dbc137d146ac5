#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatlab/vertical_graph.hpp"

namespace flatlab {

/// n half-planes with the notch [a_i, b_i] cut from the boundary of the i-th;
/// [b_i, inf) is glued to (-inf, a_{i+1}] cyclically.
struct PlanarEnd {
  std::vector<std::pair<Rational, Rational>> notches;
};

/// Crown with n boundary geodesics. Geodesic i carries the heights L[i] and
/// R[i] (relative to its basepoint) where one chosen horocyclic leaf of the
/// spike before it, resp. after it, meets it.
struct CrownEnd {
  std::vector<Rational> L;
  std::vector<Rational> R;
};

/// |sum (-1)^{i+1} (b_i - a_i)| for even n, 0 for odd n.
Rational metric_residue(const PlanarEnd& e);

/// |sum (-1)^{i+1} (R_i - L_i)| for even n, 0 for odd n.
Rational crown_residue(const CrownEnd& c);

/// Basepoints and horocyclic leaves making the truncated geodesic sides
/// {H, ..., H, H + C}. Leaves may only move deeper into the spikes than the
/// given ones; a smaller H raises HTooSmall. Lengths are listed by geodesic.
std::vector<Rational> normalize_truncation(const CrownEnd& c, const Rational& H);

struct HalfPlaneAttachment {
  int side = 0;
  bool cylinder = false;
};

/// A boundary component at infinity: the sides of one boundary walk (a planar
/// end) or a single cycle side (a cylinder end).
struct EndInfo {
  std::vector<int> sides;
  bool cylinder = false;
  int component = 0;
};

/// Metric spine with half-planes on its open sides and half-infinite
/// cylinders on its cycle sides. Feelers of the spine are read as infinite rays.
struct GeneralizedHalfPlaneSurface {
  VerticalGraph spine;
  std::vector<Side> sides;
  std::vector<HalfPlaneAttachment> attachments;
  std::vector<EndInfo> ends;
  int components = 0;

  int half_planes() const;
  int cylinders() const;
};

struct EndData {
  int order = 0;
  double residue = 0;
  std::optional<Rational> exact_residue;  // planar ends only
  std::optional<std::complex<double>> leading_term;  // needs a chart; absent otherwise
};

struct Truncation {
  int end = 0;
  Rational H;
  bool closed = false;
  std::vector<Rational> side_lengths;  // vertical sides; the circumference for a closed end
  std::vector<Rational> widths;        // H/2 per rectangle or annulus
  bool complement_is_punctured_disk = true;
};

/// Throws UnattachableSide when a prong carries neither an edge nor a ray.
GeneralizedHalfPlaneSurface build_hps(const VerticalGraph& spine);

EndData end_local_data(const GeneralizedHalfPlaneSurface& s, int end);

Truncation truncate(const GeneralizedHalfPlaneSurface& s, int end, const Rational& H);

/// Appended graph at L with feelers extended to rays, then build_hps.
GeneralizedHalfPlaneSurface y_infinity(const FlatSurface& s, const Rational& L);

/// |alternating sum| of side lengths around an end; 0 for an odd count.
Rational limit_residue_from_lengths(const std::vector<Rational>& lengths);

/// Residue of the end made of `end_sides`: the alternating sum of their
/// saddle connection lengths, or circumference / 2 pi for one cycle side.
double limit_residue_from_graph(const VerticalGraph& g, const std::vector<Side>& end_sides);

/// Identification between two half-planes of one component, read on their
/// finite boundary parts. Intervals that stay adjacent on both sides are merged.
struct BoundaryExchange {
  int half_plane_a = 0;
  int half_plane_b = 0;
  std::vector<Rational> lengths;  // merged intervals in the order of side a
  std::vector<int> permutation;   // position of each interval on side b
  bool self_glued = false;        // some interval occurs twice on one side
};

/// Throws InvalidArgument unless the component has exactly two half-planes.
BoundaryExchange boundary_exchange(const GeneralizedHalfPlaneSurface& s, int component);

/// |f'(0)|^{2-n} a_n.
std::complex<double> pullback_leading_term(std::complex<double> a_n, int n, double fprime0);

/// (H0 2^i)^{n/2}.
double truncation_height_schedule(double H0, int n, int i);

/// Ends of even order with nonzero residue. Under the appendix constraint read
/// literally ("residue zero if the order is even") these would be invalid; the
/// odd-count convention used here allows them, so they are only reported.
std::vector<std::string> parity_warnings(const GeneralizedHalfPlaneSurface& s);

}  // namespace flatlab
