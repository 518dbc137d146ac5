#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "flatlab/error.hpp"

namespace flatlab::qc {

using cplx = std::complex<double>;
using PlaneMap = std::function<cplx(cplx)>;

/// Sampling domain. Rectangle grids run i along x and j along y, both ends
/// included. Annulus grids run i over the angle 2 pi i / N (periodic) and j
/// over the radius from r0 to r1; radii are uniform or geometric.
struct Domain {
  enum class Kind { Rectangle, Annulus };
  Kind kind = Kind::Rectangle;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double r0 = 0, r1 = 1;
  bool log_radial = false;
  std::string description;

  static Domain rectangle(double x0, double x1, double y0, double y1);
  static Domain annulus(double r0, double r1, bool log_radial = false);
};

struct GridMap {
  Domain domain;
  int N = 0, M = 0;
  std::vector<cplx> values;  // values[j * N + i]

  cplx point(int i, int j) const;
  double radius(int j) const;  // annulus grids
  cplx& at(int i, int j) { return values[static_cast<std::size_t>(j) * N + i]; }
  const cplx& at(int i, int j) const { return values[static_cast<std::size_t>(j) * N + i]; }
};

/// Samples f on the grid. Throws InvalidArgument for bad sizes or spacing.
GridMap sample(const Domain& d, int N, int M, const PlaneMap& f);
GridMap sample_serial(const Domain& d, int N, int M, const PlaneMap& f);

struct DilatationReport {
  double supK = 1;
  int N = 0, M = 0;            // field dimensions (interior cells)
  std::vector<double> field;   // field[j * N + i]
  std::vector<std::pair<double, double>> quantiles;  // (level, K)
};

/// K = (|f_z| + |f_zbar|) / (|f_z| - |f_zbar|) from central differences at
/// interior samples. Throws DegenerateJacobian when the Jacobian is not
/// positive or a value is not finite.
DilatationReport dilatation(const GridMap& m);
/// Single-threaded reference; agrees bit for bit with dilatation.
DilatationReport dilatation_serial(const GridMap& m);

/// Degree one circle homeomorphism given by its lift on [0, 1) at n equally
/// spaced samples; evaluated by periodic linear interpolation.
class CircleMap {
 public:
  CircleMap() = default;
  explicit CircleMap(std::vector<double> samples);
  static CircleMap from_lift(const std::function<double(double)>& lift, int n = 4096);
  static CircleMap identity(int n = 4096);
  static CircleMap rotation(double turns, int n = 4096);

  double operator()(double x) const;
  double inverse(double y) const;
  const std::vector<double>& samples() const { return samples_; }
  int size() const { return static_cast<int>(samples_.size()); }

 private:
  std::vector<double> samples_;
};

CircleMap compose(const CircleMap& outer, const CircleMap& inner);
CircleMap inverse(const CircleMap& h);

struct QuasisymmetryOptions {
  int points = 512;  // basepoints x
  int spans = 256;   // half-widths t = k / (2 spans), k = 1..spans
};

/// Largest max(rho, 1/rho) over the sampled symmetric triples.
double quasisymmetry_constant(const CircleMap& h, const QuasisymmetryOptions& opt = {});

struct ExtensionOptions {
  int nodes = 2048;  // midpoint rule
  int N = 128, M = 128;
};

/// c0 = int_0^1 h(t) dt - 1/2.
double mean_shift(const CircleMap& h, int nodes = 2048);
/// Extension of the lift to the upper half-plane at one point.
cplx beurling_ahlfors_at(const CircleMap& h, cplx z, int nodes = 2048);
/// The extension on [0, 1] x [0, 1]. Throws QuadratureFailure.
GridMap beurling_ahlfors(const CircleMap& h, const ExtensionOptions& opt = {});

/// Disk map that is h on the unit circle and the identity on |z| <= e^{-2 pi D}.
/// Sampled on a geometric polar grid reaching radius e^{-2 pi (D + 1/2)}.
/// Throws DTooSmall for D <= 1.
GridMap interpolate_identity(const CircleMap& h, double D, const ExtensionOptions& opt = {});
/// Pointwise form of the same map.
cplx interpolate_identity_at(const CircleMap& h, double D, double c0, cplx z, int nodes = 2048);

struct ConformalMap {
  PlaneMap value;
  PlaneMap derivative;
};

struct InterpolationOptions {
  double D_outer = 1.5;  // log-modulus (over 2 pi) of the band fixing g near 0
  double D_inner = 1.5;  // log-modulus of the band blending f into the identity
  int N = 256, M = 256;
};

struct Interpolation {
  GridMap map;
  double inner_radius = 0;  // map equals f on |z| <= inner_radius
  double seam_radius = 0;   // map is the identity on |z| = seam_radius
  DilatationReport report;
};

/// Map on B_r that is f near 0 and g on |z| = r. Throws
/// DerivativeNotNormalized unless g(0) = 0 and g'(0) = 1, and InvalidArgument
/// unless f(0) = 0.
Interpolation interpolate_with_conformal(const PlaneMap& f, const ConformalMap& g, double r,
                                         const InterpolationOptions& opt = {});
cplx interpolate_with_conformal_at(const PlaneMap& f, const ConformalMap& g, double r, double inner,
                                   double seam, cplx z);

/// Boundary data for a map between [0, l1] x [0, h] and [0, l2] x [0, h]:
/// where the bottom and top sides go.
struct GoodBoundary {
  std::function<double(double)> bottom, top;
  double epsilon = 0, A = 0;
};

/// Throws NotGoodBoundary when the rectangles or the boundary map miss the
/// hypotheses of the extension lemma.
void check_good_boundary(const GoodBoundary& fb, double l1, double l2, double h, int samples = 4096);
GridMap extend_good_rectangle_map(const GoodBoundary& fb, double l1, double l2, double h, int N = 256, int M = 256);

/// Circle map read off the outer row of an annulus grid with r1 = 1. Throws
/// BoundaryNotPreserved when that row leaves the unit circle.
CircleMap boundary_trace(const GridMap& m, double tol = 1e-9);

/// Map between round annuli. The sewing circle is |z| = 1 on both sides.
struct RoundAnnulusMap {
  double r_in = 0, r_out = 1;  // domain radii
  double s_in = 0, s_out = 1;  // target radii
  PlaneMap map;
};

struct SewingOptions {
  double epsilon = 0.01;
  int N = 256, M = 128;
};

struct SewnAnnulus {
  GridMap outer, inner;   // the two halves, each in its own round chart
  CircleMap correction;   // boundary correction applied to the inner half
  DilatationReport report;  // supK over both halves
};

/// a1 maps {1 <= |z| <= R} into {1 <= |z| <= S}; a2 maps {r <= |z| <= 1}
/// into {s <= |z| <= 1}. gluing takes the sewing circle of the first target
/// to that of the second. The inner half is corrected so the halves match
/// across the seam. Throws ModulusTooSmall or BoundaryNotPreserved.
SewnAnnulus sew_annuli(const RoundAnnulusMap& a1, const RoundAnnulusMap& a2, const CircleMap& gluing,
                       const SewingOptions& opt = {});

double modulus(double r_in, double r_out);

/// Least squares slope of (supK - 1) against epsilon through the origin.
double fit_constant(const std::vector<std::pair<double, double>>& eps_supK);

std::string field_csv(const DilatationReport& r);
std::string quantiles_csv(const DilatationReport& r);

}  // namespace flatlab::qc
