#pragma once

#include <complex>

#include "flatlab/flat_surface.hpp"

namespace flatlab {

/// Horizontal stretch (x, y) -> (k x, y) with k = e^{2t}. Exact when k is
/// rational. Throws InvalidScale for k <= 0.
FlatSurface flow_by_factor(const FlatSurface& s, const Rational& k);

/// Same map with k = e^{2t}; the double value of k is converted exactly.
FlatSurface flow(const FlatSurface& s, double t);

/// Flat torus C / (Z + tau Z).
struct TorusPoint {
  std::complex<double> tau;
};

/// Half the hyperbolic distance between the two moduli in the upper half-plane.
double torus_teich_distance(TorusPoint a, TorusPoint b);

}  // namespace flatlab
