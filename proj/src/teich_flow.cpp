#include "flatlab/teich_flow.hpp"

#include <cmath>

namespace flatlab {

FlatSurface flow_by_factor(const FlatSurface& s, const Rational& k) {
  if (sgn(k) <= 0) throw Error(ErrorCode::InvalidScale, "scale factor must be positive, got " + format_rational(k));
  std::vector<Polygon> polys = s.polygons();
  for (auto& p : polys)
    for (auto& z : p.vertices) z.x *= k;
  return FlatSurface::build(std::move(polys), s.gluings(), s.markings());
}

FlatSurface flow(const FlatSurface& s, double t) {
  const double k = std::exp(2 * t);
  if (!std::isfinite(k) || k <= 0) throw Error(ErrorCode::InvalidScale, "e^{2t} is not a positive finite number");
  if (t == 0) return s;
  return flow_by_factor(s, rational_from_double(k));
}

double torus_teich_distance(TorusPoint a, TorusPoint b) {
  const double ya = a.tau.imag(), yb = b.tau.imag();
  if (!(ya > 0) || !(yb > 0)) throw Error(ErrorCode::InvalidArgument, "torus modulus must lie in the upper half-plane");
  const double d2 = std::norm(a.tau - b.tau);
  // acosh(1 + x) loses digits for tiny x; use log1p form
  const double x = d2 / (2 * ya * yb);
  return 0.5 * std::log1p(x + std::sqrt(x * (x + 2)));
}

}  // namespace flatlab
