#include <algorithm>
#include <cmath>
#include <numbers>

#include "flatlab/qc.hpp"

namespace flatlab::qc {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

}  // namespace

CircleMap::CircleMap(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw Error(ErrorCode::InvalidArgument, "circle map needs at least two samples");
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    const double next = (k + 1 < samples_.size()) ? samples_[k + 1] : samples_[0] + 1;
    if (!std::isfinite(samples_[k]) || !(next > samples_[k]))
      throw Error(ErrorCode::InvalidArgument, "lift is not strictly increasing with h(x + 1) = h(x) + 1");
  }
}

CircleMap CircleMap::from_lift(const std::function<double(double)>& lift, int n) {
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = lift(static_cast<double>(k) / n);
  return CircleMap(std::move(s));
}

CircleMap CircleMap::identity(int n) {
  return from_lift([](double x) { return x; }, n);
}

CircleMap CircleMap::rotation(double turns, int n) {
  return from_lift([turns](double x) { return x + turns; }, n);
}

double CircleMap::operator()(double x) const {
  const int n = size();
  const double shift = std::floor(x);
  const double u = (x - shift) * n;
  int k = static_cast<int>(u);
  if (k >= n) k = n - 1;
  const double frac = u - k;
  const double a = samples_[k];
  const double b = (k + 1 < n) ? samples_[k + 1] : samples_[0] + 1;
  return shift + a + frac * (b - a);
}

double CircleMap::inverse(double y) const {
  const int n = size();
  const double shift = std::floor(y - samples_[0]);
  const double v = y - shift;  // in [s0, s0 + 1)
  // last sample not above v
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), v);
  const int k = static_cast<int>(it - samples_.begin()) - 1;
  const double a = samples_[k];
  const double b = (k + 1 < n) ? samples_[k + 1] : samples_[0] + 1;
  return shift + (k + (v - a) / (b - a)) / n;
}

CircleMap compose(const CircleMap& outer, const CircleMap& inner) {
  const int n = std::max(outer.size(), inner.size());
  return CircleMap::from_lift([&](double x) { return outer(inner(x)); }, n);
}

CircleMap inverse(const CircleMap& h) {
  return CircleMap::from_lift([&](double y) { return h.inverse(y); }, h.size());
}

double quasisymmetry_constant(const CircleMap& h, const QuasisymmetryOptions& opt) {
  if (opt.points < 1 || opt.spans < 1) throw Error(ErrorCode::InvalidArgument, "need positive sample counts");
  double worst = 1;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (int a = 0; a < opt.points; ++a) {
    const double x = static_cast<double>(a) / opt.points;
    const double hx = h(x);
    for (int k = 1; k <= opt.spans; ++k) {
      const double t = static_cast<double>(k) / (2.0 * opt.spans);
      const double rho = (h(x + t) - hx) / (hx - h(x - t));
      worst = std::max(worst, std::max(rho, 1 / rho));
    }
  }
  return worst;
}

double mean_shift(const CircleMap& h, int nodes) {
  if (nodes < 1) throw Error(ErrorCode::QuadratureFailure, "quadrature needs at least one node");
  double sum = 0;
  for (int k = 0; k < nodes; ++k) sum += h((k + 0.5) / nodes);
  return sum / nodes - 0.5;
}

cplx beurling_ahlfors_at(const CircleMap& h, cplx z, int nodes) {
  if (nodes < 1) throw Error(ErrorCode::QuadratureFailure, "quadrature needs at least one node");
  const double x = z.real(), y = z.imag();
  if (y < 0) throw Error(ErrorCode::InvalidArgument, "extension is defined on the closed upper half-plane");
  if (y == 0) return h(x);
  double re = 0, im = 0;
  for (int k = 0; k < nodes; ++k) {
    const double t = (k + 0.5) / nodes;
    const double a = h(x + t * y), b = h(x - t * y);
    re += a + b;
    im += a - b;
  }
  re /= 2.0 * nodes;
  im /= nodes;
  if (!std::isfinite(re) || !std::isfinite(im) || !(im > 0))
    throw Error(ErrorCode::QuadratureFailure, "extension integral is not finite or leaves the half-plane");
  return {re, im};
}

GridMap beurling_ahlfors(const CircleMap& h, const ExtensionOptions& opt) {
  if (opt.nodes < 1) throw Error(ErrorCode::QuadratureFailure, "quadrature needs at least one node");
  return sample(Domain::rectangle(0, 1, 0, 1), opt.N, opt.M,
                [&](cplx z) { return beurling_ahlfors_at(h, z, opt.nodes); });
}

cplx interpolate_identity_at(const CircleMap& h, double D, double c0, cplx z, int nodes) {
  const double r = std::abs(z);
  if (r > 1) throw Error(ErrorCode::InvalidArgument, "point outside the unit disk");
  if (r <= std::exp(-kTwoPi * D)) return z;
  // w = x + iy with z = e^{2 pi i w}
  // samples on the unit circle may come back a rounding error inside it
  const double x = std::arg(z) / kTwoPi, y = (1 - r < 1e-14) ? 0.0 : -std::log(r) / kTwoPi;
  if (y >= D) return z;
  cplx F;
  if (y <= 1)
    F = beurling_ahlfors_at(h, {x, y}, nodes);
  else
    F = cplx(x, y) + c0 * (D - y) / (D - 1);
  return std::exp(cplx(0, kTwoPi) * F);
}

GridMap interpolate_identity(const CircleMap& h, double D, const ExtensionOptions& opt) {
  if (!(D > 1) || !std::isfinite(D)) throw Error(ErrorCode::DTooSmall, "interpolation needs D > 1");
  const double c0 = mean_shift(h, opt.nodes);
  const double r0 = std::exp(-kTwoPi * (D + 0.5));
  auto g = sample(Domain::annulus(r0, 1, true), opt.N, opt.M,
                  [&](cplx z) { return interpolate_identity_at(h, D, c0, z, opt.nodes); });
  return g;
}

CircleMap boundary_trace(const GridMap& m, double tol) {
  if (m.domain.kind != Domain::Kind::Annulus || m.domain.r1 != 1)
    throw Error(ErrorCode::InvalidArgument, "boundary trace needs an annulus grid with outer radius 1");
  const int j = m.M - 1;
  std::vector<double> lift(m.N);
  for (int i = 0; i < m.N; ++i) {
    const cplx v = m.at(i, j);
    if (!(std::abs(std::abs(v) - 1) <= tol))
      throw Error(ErrorCode::BoundaryNotPreserved,
                  "outer sample " + std::to_string(i) + " has modulus " + std::to_string(std::abs(v)));
    double a = std::arg(v) / kTwoPi;
    if (i == 0) {
      lift[0] = a;
      continue;
    }
    // continue the angle from the previous sample
    a += std::round(lift[i - 1] - a);
    lift[i] = a;
  }
  // degree one: the last step back to the start must close up with +1
  if (!(lift[0] + 1 - lift[m.N - 1] > 0) || lift[0] + 1 - lift[m.N - 1] >= 1)
    throw Error(ErrorCode::BoundaryNotPreserved, "boundary trace is not a degree one homeomorphism");
  try {
    return CircleMap(std::move(lift));
  } catch (const Error&) {
    throw Error(ErrorCode::BoundaryNotPreserved, "boundary trace is not monotone");
  }
}

}  // namespace flatlab::qc
