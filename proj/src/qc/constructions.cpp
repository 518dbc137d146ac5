#include <algorithm>
#include <cmath>
#include <numbers>

#include "flatlab/qc.hpp"

namespace flatlab::qc {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// trace of a map on the unit circle, sampled at n angles
CircleMap circle_trace(const PlaneMap& f, int n) {
  GridMap g{Domain::annulus(0.5, 1), n, 3, std::vector<cplx>(static_cast<std::size_t>(n) * 3)};
  for (int i = 0; i < n; ++i) {
    const cplx v = f(std::polar(1.0, kTwoPi * i / n));
    for (int j = 0; j < 3; ++j) g.at(i, j) = v;
  }
  return boundary_trace(g, 1e-9);
}

DilatationReport merge(const DilatationReport& a, const DilatationReport& b) {
  DilatationReport r;
  r.N = a.N;
  r.M = a.M + b.M;
  r.field = a.field;
  r.field.insert(r.field.end(), b.field.begin(), b.field.end());
  std::vector<double> sorted = r.field;
  std::sort(sorted.begin(), sorted.end());
  r.supK = sorted.back();
  for (double q : {0.5, 0.9, 0.99, 1.0})
    r.quantiles.emplace_back(q, sorted[static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)))]);
  return r;
}

}  // namespace

double modulus(double r_in, double r_out) {
  if (!(r_in > 0) || !(r_out > r_in)) throw Error(ErrorCode::InvalidArgument, "annulus needs 0 < r_in < r_out");
  return std::log(r_out / r_in) / kTwoPi;
}

cplx interpolate_with_conformal_at(const PlaneMap& f, const ConformalMap& g, double r, double inner, double seam,
                                   cplx z) {
  const double rho = std::abs(z);
  if (rho <= inner) return f(z);
  if (rho < seam) {
    // f(z) = z e^u; fade u out linearly in log |z|. Needs f(z)/z off the negative axis.
    const double lambda = std::log(seam / rho) / std::log(seam / inner);
    return z * std::exp(lambda * std::log(f(z) / z));
  }
  const double chi = std::log(rho / seam) / std::log(r / seam);
  if (chi >= 1) return g.value(z);
  return z + chi * (g.value(z) - z);
}

Interpolation interpolate_with_conformal(const PlaneMap& f, const ConformalMap& g, double r,
                                         const InterpolationOptions& opt) {
  if (!(r > 0 && r < 1)) throw Error(ErrorCode::InvalidArgument, "need 0 < r < 1");
  if (!(opt.D_outer > 0 && opt.D_inner > 0)) throw Error(ErrorCode::InvalidArgument, "band moduli must be positive");
  if (std::abs(g.value(0)) > 1e-12 || std::abs(g.derivative(0) - 1.0) > 1e-9)
    throw Error(ErrorCode::DerivativeNotNormalized, "conformal map must satisfy g(0) = 0 and g'(0) = 1");
  if (std::abs(f(0)) > 1e-12) throw Error(ErrorCode::InvalidArgument, "f must fix 0");
  Interpolation out;
  out.seam_radius = r * std::exp(-kTwoPi * opt.D_outer);
  out.inner_radius = out.seam_radius * std::exp(-kTwoPi * opt.D_inner);
  const double inner = out.inner_radius, seam = out.seam_radius;
  out.map = sample(Domain::annulus(inner * std::exp(-kTwoPi * 0.25), r, true), opt.N, opt.M,
                   [&](cplx z) { return interpolate_with_conformal_at(f, g, r, inner, seam, z); });
  out.report = dilatation(out.map);
  return out;
}

void check_good_boundary(const GoodBoundary& fb, double l1, double l2, double h, int samples) {
  if (!(h > 0) || !(l1 > h) || !(l2 > h))
    throw Error(ErrorCode::NotGoodBoundary, "horizontal sides must be longer than the height");
  if (!(std::abs(l1 - l2) < fb.A)) throw Error(ErrorCode::NotGoodBoundary, "|l1 - l2| must be below A");
  if (!(fb.A / h <= fb.epsilon)) throw Error(ErrorCode::NotGoodBoundary, "A / h exceeds epsilon");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  const double slack = 1e-12;
  for (const auto* side : {&fb.bottom, &fb.top}) {
    double lo = 0, hi = 0, prev = 0;
    for (int k = 0; k <= samples; ++k) {
      const double x = l1 * k / samples, fx = (*side)(x);
      if (!std::isfinite(fx)) throw Error(ErrorCode::NotGoodBoundary, "boundary map is not finite");
      const double drift = fx - x;
      if (k == 0) {
        lo = hi = drift;
      } else {
        const double slope = (fx - prev) / (l1 / samples);
        if (!(std::abs(slope - 1) <= fb.epsilon + slack))
          throw Error(ErrorCode::NotGoodBoundary, "derivative off by more than epsilon near x = " + std::to_string(x));
        lo = std::min(lo, drift);
        hi = std::max(hi, drift);
      }
      prev = fx;
    }
    if (hi - lo > fb.A + slack) throw Error(ErrorCode::NotGoodBoundary, "additive length error exceeds A");
  }
}

GridMap extend_good_rectangle_map(const GoodBoundary& fb, double l1, double l2, double h, int N, int M) {
  check_good_boundary(fb, l1, l2, h);
  // pin the corners so the vertical sides go over isometrically
  auto pinned = [&](const std::function<double(double)>& f) {
    const double a = f(0), b = f(l1) - l2;
    return [=](double x) { return f(x) - (1 - x / l1) * a - (x / l1) * b; };
  };
  const auto bottom = pinned(fb.bottom), top = pinned(fb.top);
  return sample(Domain::rectangle(0, l1, 0, h), N, M, [&](cplx z) {
    const double s = z.imag() / h;
    return cplx((1 - s) * bottom(z.real()) + s * top(z.real()), z.imag());
  });
}

SewnAnnulus sew_annuli(const RoundAnnulusMap& a1, const RoundAnnulusMap& a2, const CircleMap& gluing,
                       const SewingOptions& opt) {
  if (a1.r_in != 1 || a1.s_in != 1 || a2.r_out != 1 || a2.s_out != 1)
    throw Error(ErrorCode::InvalidArgument, "the sewing circle must be |z| = 1 on both halves");
  if (!(opt.epsilon > 0 && opt.epsilon < 1)) throw Error(ErrorCode::InvalidArgument, "need 0 < epsilon < 1");
  const double need = std::log(1 / opt.epsilon) / kTwoPi;
  const double mA1 = modulus(a1.r_in, a1.r_out), mB1 = modulus(a1.s_in, a1.s_out);
  const double mA2 = modulus(a2.r_in, a2.r_out), mB2 = modulus(a2.s_in, a2.s_out);
  for (double m : {mA1, mB1, mA2, mB2})
    if (!(m > need))
      throw Error(ErrorCode::ModulusTooSmall,
                  "modulus " + std::to_string(m) + " is not above ln(1/epsilon) / 2 pi = " + std::to_string(need));
  // the correction is interpolated to the identity across B2, which needs D > 1
  if (!(mB2 > 1)) throw Error(ErrorCode::ModulusTooSmall, "inner target needs modulus above 1");

  const int n = 4096;
  const CircleMap k1 = circle_trace(a1.map, n), k2 = circle_trace(a2.map, n);
  SewnAnnulus out;
  out.correction = compose(gluing, compose(k1, inverse(k2)));
  const CircleMap& c = out.correction;
  const double c0 = mean_shift(c);
  const double D = mB2;
  const PlaneMap inner_map = [&](cplx z) {
    cplx w = a2.map(z);
    // the image of the outer circle may sit a rounding error outside the disk
    if (std::abs(w) > 1) w /= std::abs(w);
    return interpolate_identity_at(c, D, c0, w);
  };
  out.outer = sample(Domain::annulus(1, a1.r_out, true), opt.N, opt.M, a1.map);
  out.inner = sample(Domain::annulus(a2.r_in, 1, true), opt.N, opt.M, inner_map);
  out.report = merge(dilatation(out.inner), dilatation(out.outer));
  return out;
}

}  // namespace flatlab::qc
