#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "flatlab/qc.hpp"

using namespace flatlab;
using namespace flatlab::qc;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0, 1);

PlaneMap beltrami(double mu) {
  return [mu](cplx z) { return z + mu * std::conj(z); };
}

// modulus kept, angle pushed by z + mu conj(z): preserves every round circle
PlaneMap circle_preserving(double mu) {
  return [mu](cplx z) {
    const cplx u = z + mu * std::conj(z);
    return std::abs(z) * u / std::abs(u);
  };
}

DilatationReport on_square(const PlaneMap& f, int n, double half = 1) {
  return dilatation(sample(Domain::rectangle(-half, half, -half, half), n, n, f));
}

// lift x + sum a_k sin(2 pi k x) / (2 pi k) + shift with sum |a_k| < 1
CircleMap random_circle_map(std::mt19937_64& rng, std::function<double(double)>* lift_out = nullptr) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(4);
  double total = 0;
  for (auto& x : a) total += std::abs(x = u(rng));
  for (auto& x : a) x *= 0.8 / total;
  const double shift = u(rng) / 2;
  auto lift = [a, shift](double x) {
    double y = x + shift;
    for (int k = 1; k <= 4; ++k) y += a[k - 1] * std::sin(2 * kPi * k * x) / (2 * kPi * k);
    return y;
  };
  if (lift_out) *lift_out = lift;
  return CircleMap::from_lift(lift, 4096);
}

double closed_form_strip_K(double c0, double D) {
  const double a = std::abs(c0) / (D - 1), s = std::sqrt(4 + a * a);
  return (s + a) / (s - a);
}

}  // namespace

TEST_CASE("dilatation of affine maps") {
  CHECK(on_square([](cplx z) { return z; }, 64).supK == doctest::Approx(1).epsilon(1e-9));
  const auto stretch = on_square([](cplx z) { return cplx(2 * z.real(), z.imag()); }, 256);
  CHECK(std::abs(stretch.supK - 2) < 1e-6);
  const auto b = on_square(beltrami(0.1), 256);
  CHECK(std::abs(b.supK - 1.1 / 0.9) < 1e-6);
  CHECK(b.N == 254);
  CHECK(b.field.size() == 254u * 254u);
  CHECK(b.quantiles.back().second == b.supK);
}

TEST_CASE("dilatation rejects folds and collapses") {
  CHECK_THROWS_WITH_AS(on_square([](cplx z) { return std::conj(z); }, 16), doctest::Contains("DegenerateJacobian"),
                       Error);
  CHECK_THROWS_WITH_AS(on_square([](cplx) { return cplx(1, 1); }, 16), doctest::Contains("DegenerateJacobian"), Error);
  CHECK_THROWS_AS(on_square([](cplx) { return cplx(NAN, 0); }, 16), Error);
  CHECK_THROWS_AS(sample(Domain::rectangle(0, 0, 0, 1), 8, 8, beltrami(0)), Error);
}

TEST_CASE("dilatation converges at second order") {
  // polar sampling makes the affine map nonlinear in the grid coordinates
  for (double mu : {0.05, 0.2}) {
    const double exact = (1 + mu) / (1 - mu);
    std::vector<double> err;
    for (int n : {32, 64, 128}) err.push_back(std::abs(dilatation(sample(Domain::annulus(0.5, 1), n, n, beltrami(mu))).supK - exact));
    for (int k = 0; k + 1 < static_cast<int>(err.size()); ++k) {
      const double ratio = err[k] / err[k + 1];
      CHECK(ratio >= 3.5);
      CHECK(ratio <= 4.5);
    }
  }
}

TEST_CASE("parallel and serial kernels agree bit for bit") {
  const PlaneMap f = [](cplx z) { return z + 0.1 * std::conj(z) * z + 0.05 * z * z * z; };
  for (const Domain& d : {Domain::rectangle(-0.5, 0.7, -0.3, 0.4), Domain::annulus(0.2, 0.9), Domain::annulus(0.01, 1, true)}) {
    const auto a = sample(d, 97, 61, f), b = sample_serial(d, 97, 61, f);
    CHECK(a.values == b.values);
    const auto ra = dilatation(a), rb = dilatation_serial(a);
    CHECK(ra.field == rb.field);
    CHECK(ra.supK == rb.supK);
    CHECK(ra.quantiles == rb.quantiles);
  }
}

TEST_CASE("measured dilatation grows with the perturbation") {
  double prev = 0;
  for (double mu : {0.0, 0.01, 0.02, 0.05, 0.1}) {
    const double K = on_square([mu](cplx z) { return z + mu * std::conj(z) * (1.0 + 0.3 * z); }, 128, 0.5).supK;
    CHECK(K >= prev);
    prev = K;
  }
}

TEST_CASE("composition law") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-0.08, 0.08);
  for (int trial = 0; trial < 20; ++trial) {
    const cplx m1(u(rng), u(rng)), n1(u(rng), u(rng)), m2(u(rng), u(rng)), n2(u(rng), u(rng));
    const PlaneMap f = [=](cplx z) { return z + m1 * std::conj(z) + n1 * z * std::conj(z); };
    const PlaneMap g = [=](cplx z) { return z + m2 * std::conj(z) + n2 * std::conj(z * z); };
    const double Kg = on_square(g, 96, 0.5).supK;
    // g moves [-1/2, 1/2]^2 by less than 0.2, so measure f on a larger square
    const double Kf = on_square(f, 192, 1).supK;
    const double Kfg = on_square([&](cplx z) { return f(g(z)); }, 96, 0.5).supK;
    CHECK(Kfg <= Kf * Kg + 1e-4);
  }
}

TEST_CASE("circle maps") {
  const auto id = CircleMap::identity(64);
  CHECK(id(0.3) == doctest::Approx(0.3));
  CHECK(id(-1.25) == doctest::Approx(-1.25));
  CHECK(id.inverse(2.5) == doctest::Approx(2.5));
  const auto rot = CircleMap::rotation(0.2, 64);
  CHECK(compose(rot, inverse(rot))(0.77) == doctest::Approx(0.77));
  CHECK_THROWS_AS(CircleMap({0, 0.5, 0.4}), Error);
  CHECK_THROWS_AS(CircleMap({0, 0.5, 1.2}), Error);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = random_circle_map(rng);
    const double x = std::uniform_real_distribution<double>(-3, 3)(rng);
    CHECK(h.inverse(h(x)) == doctest::Approx(x).epsilon(1e-12));
    CHECK(h(x + 1) == doctest::Approx(h(x) + 1).epsilon(1e-12));
  }
}

TEST_CASE("quasisymmetry constant") {
  CHECK(quasisymmetry_constant(CircleMap::identity()) == doctest::Approx(1).epsilon(1e-9));
  CHECK(quasisymmetry_constant(CircleMap::rotation(0.37)) == doctest::Approx(1).epsilon(1e-9));
  const auto lift = [](double x) { return x + 0.01 * std::sin(2 * kPi * x) / (2 * kPi); };
  const QuasisymmetryOptions opt{256, 128};
  const double measured = quasisymmetry_constant(CircleMap::from_lift(lift, 8192), opt);
  CHECK(measured > 1);
  CHECK(measured < 1.05);
  // brute force over the same triples on the exact lift
  double oracle = 1;
  for (int a = 0; a < opt.points; ++a)
    for (int k = 1; k <= opt.spans; ++k) {
      const double x = static_cast<double>(a) / opt.points, t = k / (2.0 * opt.spans);
      const double rho = (lift(x + t) - lift(x)) / (lift(x) - lift(x - t));
      oracle = std::max({oracle, rho, 1 / rho});
    }
  CHECK(measured == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("extension of the identity and of translations") {
  const auto id = beurling_ahlfors(CircleMap::identity(), {2048, 33, 33});
  double worst = 0;
  for (int j = 0; j < id.M; ++j)
    for (int i = 0; i < id.N; ++i) worst = std::max(worst, std::abs(id.at(i, j) - id.point(i, j)));
  CHECK(worst < 1e-12);
  const double c = 0.3;
  const auto shifted = CircleMap::rotation(c);
  CHECK(mean_shift(shifted) == doctest::Approx(c).epsilon(1e-12));
  for (double y : {0.0, 0.25, 1.0}) CHECK(std::abs(beurling_ahlfors_at(shifted, {0.4, y}) - cplx(0.4 + c, y)) < 1e-12);
  CHECK_THROWS_WITH_AS(beurling_ahlfors_at(shifted, {0.4, 0.5}, 0), doctest::Contains("QuadratureFailure"), Error);
}

TEST_CASE("extension is periodic one unit up") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = random_circle_map(rng);
    const double c0 = mean_shift(h);
    CHECK(std::abs(c0) <= 0.5);
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      const double x = i / 64.0;
      worst = std::max(worst, std::abs(beurling_ahlfors_at(h, {x, 1}) - cplx(x + c0, 1)));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("interpolation with the identity: hypotheses and trivial case") {
  CHECK_THROWS_WITH_AS(interpolate_identity(CircleMap::identity(), 1), doctest::Contains("DTooSmall"), Error);
  CHECK_THROWS_AS(interpolate_identity(CircleMap::identity(), 0.5), Error);
  const auto m = interpolate_identity(CircleMap::identity(), 2, {2048, 64, 64});
  CHECK(dilatation(m).supK == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("interpolation with the identity: rotation") {
  const double D = 2;
  for (double turns : {0.05, 0.1, 0.2}) {
    const auto h = CircleMap::rotation(turns);
    const auto m = interpolate_identity(h, D, {2048, 256, 128});
    const auto r = dilatation(m);
    const double expect = closed_form_strip_K(turns, D);
    // cells whose stencil stays inside the strip 1 < y < D
    for (int cj = 0; cj < r.M; ++cj) {
      const double ylo = -std::log(m.radius(cj + 2)) / (2 * kPi), yhi = -std::log(m.radius(cj)) / (2 * kPi);
      if (ylo <= 1 || yhi >= D) continue;
      for (int ci = 0; ci < r.N; ci += 17) CHECK(r.field[cj * r.N + ci] == doctest::Approx(expect).epsilon(1e-4));
    }
    CHECK(r.supK == doctest::Approx(expect).epsilon(1e-3));
  }
}

TEST_CASE("interpolation with the identity: boundary and inner disk") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    std::function<double(double)> lift;
    const auto h = random_circle_map(rng, &lift);
    const double D = 1.5 + trial;
    const auto m = interpolate_identity(h, D, {2048, 4096, 12});
    const double s = std::exp(-2 * kPi * D);
    int inside = 0;
    for (int j = 0; j < m.M; ++j)
      for (int i = 0; i < m.N; ++i)
        if (std::abs(m.point(i, j)) <= s) {
          CHECK(m.at(i, j) == m.point(i, j));
          ++inside;
        }
    CHECK(inside > 0);
    double worst = 0;
    for (int i = 0; i < m.N; ++i) {
      const double x = static_cast<double>(i) / m.N;
      worst = std::max(worst, std::abs(m.at(i, m.M - 1) - std::exp(2 * kPi * I * lift(x))));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("interpolation with a conformal map") {
  const PlaneMap id = [](cplx z) { return z; };
  const ConformalMap g_id{id, [](cplx) { return cplx(1); }};
  const auto trivial = interpolate_with_conformal(id, g_id, 0.9);
  CHECK(trivial.report.supK == doctest::Approx(1).epsilon(1e-9));
  CHECK_THROWS_WITH_AS(interpolate_with_conformal(id, {[](cplx z) { return 2.0 * z; }, [](cplx) { return cplx(2); }}, 0.5),
                       doctest::Contains("DerivativeNotNormalized"), Error);
  CHECK_THROWS_AS(interpolate_with_conformal([](cplx z) { return z + 0.1; }, g_id, 0.5), Error);

  const double mu = 0.02;
  const auto f = beltrami(mu);
  const auto out = interpolate_with_conformal(f, g_id, 0.9);
  const auto& m = out.map;
  int inner = 0;
  for (int j = 0; j < m.M; ++j)
    for (int i = 0; i < m.N; ++i)
      if (std::abs(m.point(i, j)) <= out.inner_radius) {
        CHECK(m.at(i, j) == f(m.point(i, j)));
        ++inner;
      }
  CHECK(inner > 0);
  for (int i = 0; i < m.N; ++i) CHECK(m.at(i, m.M - 1) == m.point(i, m.M - 1));
  const double C = (out.report.supK - 1) / mu;
  MESSAGE("conformal interpolation: supK = " << out.report.supK << ", C = " << C);
  CHECK(out.report.supK >= (1 + mu) / (1 - mu) - 1e-4);
  CHECK(C < 5);

  const ConformalMap g{[](cplx z) { return z + 0.05 * z * z; }, [](cplx z) { return 1.0 + 0.1 * z; }};
  const auto fitted = interpolate_with_conformal(id, g, 0.5);
  double worst = 0;
  for (int i = 0; i < fitted.map.N; ++i) {
    const int j = fitted.map.M - 1;
    worst = std::max(worst, std::abs(fitted.map.at(i, j) - g.value(fitted.map.point(i, j))));
  }
  CHECK(worst < 1e-12);
  CHECK(fitted.report.supK < 1.05);
}

TEST_CASE("extension of good rectangle maps") {
  auto stretch = [](double k) { return [k](double x) { return k * x; }; };
  const auto id = extend_good_rectangle_map({stretch(1), stretch(1), 0.05, 0.5}, 20, 20, 10, 64, 64);
  CHECK(dilatation(id).supK == doctest::Approx(1).epsilon(1e-9));

  const double l1 = 100, l2 = 101, h = 10;
  const GoodBoundary lin{stretch(l2 / l1), stretch(l2 / l1), 0.11, 1.05};
  const double K = dilatation(extend_good_rectangle_map(lin, l1, l2, h, 512, 512)).supK;
  CHECK(K <= 1.02);
  CHECK(K == doctest::Approx(l2 / l1).epsilon(1e-9));

  CHECK_THROWS_WITH_AS(check_good_boundary({stretch(1), stretch(1), 0.01, 0.5}, 20, 20, 10),
                       doctest::Contains("NotGoodBoundary"), Error);
  CHECK_THROWS_AS(check_good_boundary({stretch(1), stretch(1), 0.2, 0.5}, 20, 22, 10), Error);
  CHECK_THROWS_AS(check_good_boundary({stretch(1), stretch(1), 0.2, 0.5}, 8, 8, 10), Error);
  CHECK_THROWS_AS(check_good_boundary({stretch(1.3), stretch(1), 0.2, 2}, 20, 20, 10), Error);
}

TEST_CASE("extension of a bent boundary matches its closed-form dilatation") {
  const double l1 = 60, l2 = 60.5, h = 12, a = 0.4, b = -0.25;
  // both sides fix the corners already, so no pinning correction applies
  auto side = [=](double amp) {
    return [=](double x) { return x * l2 / l1 + amp * std::sin(kPi * x / l1); };
  };
  auto dside = [=](double amp) {
    return [=](double x) { return l2 / l1 + amp * kPi / l1 * std::cos(kPi * x / l1); };
  };
  const GoodBoundary fb{side(a), side(b), 0.1, 1.2};
  const auto m = extend_good_rectangle_map(fb, l1, l2, h, 256, 128);
  const auto r = dilatation(m);
  double worst = 0, oracle_sup = 1;
  for (int cj = 0; cj < r.M; ++cj)
    for (int ci = 0; ci < r.N; ++ci) {
      const cplx p = m.point(ci + 1, cj + 1);
      const double s = p.imag() / h;
      const double Xx = (1 - s) * dside(a)(p.real()) + s * dside(b)(p.real());
      const double Xy = (side(b)(p.real()) - side(a)(p.real())) / h;
      const cplx fx = Xx, fy = cplx(Xy, 1);
      const double A = std::abs(0.5 * (fx - I * fy)), B = std::abs(0.5 * (fx + I * fy));
      const double K = (A + B) / (A - B);
      oracle_sup = std::max(oracle_sup, K);
      worst = std::max(worst, std::abs(r.field[cj * r.N + ci] - K));
    }
  CHECK(worst < 1e-5);
  MESSAGE("good rectangle extension: supK = " << r.supK << ", C = " << (r.supK - 1) / fb.epsilon);
  CHECK(r.supK == doctest::Approx(oracle_sup).epsilon(1e-5));
}

TEST_CASE("boundary traces") {
  const Domain ann = Domain::annulus(0.01, 1);
  const auto t = boundary_trace(sample(ann, 512, 16, [](cplx z) { return z; }));
  for (int i = 0; i < t.size(); ++i) CHECK(t.samples()[i] == doctest::Approx(static_cast<double>(i) / t.size()));
  CHECK(quasisymmetry_constant(t) == doctest::Approx(1).epsilon(1e-9));
  const auto rot = boundary_trace(sample(ann, 512, 16, [](cplx z) { return std::exp(I * 2.0) * z; }));
  CHECK(quasisymmetry_constant(rot) == doctest::Approx(1).epsilon(1e-9));
  CHECK(rot(0.1) - 0.1 == doctest::Approx(2 / (2 * kPi)));
  CHECK_THROWS_WITH_AS(boundary_trace(sample(ann, 64, 8, [](cplx z) { return 0.9 * z; })),
                       doctest::Contains("BoundaryNotPreserved"), Error);
  CHECK_THROWS_AS(boundary_trace(sample(ann, 64, 8, [](cplx z) { return z * z; })), Error);

  const double mu = 0.01;
  const auto pert = sample(ann, 2048, 16, circle_preserving(mu));
  CHECK(dilatation(pert).supK < 1 + 3 * mu);
  const double q = quasisymmetry_constant(boundary_trace(pert));
  MESSAGE("boundary trace: quasisymmetry constant " << q << ", C = " << (q - 1) / mu);
  CHECK(q > 1);
  CHECK(q <= 1 + 5 * mu);
}

TEST_CASE("sewing annuli") {
  const double R = std::exp(2 * kPi * 1.2), r = 1 / R;
  auto halves = [&](const PlaneMap& f1, const PlaneMap& f2) {
    return std::pair{RoundAnnulusMap{1, R, 1, R, f1}, RoundAnnulusMap{r, 1, r, 1, f2}};
  };
  const PlaneMap id = [](cplx z) { return z; };
  const SewingOptions small{0.01, 128, 64};
  {
    const auto [a1, a2] = halves(id, id);
    const auto s = sew_annuli(a1, a2, CircleMap::identity(), small);
    CHECK(s.report.supK == doctest::Approx(1).epsilon(1e-9));
  }
  {
    const double alpha = 0.7, beta = -1.9;
    const auto [a1, a2] = halves([=](cplx z) { return std::exp(I * alpha) * z; }, [=](cplx z) { return std::exp(I * beta) * z; });
    const auto s = sew_annuli(a1, a2, CircleMap::rotation((beta - alpha) / (2 * kPi)), small);
    CHECK(s.report.supK == doctest::Approx(1).epsilon(1e-9));
    double worst = 0;
    for (int j = 0; j < s.inner.M; ++j)
      for (int i = 0; i < s.inner.N; ++i)
        worst = std::max(worst, std::abs(s.inner.at(i, j) - std::exp(I * beta) * s.inner.point(i, j)));
    CHECK(worst < 1e-9);
  }
  {
    const auto [a1, a2] = halves(id, id);
    CHECK_THROWS_WITH_AS(sew_annuli(a1, a2, CircleMap::identity(), {1e-6, 64, 32}), doctest::Contains("ModulusTooSmall"),
                         Error);
    RoundAnnulusMap thin = a2;
    thin.s_in = 0.2;
    CHECK_THROWS_AS(sew_annuli(a1, thin, CircleMap::identity(), small), Error);
  }
}

TEST_CASE("sewing perturbed annuli: constant stable across resolutions") {
  const double R = std::exp(2 * kPi * 1.2), r = 1 / R, mu = 0.01;
  const RoundAnnulusMap a1{1, R, 1, R, circle_preserving(mu)}, a2{r, 1, r, 1, circle_preserving(-mu)};
  std::vector<double> C;
  for (int n : {256, 512}) {
    const auto s = sew_annuli(a1, a2, CircleMap::identity(), {0.01, n, n});
    // the inner half agrees with a2 on its outer boundary |z| = r
    double worst = 0;
    for (int i = 0; i < s.inner.N; ++i) worst = std::max(worst, std::abs(s.inner.at(i, 0) - a2.map(s.inner.point(i, 0))));
    CHECK(worst < 1e-9);
    C.push_back((s.report.supK - 1) / mu);
    MESSAGE("sewing at " << n << "^2: supK = " << s.report.supK << ", C = " << C.back());
  }
  CHECK(C[0] < 10);
  CHECK(std::abs(C[0] - C[1]) < 0.1 * C[1]);
}

TEST_CASE("monotone degradation of the constructions") {
  double prev = 0;
  for (double turns : {0.0, 0.02, 0.05, 0.1, 0.2}) {
    const double K = dilatation(interpolate_identity(CircleMap::rotation(turns), 2, {512, 64, 64})).supK;
    CHECK(K >= prev - 1e-12);
    prev = K;
  }
  prev = 0;
  for (double mu : {0.0, 0.005, 0.01, 0.02, 0.04}) {
    const double K = dilatation(sample(Domain::annulus(0.01, 1), 256, 32, circle_preserving(mu))).supK;
    CHECK(K >= prev - 1e-12);
    prev = K;
  }
  prev = 0;
  for (double mu : {0.0, 0.01, 0.02, 0.05, 0.1}) {
    const double K = interpolate_with_conformal(beltrami(mu), {[](cplx z) { return z; }, [](cplx) { return cplx(1); }}, 0.9,
                                                {1.5, 1.5, 64, 64})
                         .report.supK;
    CHECK(K >= prev - 1e-12);
    prev = K;
  }
}

TEST_CASE("exports") {
  const auto r = on_square(beltrami(0.1), 8);
  const auto csv = field_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 36);
  CHECK(csv.rfind("i,j,K\n", 0) == 0);
  const auto q = quantiles_csv(r);
  CHECK(std::count(q.begin(), q.end(), '\n') == 5);
  CHECK(fit_constant({{0.01, 1.02}, {0.02, 1.04}}) == doctest::Approx(2));
  CHECK_THROWS_AS(fit_constant({}), Error);
}
