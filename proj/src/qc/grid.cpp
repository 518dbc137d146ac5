#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "flatlab/qc.hpp"

namespace flatlab::qc {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

void check_grid(const Domain& d, int N, int M) {
  if (N < 3 || M < 3) throw Error(ErrorCode::InvalidArgument, "grid needs at least 3 x 3 samples");
  if (d.kind == Domain::Kind::Rectangle) {
    if (!(d.x1 > d.x0) || !(d.y1 > d.y0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  } else {
    if (!(d.r1 > d.r0) || d.r0 < 0) throw Error(ErrorCode::InvalidArgument, "annulus radii must satisfy 0 <= r0 < r1");
    if (d.log_radial && !(d.r0 > 0)) throw Error(ErrorCode::InvalidArgument, "geometric radii need r0 > 0");
  }
}

// Cell status for the dilatation kernel: K, or NaN when the Jacobian fails.
struct Stencil {
  const GridMap& m;
  double hx = 0, hy = 0;

  explicit Stencil(const GridMap& g) : m(g) {
    const Domain& d = g.domain;
    if (d.kind == Domain::Kind::Rectangle) {
      hx = (d.x1 - d.x0) / (g.N - 1);
      hy = (d.y1 - d.y0) / (g.M - 1);
    } else {
      hx = kTwoPi / g.N;
      hy = d.log_radial ? (std::log(d.r1) - std::log(d.r0)) / (g.M - 1) : (d.r1 - d.r0) / (g.M - 1);
    }
  }

  bool rectangle() const { return m.domain.kind == Domain::Kind::Rectangle; }
  int cols() const { return rectangle() ? m.N - 2 : m.N; }
  int rows() const { return m.M - 2; }

  double K(int ci, int cj) const {
    const int j = cj + 1;
    int i = ci, left = 0, right = 0;
    if (rectangle()) {
      i = ci + 1;
      left = i - 1;
      right = i + 1;
    } else {
      left = (i + m.N - 1) % m.N;
      right = (i + 1) % m.N;
    }
    // derivative along the first grid coordinate (x or angle), then the second.
    // On geometric grids log f is differenced instead: (log f)_zbar / (log f)_z
    // equals f_zbar / f_z, and maps like z -> a z become linear.
    cplx du, dv;
    if (!rectangle() && m.domain.log_radial) {
      du = std::log(m.at(right, j) / m.at(left, j)) / (2 * hx);
      dv = std::log(m.at(i, j + 1) / m.at(i, j - 1)) / (2 * hy);
    } else {
      du = (m.at(right, j) - m.at(left, j)) / (2 * hx);
      dv = (m.at(i, j + 1) - m.at(i, j - 1)) / (2 * hy);
    }
    cplx fz, fzb;
    if (rectangle()) {
      fz = 0.5 * (du - cplx(0, 1) * dv);
      fzb = 0.5 * (du + cplx(0, 1) * dv);
    } else {
      // (log r, angle) is conformal; plain radii need the factor r
      if (!m.domain.log_radial) dv *= m.radius(j);
      fz = 0.5 * (dv - cplx(0, 1) * du);
      fzb = 0.5 * (dv + cplx(0, 1) * du);
    }
    const double a = std::abs(fz), b = std::abs(fzb);
    if (!std::isfinite(a) || !std::isfinite(b) || !(a > b)) return std::nan("");
    return (a + b) / (a - b);
  }
};

DilatationReport finish(const Stencil& st, std::vector<double> field) {
  DilatationReport r;
  r.N = st.cols();
  r.M = st.rows();
  for (std::size_t c = 0; c < field.size(); ++c) {
    if (std::isnan(field[c])) {
      const int ci = static_cast<int>(c % r.N), cj = static_cast<int>(c / r.N);
      throw Error(ErrorCode::DegenerateJacobian,
                  "Jacobian not positive at interior cell (" + std::to_string(ci) + ", " + std::to_string(cj) + ")");
    }
  }
  r.field = std::move(field);
  std::vector<double> sorted = r.field;
  std::sort(sorted.begin(), sorted.end());
  r.supK = sorted.empty() ? 1 : sorted.back();
  for (double q : {0.5, 0.9, 0.99, 1.0}) {
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
    r.quantiles.emplace_back(q, sorted.empty() ? 1 : sorted[k]);
  }
  return r;
}

void check_values(const GridMap& m) {
  if (m.values.size() != static_cast<std::size_t>(m.N) * m.M) throw Error(ErrorCode::InvalidArgument, "grid size mismatch");
  check_grid(m.domain, m.N, m.M);
}

}  // namespace

Domain Domain::rectangle(double x0, double x1, double y0, double y1) {
  Domain d;
  d.kind = Kind::Rectangle;
  d.x0 = x0;
  d.x1 = x1;
  d.y0 = y0;
  d.y1 = y1;
  std::ostringstream os;
  os << "rectangle [" << x0 << ", " << x1 << "] x [" << y0 << ", " << y1 << "]";
  d.description = os.str();
  return d;
}

Domain Domain::annulus(double r0, double r1, bool log_radial) {
  Domain d;
  d.kind = Kind::Annulus;
  d.r0 = r0;
  d.r1 = r1;
  d.log_radial = log_radial;
  std::ostringstream os;
  os << "annulus " << r0 << " <= |z| <= " << r1 << (log_radial ? " (geometric radii)" : "");
  d.description = os.str();
  return d;
}

double GridMap::radius(int j) const {
  if (j == M - 1) return domain.r1;
  if (j == 0) return domain.r0;
  const double f = static_cast<double>(j) / (M - 1);
  if (domain.log_radial) return domain.r0 * std::exp(f * std::log(domain.r1 / domain.r0));
  return domain.r0 + f * (domain.r1 - domain.r0);
}

cplx GridMap::point(int i, int j) const {
  if (domain.kind == Domain::Kind::Rectangle) {
    const double x = (i == N - 1) ? domain.x1 : domain.x0 + (domain.x1 - domain.x0) * i / (N - 1);
    const double y = (j == M - 1) ? domain.y1 : domain.y0 + (domain.y1 - domain.y0) * j / (M - 1);
    return {x, y};
  }
  return std::polar(radius(j), kTwoPi * i / N);
}

GridMap sample(const Domain& d, int N, int M, const PlaneMap& f) {
  check_grid(d, N, M);
  GridMap g{d, N, M, std::vector<cplx>(static_cast<std::size_t>(N) * M)};
  // exceptions cannot leave the parallel region; keep the one from the lowest row
  std::vector<std::exception_ptr> failed(M);
#pragma omp parallel for schedule(dynamic, 1)
  for (int j = 0; j < M; ++j) {
    try {
      for (int i = 0; i < N; ++i) g.at(i, j) = f(g.point(i, j));
    } catch (...) {
      failed[j] = std::current_exception();
    }
  }
  for (const auto& e : failed)
    if (e) std::rethrow_exception(e);
  return g;
}

GridMap sample_serial(const Domain& d, int N, int M, const PlaneMap& f) {
  check_grid(d, N, M);
  GridMap g{d, N, M, std::vector<cplx>(static_cast<std::size_t>(N) * M)};
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < N; ++i) g.at(i, j) = f(g.point(i, j));
  return g;
}

DilatationReport dilatation(const GridMap& m) {
  check_values(m);
  const Stencil st(m);
  const int cols = st.cols(), rows = st.rows();
  std::vector<double> field(static_cast<std::size_t>(cols) * rows);
#pragma omp parallel for collapse(2) schedule(static)
  for (int cj = 0; cj < rows; ++cj)
    for (int ci = 0; ci < cols; ++ci) field[static_cast<std::size_t>(cj) * cols + ci] = st.K(ci, cj);
  return finish(st, std::move(field));
}

DilatationReport dilatation_serial(const GridMap& m) {
  check_values(m);
  const Stencil st(m);
  const int cols = st.cols(), rows = st.rows();
  std::vector<double> field(static_cast<std::size_t>(cols) * rows);
  for (int cj = 0; cj < rows; ++cj)
    for (int ci = 0; ci < cols; ++ci) field[static_cast<std::size_t>(cj) * cols + ci] = st.K(ci, cj);
  return finish(st, std::move(field));
}

double fit_constant(const std::vector<std::pair<double, double>>& eps_supK) {
  double num = 0, den = 0;
  for (const auto& [eps, K] : eps_supK) {
    num += eps * (K - 1);
    den += eps * eps;
  }
  if (!(den > 0)) throw Error(ErrorCode::InvalidArgument, "need a nonzero epsilon to fit");
  return num / den;
}

std::string field_csv(const DilatationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "i,j,K\n";
  for (int j = 0; j < r.M; ++j)
    for (int i = 0; i < r.N; ++i) os << i << ',' << j << ',' << r.field[static_cast<std::size_t>(j) * r.N + i] << '\n';
  return os.str();
}

std::string quantiles_csv(const DilatationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "quantile,K\n";
  for (const auto& [q, K] : r.quantiles) os << q << ',' << K << '\n';
  return os.str();
}

}  // namespace flatlab::qc
