#include "flatlab/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "flatlab/catalog.hpp"
#include "flatlab/grafting.hpp"
#include "flatlab/half_plane.hpp"
#include "flatlab/qc.hpp"
#include "flatlab/svg.hpp"
#include "flatlab/teich_flow.hpp"

namespace flatlab {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

// Reads config values with defaults, echoing what was used; anything left over
// is an unknown key.
class Config {
 public:
  explicit Config(const json& given) : given_(given) {
    if (!given_.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  }

  template <class T>
  T get(const std::string& key, const T& fallback) {
    seen_.insert(key);
    if (!given_.contains(key)) {
      echo_[key] = fallback;
      return fallback;
    }
    try {
      T v = given_.at(key).get<T>();
      echo_[key] = v;
      return v;
    } catch (const json::exception&) {
      throw Error(ErrorCode::ConfigInvalid, "config key '" + key + "' has the wrong type");
    }
  }

  // rationals travel as strings ("3", "7/2") or integers
  Rational rational(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    std::string text = fallback;
    if (given_.contains(key)) {
      const json& v = given_.at(key);
      if (v.is_string())
        text = v.get<std::string>();
      else if (v.is_number_integer())
        text = std::to_string(v.get<long long>());
      else
        throw Error(ErrorCode::ConfigInvalid, "config key '" + key + "' must be a rational string");
    }
    try {
      Rational r = parse_rational(text);
      echo_[key] = format_rational(r);
      return r;
    } catch (const Error&) {
      throw Error(ErrorCode::ConfigInvalid, "config key '" + key + "' is not a rational: " + text);
    }
  }

  void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::ConfigInvalid, what);
  }

  ordered_json finish() {
    for (const auto& [k, v] : given_.items())
      if (!seen_.count(k)) throw Error(ErrorCode::ConfigInvalid, "unknown config key '" + k + "'");
    return echo_;
  }

 private:
  json given_;
  ordered_json echo_ = ordered_json::object();
  std::set<std::string> seen_;
};

struct Context {
  ExperimentReport report;
  std::string out_dir;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    report.assertions.push_back({name, ok, detail});
  }

  void artifact(const std::string& file, const std::string& content) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / file, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + file);
    report.artifacts.push_back(file);
  }
};

std::string str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

ordered_json rationals(const std::vector<Rational>& v) {
  ordered_json out = ordered_json::array();
  for (const auto& r : v) out.push_back(format_rational(r));
  return out;
}

// Residue of every end read from the graph and from the local end data.
bool residues_agree(const GeneralizedHalfPlaneSurface& hps, ordered_json& out) {
  bool ok = true;
  out = ordered_json::array();
  for (int e = 0; e < static_cast<int>(hps.ends.size()); ++e) {
    std::vector<Side> sides;
    for (int i : hps.ends[e].sides) sides.push_back(hps.sides[i]);
    const double from_graph = limit_residue_from_graph(hps.spine, sides);
    const EndData d = end_local_data(hps, e);
    ok = ok && std::abs(from_graph - d.residue) <= 1e-12;
    ordered_json row{{"end", e}, {"order", d.order}, {"residue_graph", from_graph}, {"residue_local", d.residue}};
    if (d.exact_residue) row["residue_exact"] = format_rational(*d.exact_residue);
    out.push_back(row);
  }
  return ok;
}

ordered_json cone_json(const FlatSurface& s) {
  ordered_json out = ordered_json::array();
  for (const auto& c : cone_data(s)) out.push_back({{"vertex_class", c.vertex_class}, {"angle_pi", c.angle_pi}, {"order", c.order}});
  return out;
}

void slit_torus_limit(Config& cfg, Context& cx) {
  const Rational L = cfg.rational("L", "3");
  cfg.require(L > 0, "L must be positive");
  cx.report.inputs = cfg.finish();
  auto& m = cx.report.measured;

  const FlatSurface s = slit_torus_example();
  const auto cones = cone_data(s);
  const int g = genus(s);
  int orders = 0, four_pi = 0;
  for (const auto& c : cones) {
    orders += c.order;
    four_pi += c.angle_pi == 4;
  }
  m["genus"] = g;
  m["cone_points"] = cone_json(s);
  m["area"] = format_rational(area(s));

  const auto hps = y_infinity(s, L);
  m["components"] = hps.components;
  m["half_planes"] = hps.half_planes();
  m["cylinders"] = hps.cylinders();
  m["saddle_connections"] = hps.spine.edges.size();
  m["feelers"] = hps.spine.feelers.size();
  ordered_json ex = ordered_json::array();
  int intervals = -1;
  if (hps.half_planes() == 2) {
    const auto x = boundary_exchange(hps, 0);
    intervals = static_cast<int>(x.lengths.size());
    ex = {{"lengths", rationals(x.lengths)}, {"permutation", x.permutation}, {"self_glued", x.self_glued}};
  }
  m["boundary_exchange"] = ex;
  ordered_json res;
  const bool agree = residues_agree(hps, res);
  m["ends"] = res;
  m["parity_warnings"] = parity_warnings(hps);

  cx.check("genus is 2", g == 2, std::to_string(g));
  cx.check("two cone points of angle 4 pi", cones.size() == 2 && four_pi == 2, std::to_string(cones.size()) + " cone points");
  cx.check("orders sum to 4g - 4", orders == 4 * g - 4, std::to_string(orders));
  cx.check("one component (k = 1)", hps.components == 1, std::to_string(hps.components));
  cx.check("exactly 2 half-planes", hps.half_planes() == 2, std::to_string(hps.half_planes()));
  cx.check("no half-cylinders", hps.cylinders() == 0, std::to_string(hps.cylinders()));
  cx.check("boundary gluing is a 2-interval exchange", intervals == 2, std::to_string(intervals) + " intervals");
  cx.check("graph residues match end data", agree);

  cx.artifact("slit-torus-surface.svg", render_svg(s));
  cx.artifact("slit-torus-graph.svg", render_svg(hps.spine));
}

void strebel_limit(Config& cfg, Context& cx) {
  const Rational L = cfg.rational("L", "1");
  cfg.require(L > 0, "L must be positive");
  cx.report.inputs = cfg.finish();
  auto& m = cx.report.measured;

  const FlatSurface s = strebel_warmup();
  m["genus"] = genus(s);
  m["cone_points"] = cone_json(s);
  const auto hps = y_infinity(s, L);
  m["components"] = hps.components;
  m["half_planes"] = hps.half_planes();
  m["cylinders"] = hps.cylinders();
  m["saddle_connections"] = hps.spine.edges.size();
  m["feelers"] = hps.spine.feelers.size();
  // each cylinder end is glued along one cycle of the graph
  bool along_graph = !hps.ends.empty();
  Rational glued = 0, total = 0;
  ordered_json circ = ordered_json::array();
  for (const auto& e : hps.ends) {
    along_graph = along_graph && e.cylinder && e.sides.size() == 1 && hps.sides[e.sides.front()].is_cycle;
    if (!e.sides.empty()) {
      circ.push_back(format_rational(side_length(hps.sides[e.sides.front()])));
      glued += side_length(hps.sides[e.sides.front()]);
    }
  }
  for (const auto& c : hps.spine.edges) total += c.length;
  m["circumferences"] = circ;
  ordered_json res;
  const bool agree = residues_agree(hps, res);
  m["ends"] = res;

  cx.check("no half-planes", hps.half_planes() == 0, std::to_string(hps.half_planes()));
  cx.check("only half-infinite cylinders", hps.cylinders() == static_cast<int>(hps.ends.size()) && hps.cylinders() > 0,
           std::to_string(hps.cylinders()) + " of " + std::to_string(hps.ends.size()) + " ends");
  cx.check("no feelers: every vertical leaf is closed", hps.spine.feelers.empty());
  cx.check("each cylinder is glued along one cycle of the graph", along_graph);
  // both banks of every connection are used once
  cx.check("cylinder boundaries cover the graph twice", glued == 2 * total,
           format_rational(glued) + " vs 2 x " + format_rational(total));
  cx.check("graph residues match end data", agree);

  cx.artifact("strebel-surface.svg", render_svg(s));
  cx.artifact("strebel-graph.svg", render_svg(hps.spine));
}

// Teichmueller stretch by k orthogonal to gamma = p + q tau, written in the
// image of the marking (1, tau).
TorusPoint stretch_across(TorusPoint tau, std::pair<int, int> curve, double k) {
  const std::complex<double> gamma = double(curve.first) + double(curve.second) * tau.tau;
  const std::complex<double> n = std::complex<double>(0, 1) * gamma / std::abs(gamma);
  auto S = [&](std::complex<double> v) { return v + (k - 1) * (v * std::conj(n)).real() * n; };
  return {S(tau.tau) / S(1.0)};
}

struct Reading {
  std::string id;
  std::string description;
  std::function<double(double, double)> graft;     // (t, c) -> grafting parameter
  std::function<double(double, double)> geodesic;  // (t, c) -> stretch of X along the ray
  std::function<double(double, double)> closed;    // (t, c) -> distance
};

std::vector<Reading> readings() {
  const double e2 = std::exp(2.0);
  return {
      {"exp", "graft e^{2t}, ray point X stretched by c e^{2t}",
       [](double t, double) { return std::exp(2 * t); }, [](double t, double c) { return c * std::exp(2 * t); },
       [](double t, double c) { return 0.5 * std::log1p(std::exp(-2 * t) / c); }},
      {"linear", "graft e^2 t, ray point X stretched by e^2 c t",
       [e2](double t, double) { return e2 * t; }, [e2](double t, double c) { return e2 * c * t; },
       [e2](double t, double c) { return 0.5 * std::log1p(1 / (e2 * c * t)); }},
  };
}

void torus_asymptoticity(Config& cfg, Context& cx) {
  const auto tau_in = cfg.get<std::vector<double>>("tau", {0, 1});
  const auto curves = cfg.get<std::vector<std::pair<int, int>>>("curves", {{1, 0}, {0, 1}, {1, 1}});
  const double t0 = cfg.get<double>("t0", 0.5);
  const int steps = cfg.get<int>("steps", 40);
  const double horizon_exp = cfg.get<double>("horizon_exp", 6);
  const double horizon_linear = cfg.get<double>("horizon_linear", 20);
  const double tolerance = cfg.get<double>("tolerance", 1e-9);
  cfg.require(tau_in.size() == 2 && tau_in[1] > 0, "tau must be [re, im] with im > 0");
  cfg.require(steps >= 2, "steps must be at least 2");
  cfg.require(t0 > 0 && horizon_exp > t0 && horizon_linear > t0, "need 0 < t0 < horizon");
  cfg.require(!curves.empty(), "need at least one curve");
  cx.report.inputs = cfg.finish();
  const TorusPoint tau{{tau_in[0], tau_in[1]}};

  std::ostringstream csv;
  csv.precision(17);
  csv << "curve,reading,t,distance,closed_form\n";
  ordered_json runs = ordered_json::array();
  for (const auto& curve : curves) {
    const std::complex<double> gamma = double(curve.first) + double(curve.second) * tau.tau;
    const double c = std::norm(gamma) / tau.tau.imag();
    const std::string name = "(" + std::to_string(curve.first) + "," + std::to_string(curve.second) + ")";
    for (const auto& r : readings()) {
      const double H = r.id == "exp" ? horizon_exp : horizon_linear;
      std::vector<double> d;
      double worst = 0;
      for (int k = 0; k <= steps; ++k) {
        const double t = t0 + (H - t0) * k / steps;
        const double dist = torus_teich_distance(graft_torus(tau, curve, r.graft(t, c)), stretch_across(tau, curve, r.geodesic(t, c)));
        const double exact = r.closed(t, c);
        worst = std::max(worst, std::abs(dist - exact));
        d.push_back(dist);
        csv << name << ',' << r.id << ',' << t << ',' << dist << ',' << exact << '\n';
      }
      bool monotone = true;
      for (std::size_t k = 1; k < d.size(); ++k) monotone = monotone && d[k] < d[k - 1];
      runs.push_back({{"curve", {curve.first, curve.second}}, {"reading", r.id}, {"description", r.description},
                      {"c", c}, {"horizon", H}, {"d_t0", d.front()}, {"d_horizon", d.back()}, {"max_oracle_error", worst}});
      const std::string label = name + " " + r.id;
      cx.check(label + ": d decreasing for t >= t0", monotone);
      cx.check(label + ": d(horizon) < 0.01", d.back() < 0.01, str(d.back()));
      cx.check(label + ": matches closed form", worst < tolerance, str(worst));
    }
  }
  cx.report.measured["runs"] = runs;
  cx.artifact("torus-asymptoticity.csv", csv.str());
}

void yt_ray_property(Config& cfg, Context& cx) {
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  const int trials = cfg.get<int>("trials", 100);
  const int max_branches = cfg.get<int>("max_branches", 4);
  const auto ratio_text = cfg.get<std::vector<std::string>>("ratios", {"4", "9", "25"});
  cfg.require(trials >= 1 && max_branches >= 1, "trials and max_branches must be positive");
  std::vector<Rational> ratios;
  for (const auto& r : ratio_text) {
    try {
      ratios.push_back(parse_rational(r));
    } catch (const Error&) {
      throw Error(ErrorCode::ConfigInvalid, "ratio is not a rational: " + r);
    }
    cfg.require(ratios.back() > 1, "ratios must exceed 1");
  }
  cfg.require(!ratios.empty(), "need at least one ratio");
  cx.report.inputs = cfg.finish();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(1, 40);
  int passes = 0;
  std::map<std::string, int> per_ratio;
  ordered_json failures = ordered_json::array();
  for (int trial = 0; trial < trials; ++trial) {
    const auto track = random_track(rng, 1 + static_cast<int>(rng() % max_branches));
    Rational t1(num(rng), 8);
    t1.canonicalize();
    const Rational ratio = ratios[rng() % ratios.size()];
    const Rational t2 = t1 * ratio;
    // flow by half the log of the ratio is the exact horizontal factor ratio
    const bool ok = isometric(build_Yt(track, t2), flow_by_factor(build_Yt(track, t1), ratio));
    passes += ok;
    per_ratio[format_rational(ratio)] += 1;
    if (!ok) failures.push_back({{"trial", trial}, {"t1", format_rational(t1)}, {"ratio", format_rational(ratio)}});
  }
  cx.report.measured["passes"] = passes;
  cx.report.measured["trials"] = trials;
  cx.report.measured["trials_per_ratio"] = per_ratio;
  cx.report.measured["failures"] = failures;
  cx.check("Y_{t2} isometric to flow(Y_{t1}, ln(t2/t1)/2) in every trial", passes == trials,
           std::to_string(passes) + "/" + std::to_string(trials));
}

// lift x + sum a_k sin(2 pi k x) / (2 pi k) + shift with sum |a_k| = 0.8
std::function<double(double)> random_lift(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(4);
  double total = 0;
  for (auto& x : a) total += std::abs(x = u(rng));
  for (auto& x : a) x *= 0.8 / total;
  const double shift = u(rng) / 2;
  return [a, shift](double x) {
    double y = x + shift;
    for (int k = 1; k <= 4; ++k) y += a[k - 1] * std::sin(2 * kPi * k * x) / (2 * kPi * k);
    return y;
  };
}

// modulus kept, angle pushed by z + mu conj(z): preserves round circles
qc::PlaneMap circle_preserving(double mu) {
  return [mu](qc::cplx z) {
    const qc::cplx u = z + mu * std::conj(z);
    return std::abs(z) * u / std::abs(u);
  };
}

void qc_suite(Config& cfg, Context& cx) {
  using namespace qc;
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  const int grid = cfg.get<int>("grid", 512);
  const double epsilon = cfg.get<double>("epsilon", 0.01);
  const double D = cfg.get<double>("D", 2);
  const int maps = cfg.get<int>("maps", 20);
  cfg.require(grid >= 16 && grid % 2 == 0, "grid must be an even number >= 16");
  cfg.require(epsilon > 0 && epsilon < 0.1, "epsilon must lie in (0, 0.1)");
  cfg.require(D > 1, "D must exceed 1");
  cfg.require(maps >= 1, "maps must be positive");
  cx.report.inputs = cfg.finish();
  auto& m = cx.report.measured;
  std::mt19937_64 rng(seed);

  // constant Beltrami maps on a uniform polar grid, where the map is not
  // linear in the grid coordinates and the error is genuinely second order
  ordered_json conv = ordered_json::array();
  for (double mu : {0.05, 0.2}) {
    const PlaneMap f = [mu](cplx z) { return z + mu * std::conj(z); };
    const double exact = (1 + mu) / (1 - mu);
    const double fine = std::abs(dilatation(sample(Domain::annulus(0.5, 1), grid, grid, f)).supK - exact);
    const double coarse = std::abs(dilatation(sample(Domain::annulus(0.5, 1), grid / 2, grid / 2, f)).supK - exact);
    const double ratio = coarse / fine;
    conv.push_back({{"mu", mu}, {"exact", exact}, {"error", fine}, {"error_half_grid", coarse}, {"ratio", ratio}});
    cx.check("dilatation error < 1e-3 for mu = " + str(mu), fine < 1e-3, str(fine));
    cx.check("convergence ratio in [3.5, 4.5] for mu = " + str(mu), ratio >= 3.5 && ratio <= 4.5, str(ratio));
  }
  m["dilatation"] = conv;

  {
    const auto lift = random_lift(rng);
    const auto h = CircleMap::from_lift(lift, 4096);
    const auto g = interpolate_identity(h, D, {2048, 4096, 12});
    const double s = std::exp(-2 * kPi * D);
    bool identity = true;
    int inside = 0;
    double boundary = 0;
    for (int j = 0; j < g.M; ++j)
      for (int i = 0; i < g.N; ++i)
        if (std::abs(g.point(i, j)) <= s) {
          identity = identity && g.at(i, j) == g.point(i, j);
          ++inside;
        }
    for (int i = 0; i < g.N; ++i)
      boundary = std::max(boundary, std::abs(g.at(i, g.M - 1) - std::exp(cplx(0, 2 * kPi * lift(static_cast<double>(i) / g.N)))));
    m["interpolate_identity"] = {{"D", D}, {"inner_samples", inside}, {"boundary_error", boundary}};
    cx.check("interpolate_identity is the identity on the inner disk", identity && inside > 0, std::to_string(inside) + " samples");
    cx.check("interpolate_identity matches h on the boundary within 1e-6", boundary < 1e-6, str(boundary));
  }

  {
    double worst = 0;
    for (int k = 0; k < maps; ++k) {
      const auto h = CircleMap::from_lift(random_lift(rng), 4096);
      const double c0 = mean_shift(h);
      for (int i = 0; i < 64; ++i) {
        const double x = i / 64.0;
        worst = std::max(worst, std::abs(beurling_ahlfors_at(h, {x, 1}) - cplx(x + c0, 1)));
      }
    }
    m["periodicity_defect"] = worst;
    cx.check("Beurling-Ahlfors periodicity defect < 1e-6", worst < 1e-6, str(worst));
  }

  {
    const double l1 = 100, l2 = 101, h = 10;
    auto stretch = [](double k) { return [k](double x) { return k * x; }; };
    const GoodBoundary fb{stretch(l2 / l1), stretch(l2 / l1), 0.11, 1.05};
    const double K = dilatation(extend_good_rectangle_map(fb, l1, l2, h, grid, grid)).supK;
    m["good_rectangle_supK"] = K;
    cx.check("good rectangle 100/101, h = 10: supK <= 1.02", K <= 1.02, str(K));
  }

  {
    // a1 and a2 pushed by opposite amounts; the sewing must absorb the mismatch
    const double R = std::exp(2 * kPi * 1.2), r = 1 / R;
    // C per grid is the envelope max (K - 1) / mu over the sweep; the
    // least-squares slope is reported alongside
    ordered_json rows = ordered_json::array();
    std::vector<double> C, top, linearity;
    for (int n : {grid / 2, grid}) {
      std::vector<std::pair<double, double>> pts;
      DilatationReport last;
      double envelope = 0;
      for (double mu : {epsilon / 2, epsilon}) {
        const RoundAnnulusMap a1{1, R, 1, R, circle_preserving(mu)}, a2{r, 1, r, 1, circle_preserving(-mu)};
        const auto sewn = sew_annuli(a1, a2, CircleMap::identity(), {epsilon, n, n});
        pts.emplace_back(mu, sewn.report.supK);
        envelope = std::max(envelope, (sewn.report.supK - 1) / mu);
        last = sewn.report;
      }
      C.push_back(envelope);
      top.push_back(pts.back().second);
      // K - 1 proportional to mu: the two slopes agree
      linearity.push_back(std::abs((pts[0].second - 1) / pts[0].first - (pts[1].second - 1) / pts[1].first) / envelope);
      rows.push_back({{"grid", n}, {"supK", pts.back().second}, {"supK_half_epsilon", pts.front().second}, {"C", envelope},
                      {"C_least_squares", fit_constant(pts)}});
      if (n == grid) cx.artifact("qc-sewing-quantiles.csv", quantiles_csv(last));
    }
    m["sewing"] = rows;
    const double spread = std::abs(C[0] - C[1]) / C[1];
    // the constant from the coarse grid, inside its stability band, bounds the fine grid
    const double bound = 1 + 1.2 * C[0] * epsilon;
    cx.check("sew_annuli supK <= 1 + C epsilon", top[0] <= 1 + C[0] * epsilon && top[1] <= bound,
             str(top[1]) + " vs " + str(bound));
    cx.check("fitted C stable within 20% across grids", spread <= 0.2, str(spread));
    cx.check("supK - 1 linear in the perturbation within 20%", std::max(linearity[0], linearity[1]) <= 0.2,
             str(std::max(linearity[0], linearity[1])));
  }
}

using Runner = void (*)(Config&, Context&);

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r{
      {"qc-suite", qc_suite},
      {"slit-torus-limit", slit_torus_limit},
      {"strebel-warmup", strebel_limit},
      {"torus-asymptoticity", torus_asymptoticity},
      {"yt-ray-property", yt_ray_property},
  };
  return r;
}

}  // namespace

bool ExperimentReport::passed() const {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

ordered_json ExperimentReport::to_json() const {
  ordered_json a = ordered_json::array();
  for (const auto& x : assertions) a.push_back({{"name", x.name}, {"passed", x.passed}, {"detail", x.detail}});
  return {{"id", id}, {"inputs", inputs}, {"measured", measured}, {"assertions", a}, {"passed", passed()}, {"artifacts", artifacts}};
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [name, run] : registry()) out.push_back(name);
  return out;
}

ExperimentReport run_experiment(const std::string& name, const json& config, const std::string& out_dir) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorCode::UnknownExperiment, "no experiment named '" + name + "'");
  Config cfg(config);
  Context cx;
  cx.report.id = name;
  cx.report.measured = ordered_json::object();
  cx.out_dir = out_dir;
  it->second(cfg, cx);
  return cx.report;
}

}  // namespace flatlab
