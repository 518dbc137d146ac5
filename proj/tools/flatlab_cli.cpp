#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "flatlab/catalog.hpp"
#include "flatlab/experiments.hpp"
#include "flatlab/grafting.hpp"
#include "flatlab/half_plane.hpp"
#include "flatlab/qc.hpp"
#include "flatlab/surface_io.hpp"
#include "flatlab/svg.hpp"
#include "flatlab/teich_flow.hpp"
#include "flatlab/vertical_graph.hpp"
#include "json.hpp"

using namespace flatlab;
using nlohmann::ordered_json;

namespace {

constexpr int kPass = 0, kAssertionFailed = 1, kInputError = 2;

struct Options {
  std::string file;
  std::string t, scale, L = "3", H = "4";
  int grid = 256;
  double epsilon = 0.01;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  // graft
  std::string locus;
  std::vector<double> tau;
  std::vector<int> curve;
  // yt
  int branches = 3;
  // limit
  int end = -1;
  // qc
  std::string op = "beltrami";
  double mu = 0.1;
  double D = 2;
  // experiment
  std::string name, config;
  std::set<std::string> given;  // flags passed on the command line
};

// Either a path to a surface file or a catalog name prefixed with "catalog:".
FlatSurface load_surface(const std::string& where) {
  if (where.rfind("catalog:", 0) == 0) return catalog_surface(where.substr(8));
  const Diagnostics d = validate_file(where);
  if (!d.ok()) {
    const auto& first = d.items.front();
    throw Error(first.code, where + ":" + std::to_string(first.line) + ": " + first.message);
  }
  return parse_surface(read_text_file(where));
}

// Writes to --out DIR/<name> when given, else stdout.
void emit(const Options& o, const std::string& name, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(o.out);
  const auto path = std::filesystem::path(o.out) / name;
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  std::cerr << "wrote " << path.string() << "\n";
}

std::string ext(const Options& o) { return o.format == "svg" ? ".svg" : o.format == "csv" ? ".csv" : ".json"; }

ordered_json prong_json(Prong p) { return {p.vertex, p.index}; }

ordered_json graph_json(const VerticalGraph& g) {
  ordered_json out;
  out["L"] = format_rational(g.L);
  out["vertices"] = ordered_json::array();
  for (const auto& v : g.vertices) out["vertices"].push_back({{"vertex_class", v.vertex_class}, {"prongs", v.prongs}});
  out["connections"] = ordered_json::array();
  for (const auto& e : g.edges)
    out["connections"].push_back({{"from", prong_json(e.from)}, {"to", prong_json(e.to)}, {"length", format_rational(e.length)}});
  out["feelers"] = ordered_json::array();
  for (const auto& f : g.feelers) out["feelers"].push_back({{"prong", prong_json(f.prong)}, {"length", format_rational(f.length)}});
  out["sides"] = ordered_json::array();
  for (const auto& s : sides(g)) {
    ordered_json lengths = ordered_json::array();
    for (const auto& l : s.length_sequence) lengths.push_back(format_rational(l));
    out["sides"].push_back({{"cycle", s.is_cycle}, {"lengths", lengths}, {"boundary", s.boundary}, {"component", s.component}});
  }
  return out;
}

std::string csv_rows(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

int cmd_validate(const Options& o) {
  const Diagnostics d = validate_file(o.file);
  if (o.format == "json") {
    ordered_json out = {{"file", o.file}, {"ok", d.ok()}, {"diagnostics", ordered_json::array()}};
    for (const auto& x : d.items)
      out["diagnostics"].push_back({{"line", x.line}, {"code", std::string(to_string(x.code))}, {"message", x.message}});
    emit(o, "validate.json", out.dump(2) + "\n");
  } else {
    std::ostringstream os;
    if (d.ok()) os << o.file << ": ok\n";
    for (const auto& x : d.items) os << o.file << ":" << x.line << ": " << to_string(x.code) << ": " << x.message << "\n";
    emit(o, "validate.txt", os.str());
  }
  return d.ok() ? kPass : kInputError;
}

int cmd_flow(const Options& o) {
  const FlatSurface s = load_surface(o.file);
  if (o.t.empty() == o.scale.empty()) throw Error(ErrorCode::InvalidArgument, "give exactly one of --t and --scale");
  const FlatSurface f = o.scale.empty() ? flow(s, std::stod(o.t)) : flow_by_factor(s, parse_rational(o.scale));
  emit(o, "flow" + (o.format == "svg" ? std::string(".svg") : std::string(".json")),
       o.format == "svg" ? render_svg(f) : serialize_surface(f));
  return kPass;
}

int cmd_vgraph(const Options& o) {
  const FlatSurface s = load_surface(o.file);
  const VerticalGraph g = appended_graph(s, parse_rational(o.L));
  if (o.format == "svg") {
    emit(o, "vgraph.svg", render_svg(g));
  } else if (o.format == "csv") {
    std::vector<std::vector<std::string>> rows{{"from_vertex", "from_prong", "to_vertex", "to_prong", "length"}};
    for (const auto& e : g.edges)
      rows.push_back({std::to_string(e.from.vertex), std::to_string(e.from.index), std::to_string(e.to.vertex),
                      std::to_string(e.to.index), format_rational(e.length)});
    emit(o, "vgraph.csv", csv_rows(rows));
  } else {
    emit(o, "vgraph.json", graph_json(g).dump(2) + "\n");
  }
  return kPass;
}

int cmd_limit(const Options& o) {
  const FlatSurface s = load_surface(o.file);
  const auto hps = y_infinity(s, parse_rational(o.L));
  for (const auto& w : parity_warnings(hps)) std::cerr << "warning: " << w << "\n";
  if (o.format == "svg") {
    if (o.end >= 0)
      emit(o, "limit-end-" + std::to_string(o.end) + ".svg", render_svg(truncate(hps, o.end, parse_rational(o.H))));
    else
      emit(o, "limit.svg", render_svg(hps.spine));
    return kPass;
  }
  ordered_json out;
  out["components"] = hps.components;
  out["half_planes"] = hps.half_planes();
  out["cylinders"] = hps.cylinders();
  out["spine"] = graph_json(hps.spine);
  out["attachments"] = ordered_json::array();
  for (const auto& a : hps.attachments) out["attachments"].push_back({{"side", a.side}, {"cylinder", a.cylinder}});
  out["ends"] = ordered_json::array();
  std::vector<std::vector<std::string>> rows{{"end", "cylinder", "order", "residue"}};
  for (int e = 0; e < static_cast<int>(hps.ends.size()); ++e) {
    const auto d = end_local_data(hps, e);
    ordered_json row{{"sides", hps.ends[e].sides}, {"cylinder", hps.ends[e].cylinder}, {"component", hps.ends[e].component},
                     {"order", d.order}, {"residue", d.residue}};
    if (d.exact_residue) row["residue_exact"] = format_rational(*d.exact_residue);
    out["ends"].push_back(row);
    std::ostringstream r;
    r.precision(17);
    r << d.residue;
    rows.push_back({std::to_string(e), hps.ends[e].cylinder ? "1" : "0", std::to_string(d.order), r.str()});
  }
  out["parity_warnings"] = parity_warnings(hps);
  emit(o, "limit" + ext(o), o.format == "csv" ? csv_rows(rows) : out.dump(2) + "\n");
  return kPass;
}

int cmd_graft(const Options& o) {
  if (o.t.empty()) throw Error(ErrorCode::InvalidArgument, "--t is required");
  if (!o.tau.empty()) {
    if (o.tau.size() != 2 || o.curve.size() != 2) throw Error(ErrorCode::InvalidArgument, "--tau RE IM and --curve P Q");
    const TorusPoint r = graft_torus({{o.tau[0], o.tau[1]}}, {o.curve[0], o.curve[1]}, std::stod(o.t));
    ordered_json out{{"tau", {o.tau[0], o.tau[1]}}, {"curve", o.curve}, {"t", std::stod(o.t)},
                     {"grafted", {r.tau.real(), r.tau.imag()}},
                     {"teich_distance", torus_teich_distance({{o.tau[0], o.tau[1]}}, r)}};
    emit(o, "graft.json", out.dump(2) + "\n");
    return kPass;
  }
  const FlatSurface s = load_surface(o.file);
  GraftLocus locus;
  std::stringstream ss(o.locus);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "locus entries are polygon:edge");
    locus.path.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
  }
  const FlatSurface g = graft_cylinder(s, locus, parse_rational(o.t));
  emit(o, o.format == "svg" ? "graft.svg" : "graft.json", o.format == "svg" ? render_svg(g) : serialize_surface(g));
  return kPass;
}

int cmd_yt(const Options& o) {
  TrainTrackData track;
  if (o.file.empty()) {
    std::mt19937_64 rng(o.seed);
    track = random_track(rng, o.branches);
  } else {
    track = parse_track(read_text_file(o.file));
  }
  validate_track(track);
  const FlatSurface y = build_Yt(track, parse_rational(o.t.empty() ? "1" : o.t));
  emit(o, o.format == "svg" ? "yt.svg" : "yt.json", o.format == "svg" ? render_svg(y) : serialize_surface(y));
  if (o.file.empty() && !o.out.empty()) emit(o, "track.json", serialize_track(track));
  return kPass;
}

int cmd_qc(const Options& o) {
  using namespace qc;
  const int n = o.grid;
  GridMap g;
  if (o.op == "beltrami") {
    const double mu = o.mu;
    g = sample(Domain::rectangle(-1, 1, -1, 1), n, n, [mu](cplx z) { return z + mu * std::conj(z); });
  } else if (o.op == "interpolate-identity") {
    g = interpolate_identity(CircleMap::rotation(o.mu), o.D, {2048, n, n});
  } else if (o.op == "good-rectangle") {
    const double k = 1 + o.epsilon;
    auto lin = [k](double x) { return k * x; };
    g = extend_good_rectangle_map({lin, lin, 2 * o.epsilon, 1 + 10 * o.epsilon}, 100, 100 * k, 10, n, n);
  } else if (o.op == "sew") {
    const double R = std::exp(2 * std::numbers::pi * 1.2), mu = o.mu;
    auto push = [](double m) {
      return [m](cplx z) {
        const cplx u = z + m * std::conj(z);
        return std::abs(z) * u / std::abs(u);
      };
    };
    const auto s = sew_annuli({1, R, 1, R, push(mu)}, {1 / R, 1, 1 / R, 1, push(-mu)}, CircleMap::identity(), {o.epsilon, n, n});
    if (o.format == "csv") {
      emit(o, "qc.csv", quantiles_csv(s.report));
    } else {
      ordered_json out{{"op", o.op}, {"grid", n}, {"epsilon", o.epsilon}, {"mu", mu}, {"supK", s.report.supK}};
      for (const auto& [q, K] : s.report.quantiles) out["quantiles"].push_back({q, K});
      emit(o, "qc.json", out.dump(2) + "\n");
    }
    return kPass;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown qc operation '" + o.op + "'");
  }
  const auto r = dilatation(g);
  if (o.format == "csv") {
    emit(o, "qc.csv", field_csv(r));
  } else {
    ordered_json out{{"op", o.op}, {"grid", n}, {"domain", g.domain.description}, {"supK", r.supK}};
    for (const auto& [q, K] : r.quantiles) out["quantiles"].push_back({q, K});
    emit(o, "qc.json", out.dump(2) + "\n");
  }
  return kPass;
}

int cmd_experiment(const Options& o) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!o.config.empty()) {
    const std::string text = std::filesystem::exists(o.config) ? read_text_file(o.config) : o.config;
    try {
      cfg = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ConfigInvalid, e.what());
    }
  }
  // command-line flags override config entries of the same name
  if (o.given.count("--seed")) cfg["seed"] = o.seed;
  if (o.given.count("--grid")) cfg["grid"] = o.grid;
  if (o.given.count("--epsilon")) cfg["epsilon"] = o.epsilon;
  if (o.given.count("--L")) cfg["L"] = o.L;
  const ExperimentReport r = run_experiment(o.name, cfg, o.out);
  if (o.format == "csv") {
    std::vector<std::vector<std::string>> rows{{"assertion", "passed", "detail"}};
    for (const auto& a : r.assertions) rows.push_back({"\"" + a.name + "\"", a.passed ? "1" : "0", "\"" + a.detail + "\""});
    emit(o, o.name + ".csv", csv_rows(rows));
  } else {
    emit(o, o.name + ".json", r.to_json().dump(2) + "\n");
  }
  return r.passed() ? kPass : kAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flatlab: flat surfaces, Teichmueller rays, conformal limits and grafting"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "write results into this directory");
    c->add_option("--format", o.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  };
  auto surface_arg = [&](CLI::App* c) {
    c->add_option("file", o.file, "surface file, or catalog:NAME")->required();
  };

  auto* validate = app.add_subcommand("validate", "check a surface file; errors carry line numbers");
  validate->add_option("file", o.file)->required();
  common(validate);

  auto* flow_cmd = app.add_subcommand("flow", "Teichmueller flow (x, y) -> (e^{2t} x, y)");
  surface_arg(flow_cmd);
  flow_cmd->add_option("--t", o.t, "flow time (the factor e^{2t} is converted exactly)");
  flow_cmd->add_option("--scale", o.scale, "exact horizontal factor p/q");
  common(flow_cmd);

  auto* vgraph = app.add_subcommand("vgraph", "vertical saddle connections, feelers and sides");
  surface_arg(vgraph);
  vgraph->add_option("--L", o.L, "feeler length (rational)");
  common(vgraph);

  auto* limit = app.add_subcommand("limit", "generalized half-plane limit with end data");
  surface_arg(limit);
  limit->add_option("--L", o.L, "feeler length (rational)");
  limit->add_option("--end", o.end, "with --format svg: render the truncation of this end");
  limit->add_option("--H", o.H, "truncation height (rational)");
  common(limit);

  auto* graft = app.add_subcommand("graft", "graft a surface along a vertical locus, or a torus along a curve");
  graft->add_option("file", o.file, "surface file, or catalog:NAME");
  graft->add_option("--locus", o.locus, "polygon:edge,... in travel order");
  graft->add_option("--tau", o.tau, "torus modulus RE IM")->expected(2);
  graft->add_option("--curve", o.curve, "curve P Q")->expected(2);
  graft->add_option("--t", o.t, "grafting parameter");
  common(graft);

  auto* yt = app.add_subcommand("yt", "Y_t from train-track data (a file, or a random track from --seed)");
  yt->add_option("file", o.file, "track file");
  yt->add_option("--t", o.t, "rational t (default 1)");
  yt->add_option("--seed", o.seed, "seed of the random track (default 1)");
  yt->add_option("--branches", o.branches, "branches of the random track (default 3)");
  common(yt);

  auto* qc_cmd = app.add_subcommand("qc", "quasiconformal toolkit: measured dilatation of a construction");
  qc_cmd->add_option("op", o.op, "beltrami, interpolate-identity, good-rectangle or sew")
      ->check(CLI::IsMember({"beltrami", "interpolate-identity", "good-rectangle", "sew"}));
  qc_cmd->add_option("--grid", o.grid, "grid size N (N x N samples)")->check(CLI::Range(16, 8192));
  qc_cmd->add_option("--epsilon", o.epsilon, "goodness / sewing epsilon");
  qc_cmd->add_option("--mu", o.mu, "perturbation size (Beltrami coefficient, rotation in turns)");
  qc_cmd->add_option("--D", o.D, "strip height of the identity interpolation");
  common(qc_cmd);

  auto* experiment = app.add_subcommand("experiment", "run a scripted experiment and report its assertions");
  experiment->add_option("name", o.name)->required()->check(CLI::IsMember(experiment_names()));
  experiment->add_option("--config", o.config, "JSON object or a file containing one");
  experiment->add_option("--seed", o.seed, "seed for randomized suites");
  experiment->add_option("--grid", o.grid, "grid size for qc-suite");
  experiment->add_option("--epsilon", o.epsilon, "epsilon for qc-suite");
  experiment->add_option("--L", o.L, "feeler length for the limit experiments");
  common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }
  for (auto* sub : app.get_subcommands())
    for (const auto* opt : sub->get_options())
      if (opt->count() > 0) o.given.insert(opt->get_name());

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "validate") return cmd_validate(o);
    if (cmd == "flow") return cmd_flow(o);
    if (cmd == "vgraph") return cmd_vgraph(o);
    if (cmd == "limit") return cmd_limit(o);
    if (cmd == "graft") return cmd_graft(o);
    if (cmd == "yt") return cmd_yt(o);
    if (cmd == "qc") return cmd_qc(o);
    return cmd_experiment(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
