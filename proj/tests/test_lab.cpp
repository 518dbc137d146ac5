#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "flatlab/catalog.hpp"
#include "flatlab/experiments.hpp"
#include "flatlab/half_plane.hpp"
#include "flatlab/surface_io.hpp"
#include "flatlab/svg.hpp"

using namespace flatlab;

namespace {

bool same_data(const FlatSurface& a, const FlatSurface& b) {
  if (a.polygons().size() != b.polygons().size() || a.gluings().size() != b.gluings().size()) return false;
  for (std::size_t k = 0; k < a.polygons().size(); ++k)
    if (a.polygons()[k].vertices != b.polygons()[k].vertices) return false;
  for (std::size_t k = 0; k < a.gluings().size(); ++k) {
    const Gluing &g = a.gluings()[k], &h = b.gluings()[k];
    if (g.a != h.a || g.b != h.b || g.sign != h.sign) return false;
  }
  return a.markings().edges == b.markings().edges && a.markings().vertices == b.markings().vertices;
}

// two unit squares glued into a genus one surface; gluings on lines 8..11
const char* kTwoSquares = R"({
  "schema": 1,
  "polygons": [
    [["0", "0"], ["1", "0"], ["1", "1"], ["0", "1"]],
    [["1", "0"], ["2", "0"], ["2", "1"], ["1", "1"]]
  ],
  "gluings": [
    [[0, 1], [1, 3], 1],
    [[1, 1], [0, 3], 1],
    [[0, 0], [0, 2], 1],
    [[1, 0], [1, 2], 1]
  ]
}
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("catalog surfaces survive a round trip") {
  for (const auto& name : catalog_names()) {
    CAPTURE(name);
    const FlatSurface s = catalog_surface(name);
    const std::string text = serialize_surface(s);
    const FlatSurface back = parse_surface(text);
    CHECK(same_data(s, back));
    CHECK(serialize_surface(back) == text);
  }
}

TEST_CASE("round trip keeps markings and random rational tori") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(1, 97), den(1, 13);
  for (int trial = 0; trial < 50; ++trial) {
    const Rational w(num(rng), den(rng)), h(num(rng), den(rng));
    FlatSurface s = rect_torus(w, h);
    Markings m;
    m.edges[{0, 0}] = "bottom \"b\"";
    m.vertices[{0, 2}] = "corner";
    s = FlatSurface::build(s.polygons(), s.gluings(), m);
    CHECK(same_data(s, parse_surface(serialize_surface(s))));
  }
}

TEST_CASE("valid file has no diagnostics") {
  CHECK(validate_surface_text(kTwoSquares).ok());
  CHECK(genus(parse_surface(kTwoSquares)) == 1);
}

TEST_CASE("vector mismatch is anchored to the gluing line and names both edges") {
  // a clean single mismatch: flip the direction of one vertical gluing
  const std::string bad2 = replace(kTwoSquares, "[[0, 0], [0, 2], 1]", "[[0, 0], [0, 2], -1]");
  const Diagnostics d2 = validate_surface_text(bad2);
  REQUIRE(d2.items.size() == 1);
  CHECK(d2.items[0].code == ErrorCode::VectorMismatch);
  CHECK(d2.items[0].line == 10);
  CHECK(d2.items[0].message.find("[0, 0]") != std::string::npos);
  CHECK(d2.items[0].message.find("[0, 2]") != std::string::npos);
  CHECK_THROWS_WITH_AS(parse_surface(bad2), doctest::Contains("line 10:"), Error);
}

TEST_CASE("unglued and doubly glued edges are anchored") {
  const std::string dropped = replace(kTwoSquares, "    [[1, 0], [1, 2], 1]\n", "");
  std::string d = replace(dropped, "[[0, 0], [0, 2], 1],", "[[0, 0], [0, 2], 1]");
  const Diagnostics a = validate_surface_text(d);
  REQUIRE(a.items.size() == 2);
  for (const auto& item : a.items) {
    CHECK(item.code == ErrorCode::UnmatchedEdge);
    CHECK(item.line == 5);  // polygon 1
    CHECK(item.message.find("not glued") != std::string::npos);
  }

  const std::string twice = replace(kTwoSquares, "[[1, 0], [1, 2], 1]", "[[1, 0], [0, 2], 1]");
  const Diagnostics b = validate_surface_text(twice);
  REQUIRE(!b.ok());
  CHECK(b.items[0].code == ErrorCode::UnmatchedEdge);
  CHECK(b.items[0].line == 11);
  CHECK(b.items[0].message.find("already glued on line 10") != std::string::npos);

  const std::string missing = replace(kTwoSquares, "[[1, 0], [1, 2], 1]", "[[1, 0], [1, 7], 1]");
  const Diagnostics c = validate_surface_text(missing);
  REQUIRE(!c.ok());
  CHECK(c.items[0].line == 11);
  CHECK(c.items[0].message.find("missing edge [1, 7]") != std::string::npos);
}

TEST_CASE("syntax and schema errors") {
  const Diagnostics a = validate_surface_text(replace(kTwoSquares, "[[0, 1], [1, 3], 1],", "[[0, 1], [1, 3], 1],,"));
  REQUIRE(a.items.size() == 1);
  CHECK(a.items[0].code == ErrorCode::ParseError);
  CHECK(a.items[0].line == 8);

  const Diagnostics b = validate_surface_text(replace(kTwoSquares, "\"schema\": 1", "\"schema\": 9"));
  REQUIRE(b.items.size() == 1);
  CHECK(b.items[0].line == 2);

  const Diagnostics c = validate_surface_text(replace(kTwoSquares, "[\"2\", \"1\"]", "[\"2/0\", \"1\"]"));
  REQUIRE(c.items.size() == 1);
  CHECK(c.items[0].code == ErrorCode::ParseError);
  CHECK(c.items[0].line == 5);

  const Diagnostics e = validate_file("/nonexistent/surface.json");
  REQUIRE(e.items.size() == 1);
  CHECK(e.items[0].line == 0);
}

TEST_CASE("kernel errors are anchored to the polygon") {
  // clockwise polygon 1
  const std::string cw = replace(kTwoSquares, R"([["1", "0"], ["2", "0"], ["2", "1"], ["1", "1"]])",
                                 R"([["1", "0"], ["1", "1"], ["2", "1"], ["2", "0"]])");
  const Diagnostics d = validate_surface_text(cw);
  REQUIRE(!d.ok());
  // the clockwise square flips every edge vector, so gluings fail first
  CHECK(d.items[0].code == ErrorCode::VectorMismatch);
}

namespace {

int count(const std::string& text, const std::string& what) {
  int n = 0;
  for (auto at = text.find(what); at != std::string::npos; at = text.find(what, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("square torus renders one square with gluing arrows") {
  const std::string svg = render_svg(rect_torus(1, 1));
  CHECK(count(svg, "<polygon ") == 1);
  CHECK(count(svg, "id=\"edge-0-") == 4);
  CHECK(count(svg, "marker-mid=\"url(#arrow)\"") == 4);
  // both gluings labelled twice
  CHECK(count(svg, ">t0<") == 2);
  CHECK(count(svg, ">t1<") == 2);
  CHECK(svg == render_svg(rect_torus(1, 1)));
}

TEST_CASE("slit-torus vertical graph renders its vertices, connections and feelers") {
  const VerticalGraph g = appended_graph(slit_torus_example(), 3);
  const std::string svg = render_svg(g);
  CHECK(count(svg, "<circle id=\"vertex-") == 2);
  CHECK(count(svg, "<path id=\"connection-") == static_cast<int>(g.edges.size()));
  CHECK(count(svg, "<line id=\"feeler-") == static_cast<int>(g.feelers.size()));
  CHECK(g.feelers.size() > 0);
  CHECK(svg == render_svg(appended_graph(slit_torus_example(), 3)));
}

TEST_CASE("truncation of an order-5 end is three rectangles around a tripod") {
  const auto hps = y_infinity(generic_simple_zeros(), 2);
  int rendered = 0;
  for (int e = 0; e < static_cast<int>(hps.ends.size()); ++e) {
    if (end_local_data(hps, e).order != 5) continue;
    const std::string svg = render_svg(truncate(hps, e, 4));
    CHECK(count(svg, "<polygon id=\"rectangle-") == 3);
    CHECK(count(svg, "<line id=\"leg-") == 3);
    ++rendered;
  }
  CHECK(rendered == 4);
}

TEST_CASE("unrenderable inputs") {
  CHECK_THROWS_AS(render_svg(VerticalGraph{}), Error);
  Truncation t;
  CHECK_THROWS_AS(render_svg(t), Error);
  t.side_lengths = {1, 2};
  t.widths = {1};
  try {
    render_svg(t);
    FAIL("expected Unrenderable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unrenderable);
  }
  t.closed = true;
  t.side_lengths = {6};
  CHECK(render_svg(t).find("annulus-inner") != std::string::npos);
}

TEST_CASE("experiment reports are deterministic") {
  for (const char* name : {"slit-torus-limit", "strebel-warmup", "torus-asymptoticity"}) {
    CAPTURE(name);
    CHECK(run_experiment(name).to_json().dump() == run_experiment(name).to_json().dump());
  }
  const nlohmann::json cfg = {{"seed", 11}, {"trials", 12}};
  const auto a = run_experiment("yt-ray-property", cfg).to_json().dump();
  CHECK(a == run_experiment("yt-ray-property", cfg).to_json().dump());
  CHECK(a != run_experiment("yt-ray-property", {{"seed", 12}, {"trials", 12}}).to_json().dump());
}

TEST_CASE("experiment names and config errors") {
  CHECK(experiment_names().size() == 5);
  auto code = [](const std::string& name, const nlohmann::json& cfg) {
    try {
      run_experiment(name, cfg);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code("no-such-thing", nlohmann::json::object()) == ErrorCode::UnknownExperiment);
  CHECK(code("slit-torus-limit", {{"bogus", 1}}) == ErrorCode::ConfigInvalid);
  CHECK(code("slit-torus-limit", {{"L", "x/y"}}) == ErrorCode::ConfigInvalid);
  CHECK(code("slit-torus-limit", {{"L", "-1"}}) == ErrorCode::ConfigInvalid);
  CHECK(code("yt-ray-property", {{"trials", "many"}}) == ErrorCode::ConfigInvalid);
  CHECK(code("yt-ray-property", {{"ratios", {"1/2"}}}) == ErrorCode::ConfigInvalid);
  CHECK(code("torus-asymptoticity", {{"tau", {0, -1}}}) == ErrorCode::ConfigInvalid);
  CHECK(code("qc-suite", {{"grid", 15}}) == ErrorCode::ConfigInvalid);
  CHECK(code("qc-suite", nlohmann::json::array()) == ErrorCode::ConfigInvalid);
}

TEST_CASE("slit-torus report: inputs echoed, limit data measured") {
  const auto r = run_experiment("slit-torus-limit");
  CHECK(r.inputs["L"] == "3");
  CHECK(r.measured["genus"] == 2);
  CHECK(r.measured["half_planes"] == 2);
  CHECK(r.measured["cylinders"] == 0);
  // every assertion but the interval count holds; see the README
  for (const auto& a : r.assertions) {
    CAPTURE(a.name);
    CHECK(a.passed == (a.name != "boundary gluing is a 2-interval exchange"));
  }
}

TEST_CASE("torus report against the rectangular-lattice oracle") {
  // tau = i, gamma = 1: graft by T gives i (1 + T), the ray point is i k
  const auto r = run_experiment("torus-asymptoticity", {{"curves", {{1, 0}}}, {"steps", 4}});
  REQUIRE(r.measured["runs"].size() == 2);
  for (const auto& run : r.measured["runs"]) {
    const double H = run["horizon"].get<double>();
    const bool exp_reading = run["reading"] == "exp";
    const double T = exp_reading ? std::exp(2 * H) : std::exp(2.0) * H;
    const double k = exp_reading ? std::exp(2 * H) : std::exp(2.0) * H;
    // d_hyp between i a and i b is |ln(a / b)|
    CHECK(run["d_horizon"].get<double>() == doctest::Approx(0.5 * std::log((1 + T) / k)).epsilon(1e-9));
  }
  CHECK(r.passed());
}

TEST_CASE("artifacts land in the output directory") {
  const auto dir = std::filesystem::temp_directory_path() / "flatlab-test-artifacts";
  std::filesystem::remove_all(dir);
  const auto r = run_experiment("strebel-warmup", nlohmann::json::object(), dir.string());
  REQUIRE(r.artifacts.size() == 2);
  for (const auto& a : r.artifacts) CHECK(std::filesystem::exists(dir / a));
  std::filesystem::remove_all(dir);
}

TEST_CASE("track files round trip") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = random_track(rng, 1 + trial % 4);
    const auto text = serialize_track(t);
    const auto back = parse_track(text);
    CHECK(serialize_track(back) == text);
    CHECK(isometric(build_Yt(t, 2), build_Yt(back, 2)));
  }
  CHECK_THROWS_AS(parse_track("{\"branches\": [{\"weight\": \"1\"}]}"), Error);
}
