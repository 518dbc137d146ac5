// Acceptance run: one line per criterion, with the tolerances and time limits
// fixed here. --xfail NAME marks a criterion known to fail; the run then
// succeeds only if the failures are exactly the marked ones.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flatlab/catalog.hpp"
#include "flatlab/experiments.hpp"
#include "flatlab/half_plane.hpp"
#include "flatlab/vertical_graph.hpp"

using namespace flatlab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double seconds;  // time limit
  std::function<Outcome()> run;
};

std::string failed_assertions(const ExperimentReport& r) {
  std::ostringstream os;
  int n = 0;
  for (const auto& a : r.assertions) {
    if (a.passed) continue;
    os << (n++ ? "; " : "") << a.name << " (" << a.detail << ")";
  }
  if (n == 0) os << r.assertions.size() << " assertions hold";
  return os.str();
}

Outcome from_report(const ExperimentReport& r) { return {r.passed(), failed_assertions(r)}; }

Outcome generic_limit() {
  const FlatSurface s = generic_simple_zeros();
  const auto cones = cone_data(s);
  bool simple = cones.size() == 4;
  for (const auto& c : cones) simple = simple && c.angle_pi == 3;
  const auto short_connections = vertical_saddle_connections(s, 100);
  const auto hps = y_infinity(s, 2);
  std::map<int, int> planes;  // component -> half-planes
  for (const auto& a : hps.attachments)
    if (!a.cylinder) ++planes[hps.sides[a.side].component];
  bool tripods = hps.components == 4 && hps.cylinders() == 0 && hps.ends.size() == 4;
  for (int c = 0; c < hps.components; ++c) tripods = tripods && planes[c] == 3;
  for (int e = 0; e < static_cast<int>(hps.ends.size()); ++e) {
    const EndData d = end_local_data(hps, e);
    tripods = tripods && d.order == 5 && d.exact_residue && *d.exact_residue == 0;
  }
  std::ostringstream os;
  os << cones.size() << " cone points, " << short_connections.size() << " vertical connections <= 100, "
     << hps.components << " components, " << hps.ends.size() << " ends";
  return {simple && short_connections.empty() && tripods, os.str()};
}

Rational random_rational(std::mt19937_64& rng, int lo, int hi) {
  Rational r(std::uniform_int_distribution<int>(lo * 12, hi * 12)(rng), 12);
  r.canonicalize();
  return r;
}

Outcome residue_suite() {
  std::mt19937_64 rng(2024);
  int invariant = 0, multiset = 0, agree = 0, surfaces = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    CrownEnd c;
    for (int i = 0; i < n; ++i) {
      c.L.push_back(random_rational(rng, -5, 0));
      c.R.push_back(random_rational(rng, 1, 6));
    }
    CrownEnd moved = c;
    for (int i = 0; i < n; ++i) {  // basepoint shifts
      const Rational s = random_rational(rng, -3, 3);
      moved.L[i] += s;
      moved.R[i] += s;
    }
    const int spike = trial % n;  // a deeper leaf in one spike
    const Rational u = random_rational(rng, 0, 4);
    moved.R[spike] += u;
    moved.L[(spike + 1) % n] -= u;
    invariant += crown_residue(moved) == crown_residue(c);

    const Rational H = 100;
    auto lengths = normalize_truncation(c, H);
    std::sort(lengths.begin(), lengths.end());
    std::vector<Rational> expect(n, H);
    expect.back() += crown_residue(c);
    multiset += lengths == expect;
  }
  const std::vector<std::pair<FlatSurface, Rational>> limits{
      {slit_torus_example(), 3}, {strebel_warmup(), 1}, {generic_simple_zeros(), 2}};
  for (const auto& [s, L] : limits) {
    const auto hps = y_infinity(s, L);
    bool ok = true;
    for (int e = 0; e < static_cast<int>(hps.ends.size()); ++e) {
      std::vector<Side> end_sides;
      for (int i : hps.ends[e].sides) end_sides.push_back(hps.sides[i]);
      ok = ok && std::abs(limit_residue_from_graph(hps.spine, end_sides) - end_local_data(hps, e).residue) <= 1e-12;
    }
    agree += ok;
    ++surfaces;
  }
  std::ostringstream os;
  os << "crown invariance " << invariant << "/200, truncation multiset " << multiset << "/200, graph residues " << agree
     << "/" << surfaces << " surfaces";
  return {invariant == 200 && multiset == 200 && agree == surfaces, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<std::string> xfail;
  app.add_option("--xfail", xfail, "criteria expected to fail");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"slit-torus-limit", 1, [] { return from_report(run_experiment("slit-torus-limit")); }},
      {"generic-limit-count", 5, generic_limit},
      {"yt-ray-property", 30, [] { return from_report(run_experiment("yt-ray-property", {{"trials", 100}})); }},
      {"torus-asymptoticity", 5,
       [] {
         return from_report(run_experiment("torus-asymptoticity", {{"curves", {{1, 0}, {0, 1}, {1, 1}}}, {"tolerance", 1e-9}}));
       }},
      {"qc-suite", 120, [] { return from_report(run_experiment("qc-suite", {{"grid", 512}, {"epsilon", 0.01}})); }},
      {"residue-suite", 5, residue_suite},
  };

  std::set<std::string> expected(xfail.begin(), xfail.end()), failed;
  for (const auto& name : expected) {
    if (std::none_of(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.name == name; })) {
      std::fprintf(stderr, "unknown criterion '%s'\n", name.c_str());
      return 2;
    }
  }
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.passed && secs < c.seconds;
    if (!pass) failed.insert(c.name);
    std::printf("%s %-20s %8.3f s (limit %g s)  %s%s\n", pass ? "PASS" : "FAIL", c.name.c_str(), secs, c.seconds,
                o.detail.c_str(), expected.count(c.name) ? "  [expected failure]" : "");
    std::fflush(stdout);
  }
  if (failed == expected) {
    std::printf("acceptance: %zu/%zu criteria pass; failures match the expected set\n", criteria.size() - failed.size(),
                criteria.size());
    return 0;
  }
  std::printf("acceptance: failures differ from the expected set\n");
  return 1;
}
