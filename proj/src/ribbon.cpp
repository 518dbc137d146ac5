#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "flatlab/vertical_graph.hpp"

namespace flatlab {

namespace {

struct Ribbon {
  const VerticalGraph& g;
  std::map<Prong, Dart> occupant;

  explicit Ribbon(const VerticalGraph& graph) : g(graph) {
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      occupant[g.edges[e].from] = {Dart::EdgeForward, e};
      occupant[g.edges[e].to] = {Dart::EdgeBackward, e};
    }
    for (int f = 0; f < static_cast<int>(g.feelers.size()); ++f) occupant[g.feelers[f].prong] = {Dart::FeelerOut, f};
  }

  std::vector<Dart> darts() const {
    std::vector<Dart> out;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      out.push_back({Dart::EdgeForward, e});
      out.push_back({Dart::EdgeBackward, e});
    }
    for (int f = 0; f < static_cast<int>(g.feelers.size()); ++f) {
      out.push_back({Dart::FeelerOut, f});
      out.push_back({Dart::FeelerBack, f});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  static Dart opposite(Dart d) {
    switch (d.kind) {
      case Dart::EdgeForward: return {Dart::EdgeBackward, d.id};
      case Dart::EdgeBackward: return {Dart::EdgeForward, d.id};
      case Dart::FeelerOut: return {Dart::FeelerBack, d.id};
      case Dart::FeelerBack: return {Dart::FeelerOut, d.id};
    }
    return d;
  }

  // next occupied prong counterclockwise; tips have a single dart
  Dart rotate(Dart d) const {
    if (d.kind == Dart::FeelerBack) return d;
    Prong p = d.kind == Dart::EdgeForward    ? g.edges[d.id].from
              : d.kind == Dart::EdgeBackward ? g.edges[d.id].to
                                             : g.feelers[d.id].prong;
    const int k = g.vertices[g.vertex_index(p.vertex)].prongs;
    for (int step = 1; step <= k; ++step) {
      auto it = occupant.find({p.vertex, (p.index + step) % k});
      if (it != occupant.end()) return it->second;
    }
    return d;
  }

  Dart next(Dart d) const { return rotate(opposite(d)); }

  int vertex_of(Dart d) const {
    const Prong p = d.kind == Dart::EdgeForward    ? g.edges[d.id].from
                    : d.kind == Dart::EdgeBackward ? g.edges[d.id].to
                                                   : g.feelers[d.id].prong;
    return g.vertex_index(p.vertex);
  }
};

}  // namespace

std::vector<int> graph_components(const VerticalGraph& g) {
  std::vector<int> parent(g.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    int a = find(g.vertex_index(e.from.vertex)), b = find(g.vertex_index(e.to.vertex));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, int> label;
  std::vector<int> out(g.vertices.size());
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    const int root = find(v);
    auto it = label.find(root);
    if (it == label.end()) it = label.emplace(root, static_cast<int>(label.size())).first;
    out[v] = it->second;
  }
  return out;
}

std::vector<std::vector<Dart>> boundary_walks(const VerticalGraph& g) {
  const Ribbon ribbon(g);
  std::set<Dart> seen;
  std::vector<std::vector<Dart>> walks;
  for (Dart start : ribbon.darts()) {
    if (seen.count(start)) continue;
    std::vector<Dart> walk;
    for (Dart d = start; !seen.count(d); d = ribbon.next(d)) {
      seen.insert(d);
      walk.push_back(d);
    }
    walks.push_back(std::move(walk));
  }
  return walks;
}

std::vector<Side> sides(const VerticalGraph& g) {
  const Ribbon ribbon(g);
  const auto comps = graph_components(g);
  const auto walks = boundary_walks(g);
  std::vector<Side> out;
  for (int w = 0; w < static_cast<int>(walks.size()); ++w) {
    auto walk = walks[w];
    const int component = comps[ribbon.vertex_of(walk.front().kind == Dart::FeelerBack
                                                     ? Dart{Dart::FeelerOut, walk.front().id}
                                                     : walk.front())];
    auto first_back = std::find_if(walk.begin(), walk.end(), [](Dart d) { return d.kind == Dart::FeelerBack; });
    auto lengths_of = [&](const std::vector<Dart>& part) {
      std::vector<Rational> ls;
      for (Dart d : part)
        if (d.kind == Dart::EdgeForward || d.kind == Dart::EdgeBackward) ls.push_back(g.edges[d.id].length);
      return ls;
    };
    if (first_back == walk.end()) {
      out.push_back({walk, true, lengths_of(walk), w, component});
      continue;
    }
    std::rotate(walk.begin(), first_back, walk.end());
    Side current;
    for (Dart d : walk) {
      current.walk.push_back(d);
      if (d.kind == Dart::FeelerOut) {
        current.is_cycle = false;
        current.length_sequence = lengths_of(current.walk);
        current.boundary = w;
        current.component = component;
        out.push_back(std::move(current));
        current = Side{};
      }
    }
  }
  return out;
}

int ribbon_genus(const VerticalGraph& g, int component) {
  const auto comps = graph_components(g);
  const Ribbon ribbon(g);
  int V = 0, E = 0, W = 0;
  std::set<int> touched;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v)
    if (comps[v] == component) ++V;
  for (const auto& e : g.edges)
    if (comps[g.vertex_index(e.from.vertex)] == component) ++E;
  for (const auto& f : g.feelers)
    if (comps[g.vertex_index(f.prong.vertex)] == component) ++V, ++E;
  for (const auto& walk : boundary_walks(g)) {
    Dart d = walk.front();
    if (d.kind == Dart::FeelerBack) d = Ribbon::opposite(d);
    if (comps[ribbon.vertex_of(d)] == component) ++W;
  }
  for (const auto& e : g.edges) touched.insert(g.vertex_index(e.from.vertex));
  for (const auto& f : g.feelers) touched.insert(g.vertex_index(f.prong.vertex));
  // an isolated vertex thickens to a disk with one boundary circle
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v)
    if (comps[v] == component && !touched.count(v)) ++W;
  return (2 - (V - E + W)) / 2;
}

Rational side_length(const Side& side) {
  Rational total = 0;
  for (const auto& l : side.length_sequence) total += l;
  return total;
}

}  // namespace flatlab
