#include "flatlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace flatlab {

namespace {

constexpr std::size_t kMaxElements = 100000;

std::string num(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::Unrenderable, "coordinate is not finite");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  return s == "-0.000" ? "0.000" : s;
}

std::string header(double w, double h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n"
     << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"6\" "
        "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n"
     << "<rect id=\"background\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

}  // namespace

std::string render_svg(const FlatSurface& s) {
  const auto& polys = s.polygons();
  std::size_t edges = 0;
  for (const auto& p : polys) edges += p.vertices.size();
  if (polys.empty() || edges > kMaxElements) throw Error(ErrorCode::Unrenderable, "surface has no polygons or too many edges");

  // bounding boxes, laid out in a row with a gap of a tenth of the tallest
  std::vector<double> minx(polys.size()), miny(polys.size()), wid(polys.size());
  double height = 0, total = 0;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& v : polys[k].vertices) {
      x0 = std::min(x0, v.x.get_d());
      x1 = std::max(x1, v.x.get_d());
      y0 = std::min(y0, v.y.get_d());
      y1 = std::max(y1, v.y.get_d());
    }
    minx[k] = x0;
    miny[k] = y0;
    wid[k] = x1 - x0;
    height = std::max(height, y1 - y0);
    total += wid[k];
  }
  const double gap = 0.1 * std::max(height, total / polys.size());
  total += gap * (polys.size() - 1);
  const double scale = 600 / std::max(total, height), margin = 30;
  const double W = total * scale + 2 * margin, Hpx = height * scale + 2 * margin;

  std::vector<double> offset(polys.size());
  double cursor = 0;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    offset[k] = cursor;
    cursor += wid[k] + gap;
  }
  auto px = [&](std::size_t k, const Vec2& v) {
    return std::pair{margin + (v.x.get_d() - minx[k] + offset[k]) * scale,
                     Hpx - margin - (v.y.get_d() - miny[k]) * scale};
  };

  std::ostringstream os;
  os << header(W, Hpx);
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const auto& v = polys[k].vertices;
    os << "<g id=\"polygon-" << k << "\">\n<polygon points=\"";
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto [x, y] = px(k, v[i]);
      os << (i ? " " : "") << num(x) << ',' << num(y);
    }
    os << "\" fill=\"#e8eef7\" stroke=\"none\"/>\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      const EdgeRef e{static_cast<int>(k), static_cast<int>(i)};
      const int g = s.gluing_index(e);
      const bool second = s.gluings()[g].b == e;
      auto [x0, y0] = px(k, v[i]);
      auto [x1, y1] = px(k, v[(i + 1) % v.size()]);
      // the partner edge is traversed backwards, so its arrow is reversed
      if (second) {
        std::swap(x0, x1);
        std::swap(y0, y1);
      }
      const double mx = (x0 + x1) / 2, my = (y0 + y1) / 2;
      os << "<path id=\"edge-" << k << '-' << i << "\" d=\"M" << num(x0) << ',' << num(y0) << " L" << num(mx) << ','
         << num(my) << " L" << num(x1) << ',' << num(y1) << "\" stroke=\"black\" fill=\"none\" marker-mid=\"url(#arrow)\"/>\n";
      // label pushed slightly into the polygon (left of the ccw edge)
      const double dx = x1 - x0, dy = y1 - y0, len = std::hypot(dx, dy);
      const double side = second ? -1 : 1;
      const double lx = mx + side * 12 * dy / len, ly = my - side * 12 * dx / len;
      os << "<text id=\"label-" << k << '-' << i << "\" x=\"" << num(lx) << "\" y=\"" << num(ly)
         << "\" font-size=\"11\" text-anchor=\"middle\">" << (s.gluings()[g].sign == 1 ? "t" : "h") << g << "</text>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_svg(const VerticalGraph& g) {
  if (g.vertices.empty()) throw Error(ErrorCode::Unrenderable, "graph has no vertices");
  if (g.edges.size() + g.feelers.size() > kMaxElements) throw Error(ErrorCode::Unrenderable, "graph is too large");
  const double spacing = 220, stub = 50, margin = 120;
  const double W = 2 * margin + spacing * (g.vertices.size() - 1), H = 2 * margin + 40;
  auto center = [&](int v) { return std::pair{margin + spacing * v, H / 2}; };
  auto angle = [&](Prong p) {
    const int v = g.vertex_index(p.vertex);
    if (v < 0) throw Error(ErrorCode::Unrenderable, "prong refers to a vertex outside the graph");
    const int n = std::max(g.vertices[v].prongs, 1);
    return std::pair{v, -std::numbers::pi / 2 + 2 * std::numbers::pi * p.index / n};
  };

  std::ostringstream os;
  os << header(W, H);
  os << "<g id=\"connections\">\n";
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    const auto [va, aa] = angle(e.from);
    const auto [vb, ab] = angle(e.to);
    const auto [xa, ya] = center(va);
    const auto [xb, yb] = center(vb);
    const double reach = 0.6 * spacing + 30 * static_cast<double>(k % 3);
    const double c1x = xa + reach * std::cos(aa), c1y = ya + reach * std::sin(aa);
    const double c2x = xb + reach * std::cos(ab), c2y = yb + reach * std::sin(ab);
    os << "<path id=\"connection-" << k << "\" d=\"M" << num(xa) << ',' << num(ya) << " C" << num(c1x) << ','
       << num(c1y) << ' ' << num(c2x) << ',' << num(c2y) << ' ' << num(xb) << ',' << num(yb)
       << "\" stroke=\"#1f4e9a\" fill=\"none\"/>\n";
    // point of the bezier at 1/2
    const double lx = 0.125 * xa + 0.375 * c1x + 0.375 * c2x + 0.125 * xb;
    const double ly = 0.125 * ya + 0.375 * c1y + 0.375 * c2y + 0.125 * yb;
    os << "<text id=\"connection-label-" << k << "\" x=\"" << num(lx) << "\" y=\"" << num(ly)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << format_rational(e.length) << "</text>\n";
  }
  os << "</g>\n<g id=\"feelers\">\n";
  for (std::size_t k = 0; k < g.feelers.size(); ++k) {
    const auto [v, a] = angle(g.feelers[k].prong);
    const auto [x, y] = center(v);
    os << "<line id=\"feeler-" << k << "\" x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\""
       << num(x + stub * std::cos(a)) << "\" y2=\"" << num(y + stub * std::sin(a))
       << "\" stroke=\"#b03a2e\" stroke-dasharray=\"4 3\"/>\n";
  }
  os << "</g>\n<g id=\"vertices\">\n";
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto [x, y] = center(static_cast<int>(v));
    os << "<circle id=\"vertex-" << v << "\" cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"5\" fill=\"black\"/>\n"
       << "<text id=\"vertex-label-" << v << "\" x=\"" << num(x + 8) << "\" y=\"" << num(y + 16)
       << "\" font-size=\"11\">" << g.vertices[v].prongs << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string render_svg(const Truncation& t) {
  const std::size_t n = t.side_lengths.size();
  if (n == 0 || t.widths.size() != n) throw Error(ErrorCode::Unrenderable, "truncation has no sides or mismatched widths");
  if (n > kMaxElements) throw Error(ErrorCode::Unrenderable, "truncation is too large");
  double longest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.side_lengths[i] <= 0 || t.widths[i] <= 0) throw Error(ErrorCode::Unrenderable, "side lengths and widths must be positive");
    longest = std::max(longest, t.side_lengths[i].get_d() + t.widths[i].get_d());
  }
  const double size = 600, c = size / 2;
  std::ostringstream os;
  os << header(size, size);
  if (t.closed) {
    // circumference -> radius; width measured radially
    const double r = t.side_lengths[0].get_d() / (2 * std::numbers::pi), w = t.widths[0].get_d();
    const double scale = 250 / (r + w);
    os << "<circle id=\"annulus-outer\" cx=\"" << num(c) << "\" cy=\"" << num(c) << "\" r=\"" << num((r + w) * scale)
       << "\" fill=\"#e8eef7\" stroke=\"black\"/>\n"
       << "<circle id=\"annulus-inner\" cx=\"" << num(c) << "\" cy=\"" << num(c) << "\" r=\"" << num(r * scale)
       << "\" fill=\"white\" stroke=\"#1f4e9a\"/>\n";
    os << "</svg>\n";
    return os.str();
  }
  const double scale = 250 / longest;
  os << "<g id=\"rectangles\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double a = -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / n;
    const double l = t.side_lengths[i].get_d() * scale, w = t.widths[i].get_d() * scale;
    const double ux = std::cos(a), uy = std::sin(a);  // along the leg
    const double nx = -uy, ny = ux;                   // to its right in screen coordinates
    const double x1 = c + l * ux, y1 = c + l * uy;
    os << "<polygon id=\"rectangle-" << i << "\" points=\"" << num(c) << ',' << num(c) << ' ' << num(x1) << ','
       << num(y1) << ' ' << num(x1 + w * nx) << ',' << num(y1 + w * ny) << ' ' << num(c + w * nx) << ','
       << num(c + w * ny) << "\" fill=\"#e8eef7\" fill-opacity=\"0.7\" stroke=\"black\"/>\n";
  }
  os << "</g>\n<g id=\"spine\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double a = -std::numbers::pi / 2 + 2 * std::numbers::pi * static_cast<double>(i) / n;
    const double l = t.side_lengths[i].get_d() * scale;
    os << "<line id=\"leg-" << i << "\" x1=\"" << num(c) << "\" y1=\"" << num(c) << "\" x2=\"" << num(c + l * std::cos(a))
       << "\" y2=\"" << num(c + l * std::sin(a)) << "\" stroke=\"#1f4e9a\" stroke-width=\"2\"/>\n"
       << "<text id=\"leg-label-" << i << "\" x=\"" << num(c + 0.5 * l * std::cos(a) - 10 * std::sin(a)) << "\" y=\""
       << num(c + 0.5 * l * std::sin(a) + 10 * std::cos(a)) << "\" font-size=\"11\" text-anchor=\"middle\">"
       << format_rational(t.side_lengths[i]) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace flatlab
