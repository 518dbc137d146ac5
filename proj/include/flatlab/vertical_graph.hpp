#pragma once

#include <vector>

#include "flatlab/flat_surface.hpp"

namespace flatlab {

/// One of the vertical directions leaving a cone point. A cone angle of k*pi
/// has k prongs, numbered counterclockwise starting in the lowest corner of
/// the vertex class.
struct Prong {
  int vertex = 0;  // vertex class id of the cone point
  int index = 0;

  friend auto operator<=>(const Prong&, const Prong&) = default;
  friend bool operator==(const Prong&, const Prong&) = default;
};

/// Straight vertical piece of a trajectory inside one polygon, from y_start
/// to y_end at abscissa x. along_edge is the polygon edge it runs on, or -1.
struct TraceSegment {
  int polygon = 0;
  Rational x;
  Rational y_start;
  Rational y_end;
  int along_edge = -1;

  int dy() const { return y_end > y_start ? 1 : -1; }
  Rational length() const { return abs(y_end - y_start); }
};

struct SaddleConnection {
  Prong from;
  Prong to;
  Rational length;
  std::vector<TraceSegment> path;  // from -> to
};

struct Feeler {
  Prong prong;
  Rational length;
  std::vector<TraceSegment> path;  // away from the cone point
};

struct GraphVertex {
  int vertex_class = 0;
  int prongs = 0;  // order + 2
};

/// Vertical saddle connections with feelers of length L on the free prongs.
struct VerticalGraph {
  std::vector<GraphVertex> vertices;
  std::vector<SaddleConnection> edges;
  std::vector<Feeler> feelers;
  Rational L;

  /// Position of a vertex class in `vertices`, or -1.
  int vertex_index(int vertex_class) const;
};

/// Every vertical segment between cone points of length at most `bound`,
/// sorted by (from, to) with from < to in prong order. Separatrices are traced
/// exactly through the polygons; flat vertices are passed straight through.
std::vector<SaddleConnection> vertical_saddle_connections(const FlatSurface& s, const Rational& bound);

/// Saddle connections of length <= L plus feelers of length L on the other
/// prongs. Throws FeelersCollide when two feelers would overlap, i.e. a
/// connection of length in (L, 2L] joins two free prongs.
VerticalGraph appended_graph(const FlatSurface& s, const Rational& L);

/// Keeps connections of length <= L and replaces longer ones by two feelers.
VerticalGraph restrict_graph(const VerticalGraph& g, const Rational& L);

/// Oriented traversal of a connection or feeler in a boundary walk.
struct Dart {
  enum Kind { EdgeForward, EdgeBackward, FeelerOut, FeelerBack };
  Kind kind = EdgeForward;
  int id = 0;

  friend auto operator<=>(const Dart&, const Dart&) = default;
  friend bool operator==(const Dart&, const Dart&) = default;
};

/// Stretch of a ribbon boundary walk between two feeler tips, or a whole walk
/// without tips (a cycle). The face of the ribbon lies to the right.
struct Side {
  std::vector<Dart> walk;
  bool is_cycle = false;
  std::vector<Rational> length_sequence;  // saddle connection lengths in walk order
  int boundary = 0;                       // index of the unsplit boundary walk
  int component = 0;
};

/// Boundary walks of the ribbon graph, one per face of the thickening.
std::vector<std::vector<Dart>> boundary_walks(const VerticalGraph& g);

/// Sides in walk order; sides of one walk are consecutive and cyclically ordered.
std::vector<Side> sides(const VerticalGraph& g);

/// Connected component of each graph vertex; components are numbered by
/// their smallest vertex.
std::vector<int> graph_components(const VerticalGraph& g);

/// Genus of the thickened component from V - E + (boundary walks).
int ribbon_genus(const VerticalGraph& g, int component);

Rational side_length(const Side& side);

struct CollarRect {
  int side = 0;
  int polygon = 0;
  Vec2 base;  // lower end of the vertical segment on the side
  Rational height;
  Rational width;     // half the horizontal distance to the facing side
  int direction = 1;  // +1 grows to the east in the polygon's frame
};

struct PolygonalPiece {
  int component = 0;
  std::vector<int> sides;
  std::vector<Rational> collar_widths;  // widest uniform collar per side that embeds
  std::vector<CollarRect> region;
};

/// Splits every horizontal leaf segment between two sides at its midpoint.
/// Throws CollarOverlap when some leaf misses the graph (L too short) or the
/// collars fail to tile the surface.
std::vector<PolygonalPiece> polygonal_decomposition(const FlatSurface& s, const Rational& L);

}  // namespace flatlab
