#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "flatlab/error.hpp"
#include "flatlab/rational.hpp"

namespace flatlab {

struct EdgeRef {
  int polygon = 0;
  int edge = 0;

  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct Corner {
  int polygon = 0;
  int vertex = 0;

  friend auto operator<=>(const Corner&, const Corner&) = default;
  friend bool operator==(const Corner&, const Corner&) = default;
};

/// Edge `a` is identified with edge `b` by z -> sign*z + c, with boundary
/// orientations reversed (start of a meets end of b). Consequently the edge
/// vectors satisfy v_b = -sign * v_a. sign = +1 is a translation gluing.
struct Gluing {
  EdgeRef a;
  EdgeRef b;
  int sign = 1;
};

struct Polygon {
  std::vector<Vec2> vertices;  // counterclockwise; edge i runs from vertex i to vertex i+1
};

/// Optional labels used to rule out isometries that forget a marking.
struct Markings {
  std::map<EdgeRef, std::string> edges;
  std::map<Corner, std::string> vertices;
};

/// The affine identification carried by one side of a gluing.
struct EdgeMap {
  EdgeRef target;
  int sign = 1;
  Vec2 offset;  // image of z is sign*z + offset

  Vec2 apply(const Vec2& z) const { return sign == 1 ? z + offset : offset - z; }
};

struct VertexClass {
  std::vector<Corner> corners;  // counterclockwise around the point
  int angle_pi = 0;             // total cone angle divided by pi
};

/// A closed half-translation surface given by euclidean polygons with exact
/// rational vertices, glued edge to edge by z -> +-z + c. Instances are
/// validated on construction and immutable afterwards.
class FlatSurface {
 public:
  /// Validates and resolves vertex classes. Throws Error with UnmatchedEdge,
  /// VectorMismatch, Disconnected, InvalidPolygon or SimplePole.
  static FlatSurface build(std::vector<Polygon> polygons, std::vector<Gluing> gluings,
                           Markings markings = {});

  const std::vector<Polygon>& polygons() const { return polygons_; }
  const std::vector<Gluing>& gluings() const { return gluings_; }
  const Markings& markings() const { return markings_; }
  const std::vector<VertexClass>& vertex_classes() const { return classes_; }

  int edge_count(int polygon) const { return static_cast<int>(polygons_[polygon].vertices.size()); }
  Vec2 vertex(Corner c) const;
  Vec2 edge_start(EdgeRef e) const;
  Vec2 edge_end(EdgeRef e) const;
  Vec2 edge_vector(EdgeRef e) const { return edge_end(e) - edge_start(e); }

  int vertex_class_of(Corner c) const;
  int gluing_index(EdgeRef e) const;
  EdgeMap edge_map(EdgeRef e) const;

 private:
  FlatSurface() = default;
  void resolve();

  std::vector<Polygon> polygons_;
  std::vector<Gluing> gluings_;
  Markings markings_;
  std::vector<int> polygon_offset_;          // first flat index of each polygon
  std::vector<int> gluing_of_edge_;          // flat edge index -> gluing index
  std::vector<int> class_of_corner_;         // flat corner index -> class id
  std::vector<VertexClass> classes_;
};

struct ConePoint {
  int vertex_class = 0;
  int angle_pi = 0;  // cone angle is angle_pi * pi
  int order = 0;     // angle_pi - 2

  friend bool operator==(const ConePoint&, const ConePoint&) = default;
};

FlatSurface build_surface(std::vector<Polygon> polygons, std::vector<Gluing> gluings,
                          Markings markings = {});

/// Cone points with angle different from 2*pi, ordered by vertex class id.
std::vector<ConePoint> cone_data(const FlatSurface& s);

int genus(const FlatSurface& s);

Rational area(const FlatSurface& s);

/// Merges rectangles glued along full vertical sides and removes flat vertices
/// that sit between two segments glued by one common isometry. The result is
/// isometric to the input.
FlatSurface normalize(const FlatSurface& s);

inline constexpr std::size_t kDefaultIsometryPolygonCap = 64;

/// Exhaustive search for a relabeling of polygons and edges with per-polygon maps
/// z -> +-z + c that carries every gluing (and marking) of s1 onto s2. Both
/// surfaces are normalized first. Throws SizeLimitExceeded above the cap.
bool isometric(const FlatSurface& s1, const FlatSurface& s2,
               std::size_t max_polygons = kDefaultIsometryPolygonCap);

}  // namespace flatlab
