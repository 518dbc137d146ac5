#pragma once

#include <string>

#include "flatlab/flat_surface.hpp"
#include "flatlab/half_plane.hpp"
#include "flatlab/vertical_graph.hpp"

namespace flatlab {

/// Polygons laid out left to right; glued edges share a label and an arrow
/// along the edge direction (reversed for the partner under a translation).
std::string render_svg(const FlatSurface& s);

/// Abstract picture: cone points on a line with their prongs, connections as
/// curves labelled by length, feelers as short stubs.
std::string render_svg(const VerticalGraph& g);

/// One rectangle of width H/2 per vertical side, arranged around a star, or
/// an annulus for a closed end.
std::string render_svg(const Truncation& t);

}  // namespace flatlab
