#pragma once

#include <string>
#include <vector>

#include "flatlab/flat_surface.hpp"

namespace flatlab {

FlatSurface rect_torus(const Rational& width, const Rational& height);

/// Three unit squares in an L; a single cone point of angle 6 pi.
FlatSurface l_shape_surface();

/// Unit square torus whose top is glued to the bottom shifted right by
/// `twist` (0 <= twist < 1/2), cut along the vertical slit x = 1/2,
/// 1/4 <= y <= 3/4. Both banks are cut into perm.size() equal pieces; piece i
/// of the west bank (counted upward) is glued by translation to piece perm[i]
/// of the east bank.
FlatSurface slit_torus(const Rational& twist, const std::vector<int>& perm);

/// Slit torus used for the Teichmueller limit: twist 1/7, bank exchange (3 2 1).
/// Two cone points of angle 4 pi joined by three vertical saddle connections.
FlatSurface slit_torus_example();

/// Untwisted slit torus with a two-piece bank exchange: every vertical leaf is
/// closed and the vertical graph is a bouquet of three loops.
FlatSurface strebel_warmup();

/// A 4 x 3 rectangle with unit-edge gluings giving four cone points of angle
/// 3 pi, sheared by x -> x + y/1009 so that no vertical saddle connection is
/// shorter than 1009.
FlatSurface generic_simple_zeros();

/// Names accepted by catalog_surface.
std::vector<std::string> catalog_names();

/// Throws InvalidArgument for unknown names.
FlatSurface catalog_surface(const std::string& name);

}  // namespace flatlab
