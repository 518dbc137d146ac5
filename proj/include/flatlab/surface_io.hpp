#pragma once

#include <string>
#include <vector>

#include "flatlab/flat_surface.hpp"
#include "flatlab/grafting.hpp"

namespace flatlab {

inline constexpr int kSurfaceSchema = 1;

/// Surface file: JSON with "schema", "polygons" (lists of ["p/q", "r/s"]
/// pairs), "gluings" ([[poly, edge], [poly, edge], sign]) and optional
/// "markings" ({"edges": [[[poly, edge], label]], "vertices": [[[poly, vertex], label]]}).
std::string serialize_surface(const FlatSurface& s);

/// Throws ParseError for malformed JSON or schema, and the flat kernel's codes
/// for invalid surfaces; the message after the code reads "line N: ...".
FlatSurface parse_surface(const std::string& text);

struct Diagnostic {
  int line = 0;
  ErrorCode code = ErrorCode::ParseError;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> items;
  bool ok() const { return items.empty(); }
};

/// Every problem found in the text, each anchored to a line.
Diagnostics validate_surface_text(const std::string& text);
/// Reads the file first; an unreadable file is a ParseError on line 0.
Diagnostics validate_file(const std::string& path);

std::string read_text_file(const std::string& path);

/// Track file: {"branches": [{"weight", "height", "kind"}], "gluings":
/// [{"a": [branch, side, offset], "b": [branch, side, offset], "length"}],
/// "pieces": [{"sides": [[[branch, "left" | "right"], ...]], "residue"}],
/// "min_height"}. Sides are "top", "bottom", "left", "right"; rationals are strings.
std::string serialize_track(const TrainTrackData& t);
/// Throws ParseError; the track itself is checked by validate_track.
TrainTrackData parse_track(const std::string& text);

}  // namespace flatlab
