#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flatlab {

enum class ErrorCode {
  UnmatchedEdge,
  VectorMismatch,
  Disconnected,
  InvalidPolygon,
  SimplePole,
  SizeLimitExceeded,
  InvalidScale,
  NonRationalSurface,
  FeelersCollide,
  CollarOverlap,
  HTooSmall,
  UnattachableSide,
  LocusNotVertical,
  LocusNotEmbedded,
  ResidueMismatch,
  InvalidTrack,
  DegenerateJacobian,
  QuadratureFailure,
  DTooSmall,
  DerivativeNotNormalized,
  NotGoodBoundary,
  BoundaryNotPreserved,
  ModulusTooSmall,
  InvalidArgument,
  UnknownExperiment,
  ConfigInvalid,
  ParseError,
  Unrenderable,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flatlab
