#pragma once

#include <string_view>

#include "eulersurf/image.hpp"

namespace eulersurf {

/// Second images built from a first one, for pairing in a bifiltration.
enum class DerivedKind {
  kLaplacian,        ///< 3x3 kernel [0 -1 0; -1 4 -1; 0 -1 0], zero padded, clamped to [0, L-1]
  kTopDownGradient,  ///< floor((L-1) * i / n1), independent of the input values
  kComplement,       ///< (L-1) - v
  kRadialGradient,   ///< floor((L-1) * distance to centre / centre-to-corner distance)
};

/// Accepts laplacian, gradient (or top-down-gradient), complement, radial.
/// Throws ParameterError otherwise.
DerivedKind parse_derived_kind(std::string_view name);

/// 2D only. The result keeps the input's levels.
GrayImage derived_image(const GrayImage& image, DerivedKind kind);

}  // namespace eulersurf
