#pragma once

#include <cstdint>
#include <vector>

#include "eulersurf/image.hpp"
#include "eulersurf/stats.hpp"

namespace eulersurf {

inline constexpr std::int32_t kHeatmapSentinelGray = 255;
inline constexpr std::int32_t kHeatmapConstantGray = 128;

struct Heatmap {
  GrayImage image;  ///< 256 levels, one pixel per matrix cell
  double lo = 0.0;  ///< value mapped to 0
  double hi = 0.0;  ///< value mapped to 255
  bool has_sentinels = false;
};

/// Linear min-max scaling to 0..255 over the non-sentinel cells; a constant
/// matrix renders 128 and sentinel cells render 255. Throws ValidationError
/// when every cell is a sentinel or a non-sentinel cell is not finite.
Heatmap render_heatmap(const RealMatrix& values, const std::vector<std::uint8_t>* sentinel = nullptr);

}  // namespace eulersurf
