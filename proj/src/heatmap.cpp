#include "eulersurf/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eulersurf/error.hpp"

namespace eulersurf {

Heatmap render_heatmap(const RealMatrix& values, const std::vector<std::uint8_t>* sentinel) {
  const auto& v = values.data();
  if (sentinel && sentinel->size() != v.size()) throw ValidationError("sentinel mask does not match the matrix");
  auto masked = [&](std::size_t i) { return sentinel && (*sentinel)[i] != 0; };

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  bool any = false, has_sentinels = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (masked(i)) {
      has_sentinels = true;
      continue;
    }
    if (!std::isfinite(v[i])) throw ValidationError("heatmap input has a non-finite cell");
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
    any = true;
  }
  if (!any) throw ValidationError("heatmap input has no non-sentinel cells");

  std::vector<std::int32_t> pixels(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (masked(i))
      pixels[i] = kHeatmapSentinelGray;
    else if (hi == lo)
      pixels[i] = kHeatmapConstantGray;
    else
      pixels[i] = static_cast<std::int32_t>(std::lround(255.0 * (v[i] - lo) / (hi - lo)));
  }
  return Heatmap{GrayImage({values.rows(), values.cols()}, std::move(pixels), 256), lo, hi, has_sentinels};
}

}  // namespace eulersurf
