#pragma once

// Ensemble statistics over Euler characteristic surfaces: pointwise mean and
// standard deviation, raw and normalized terrains, the closed-form expected
// surface of correlated uniform random image pairs, region summaries, and
// feature vectors for external classifiers.

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "eulersurf/complex.hpp"

namespace eulersurf {

class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& at(std::size_t s, std::size_t t) { return v_[s * cols_ + t]; }
  double at(std::size_t s, std::size_t t) const { return v_[s * cols_ + t]; }
  const std::vector<double>& data() const noexcept { return v_; }
  std::vector<double>& data() noexcept { return v_; }

  static RealMatrix from(const EulerSurface& s);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

/// Non-empty list of surfaces over bitwise-identical grids.
class SurfaceEnsemble {
 public:
  /// Throws ValidationError when empty or when grids differ.
  explicit SurfaceEnsemble(std::vector<EulerSurface> surfaces);

  std::size_t size() const noexcept { return surfaces_.size(); }
  const std::vector<EulerSurface>& surfaces() const noexcept { return surfaces_; }
  const ThresholdGrid& grid1() const { return surfaces_.front().grid1(); }
  const ThresholdGrid& grid2() const { return surfaces_.front().grid2(); }

 private:
  std::vector<EulerSurface> surfaces_;
};

RealMatrix mean_surface(const SurfaceEnsemble& ensemble);
/// Population standard deviation (divides by N).
RealMatrix std_surface(const SurfaceEnsemble& ensemble);

enum class TerrainKind { kRaw, kNormalized };

struct Terrain {
  ThresholdGrid grid1;
  ThresholdGrid grid2;
  RealMatrix values;
  TerrainKind kind = TerrainKind::kRaw;
  /// 1 where a normalized ratio was undefined (both sds zero, non-zero
  /// difference). Such cells hold 0 in `values`.
  std::vector<std::uint8_t> sentinel;

  std::size_t sentinel_count() const noexcept;
  bool is_sentinel(std::size_t s, std::size_t t) const { return sentinel[s * values.cols() + t] != 0; }
  /// Pointwise absolute value (sentinels unchanged).
  Terrain absolute() const;
};

/// mean(A) - mean(B). Throws ValidationError when the grids differ.
Terrain terrain(const SurfaceEnsemble& a, const SurfaceEnsemble& b);

/// (mean(A) - mean(B)) / (sd(A) + sd(B)); 0 where numerator and denominator
/// both vanish; sentinel where only the denominator vanishes.
Terrain normalized_terrain(const SurfaceEnsemble& a, const SurfaceEnsemble& b);

/// Probability that a square enters Q_{s,t} when each pixel pair shares one
/// uniform value with probability p and is independent otherwise; u and w
/// are the marginal probabilities P(v <= s), P(v <= t).
double square_probability(double u, double w, double p) noexcept;

/// Cells of the n1 x n2 cubical complex grouped by how many squares contain
/// them.
struct CellCensus {
  std::int64_t vertices_in_4 = 0, vertices_in_2 = 0, vertices_in_1 = 0;
  std::int64_t edges_in_2 = 0, edges_in_1 = 0;
  std::int64_t squares = 0;
};
CellCensus cell_census(std::int64_t n1, std::int64_t n2);

/// E[chi(Q_{s,t})] for thresholds s, t in 0..levels-1, using
/// u = (s+1)/levels, w = (t+1)/levels and linearity of expectation over the
/// cell census. Throws ParameterError for p outside [0, 1] or non-positive
/// sizes.
RealMatrix expected_random_pair_surface(std::int64_t n1, std::int64_t n2, double p, int levels);

/// E[chi] of the sublevel sets of a single uniform random image.
std::vector<double> expected_uniform_curve(std::int64_t n1, std::int64_t n2, int levels);

/// Inclusive index rectangle [s0, s1] x [t0, t1].
struct RectRegion {
  std::size_t s0 = 0, s1 = 0, t0 = 0, t1 = 0;
};
/// Cells with |value| >= threshold.
struct MaskRegion {
  double threshold = 0.0;
};
using Region = std::variant<RectRegion, MaskRegion>;

struct RegionSummary {
  double mean = 0.0;
  double max = 0.0;
  std::size_t argmax_s = 0, argmax_t = 0;
  std::size_t count = 0;
};

/// Summary over the non-sentinel cells of the region. Throws
/// ParameterError when the region selects nothing or leaves the terrain.
RegionSummary region_aggregate(const Terrain& terrain, const Region& region);

/// Per-component affine normalization (x - mean) / sd; components with
/// sd == 0 map to 0.
struct ZScore {
  std::vector<double> mean;
  std::vector<double> sd;

  std::vector<double> apply(std::span<const double> x) const;
};

/// Every stride-th entry starting at index 0.
std::vector<double> subsample(const EulerCurve& curve, std::size_t stride);
/// Every stride-th row and column, rows concatenated.
std::vector<double> subsample(const EulerSurface& surface, std::size_t stride);

/// Population mean/sd per component over equally long feature vectors.
ZScore fit_zscore(std::span<const std::vector<double>> features);

std::vector<double> featurize(const EulerCurve& curve, std::size_t stride, const ZScore* normalize = nullptr);
std::vector<double> featurize(const EulerSurface& surface, std::size_t stride, const ZScore* normalize = nullptr);

/// Values of `surface` at new thresholds, each taken from the largest old
/// threshold not above it (0, the empty complex, when there is none).
EulerSurface resample_surface(const EulerSurface& surface, const ThresholdGrid& grid1, const ThresholdGrid& grid2);

}  // namespace eulersurf
