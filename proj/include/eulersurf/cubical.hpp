#pragma once

// Cubical complexes of grayscale images and the single-pass Euler
// characteristic curve/surface scans over their top cells.
//
// The complex of an n1 x n2 (x n3) image is addressed in doubled
// coordinates: along each axis a coordinate in [0, 2n] is a vertex when even
// and spans an interval when odd, so pixel (i, j) is the square (2i+1, 2j+1).
//
// A lower cell enters the bifiltration as soon as any top cell containing it
// does. For one parameter this is the min rule (a face takes the smallest
// value of its cofaces); for a pair of images a lower cell may have several
// incomparable entry grades, one per containing pixel.

#include <array>
#include <cstdint>
#include <filesystem>

#include "eulersurf/change_table.hpp"
#include "eulersurf/complex.hpp"
#include "eulersurf/image.hpp"

namespace eulersurf {

struct CubeCell {
  std::array<std::int64_t, 3> coords{};
  int ndim = 2;

  int dim() const noexcept {
    int d = 0;
    for (int a = 0; a < ndim; ++a) d += static_cast<int>(coords[static_cast<std::size_t>(a)] & 1);
    return d;
  }

  static CubeCell pixel(std::size_t i, std::size_t j) {
    return {{2 * static_cast<std::int64_t>(i) + 1, 2 * static_cast<std::int64_t>(j) + 1, 0}, 2};
  }
  static CubeCell voxel(std::size_t i, std::size_t j, std::size_t k) {
    return {{2 * static_cast<std::int64_t>(i) + 1, 2 * static_cast<std::int64_t>(j) + 1,
             2 * static_cast<std::int64_t>(k) + 1},
            3};
  }
};

/// Intensity of a top cell, or the minimum over the top cells containing a
/// lower cell. Throws ParameterError when the cell lies outside the complex.
std::int32_t cell_value(const GrayImage& image, const CubeCell& cell);

/// Explicit cell list of the cubical complex (every cell, its faces, and its
/// entry grades). Used by the oracle path and for export.
BifilteredComplex build_cubical_complex(const GrayImage& image1, const GrayImage& image2);
BifilteredComplex build_cubical_complex(const GrayImage& image);

enum class ChangeMode {
  kDirect,  ///< evaluate each 3D neighbourhood from its face masks
  kEager,   ///< look changes up in the full 2^26-entry 3D table
};

struct ScanOptions {
  int threads = 1;
  /// Only affects 3D images; 2D always uses the 256-entry table.
  ChangeMode mode = ChangeMode::kDirect;
  /// Prebuilt 3D table for kEager. When null, the table is loaded from (or
  /// built and written to) `table_cache`, or built in memory if that is empty.
  const ChangeTable* table = nullptr;
  std::filesystem::path table_cache;
};

/// Euler characteristic curve over thresholds 0..levels-1.
EulerCurve ecc_image(const GrayImage& image, int levels, const ScanOptions& options = {});

/// Euler characteristic surface of the pixel-intensity bifiltration of an
/// image pair over thresholds 0..levels-1 in both parameters.
EulerSurface ecs_image_pair(const GrayImage& image1, const GrayImage& image2, int levels,
                            const ScanOptions& options = {});

/// 3D-only entry points; identical to the general functions but reject 2D
/// input.
EulerCurve ecc_3d(const GrayImage& image, int levels, const ScanOptions& options = {});
EulerSurface ecs_3d(const GrayImage& image1, const GrayImage& image2, int levels, const ScanOptions& options = {});

}  // namespace eulersurf
