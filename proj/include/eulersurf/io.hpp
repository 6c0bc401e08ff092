#pragma once

// File formats. CSV files use ',' separators, '#'-prefixed metadata lines and
// LF line endings.
//
//   surface:  # eulersurf surface 1
//             h1\h2,b_0,b_1,...
//             a_0,chi,chi,...
//   curve:    # eulersurf curve 1
//             threshold,chi
//   terrain:  # eulersurf terrain 1, kind/sd/sentinel metadata, then the
//             surface layout with real values; sentinel cells read "nan".
//   points:   x,y[,z][,parent]
//   volume:   EUVOL n1 n2 n3 L, then n1*n2*n3 whitespace-separated integers
//             in slice-row-major order.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eulersurf/complex.hpp"
#include "eulersurf/image.hpp"
#include "eulersurf/points.hpp"
#include "eulersurf/stats.hpp"

namespace eulersurf {

inline constexpr int kCsvFormatVersion = 1;
inline constexpr int kVolumeFormatVersion = 1;

/// P2 or P5 with maxval <= 65535. With levels == 0 the image keeps its raw
/// values and levels = maxval + 1; otherwise values are rescaled to
/// floor(v * levels / (maxval + 1)).
GrayImage read_pgm(std::istream& in, int levels = 0);
GrayImage load_pgm(const std::filesystem::path& path, int levels = 0);
/// Binary P5 with maxval = levels - 1 (16-bit big-endian when levels > 256).
void write_pgm(std::ostream& out, const GrayImage& image);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

GrayImage read_volume(std::istream& in);
GrayImage load_volume(const std::filesystem::path& path);
void write_volume(std::ostream& out, const GrayImage& image);
void save_volume(const std::filesystem::path& path, const GrayImage& image);

/// Dispatches on the leading magic ("P2"/"P5" or "EUVOL").
GrayImage load_image(const std::filesystem::path& path, int levels = 0);
void save_image(const std::filesystem::path& path, const GrayImage& image);

void write_surface_csv(std::ostream& out, const EulerSurface& surface);
EulerSurface read_surface_csv(std::istream& in);
void save_surface_csv(const std::filesystem::path& path, const EulerSurface& surface);
EulerSurface load_surface_csv(const std::filesystem::path& path);

void write_curve_csv(std::ostream& out, const EulerCurve& curve);
EulerCurve read_curve_csv(std::istream& in);
void save_curve_csv(const std::filesystem::path& path, const EulerCurve& curve);
EulerCurve load_curve_csv(const std::filesystem::path& path);

/// Real-valued matrix over two grids (expected surfaces, mean surfaces).
void write_real_surface_csv(std::ostream& out, const ThresholdGrid& grid1, const ThresholdGrid& grid2,
                            const RealMatrix& values, const std::string& title);
void write_terrain_csv(std::ostream& out, const Terrain& terrain);
Terrain read_terrain_csv(std::istream& in);

void write_points_csv(std::ostream& out, const PointCloud& points, const std::vector<int>* parent = nullptr);
PointCloud read_points_csv(std::istream& in);
PointCloud load_points_csv(const std::filesystem::path& path);

/// Curve or surface, whichever the file's metadata line declares.
struct LoadedFeatureSource {
  std::optional<EulerCurve> curve;
  std::optional<EulerSurface> surface;
};
LoadedFeatureSource load_curve_or_surface(const std::filesystem::path& path);

/// One row per feature vector, no header.
void write_features_csv(std::ostream& out, const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_features_csv(std::istream& in);

std::string zscore_to_json(const ZScore& z);
ZScore zscore_from_json(const std::string& text);

/// Reads a whole file; throws FormatError(kIo) when it cannot be opened.
std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace eulersurf
