#pragma once

// Seeded synthetic data. Every generator is a pure function of its
// parameters and seed; draws for pixel/point i come from Stream(seed, i).

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "eulersurf/image.hpp"
#include "eulersurf/points.hpp"

namespace eulersurf {

/// Per pixel: x, v1, v2 uniform; both images get floor(v1) when x <= p,
/// otherwise floor(v1) and floor(v2). Values lie in [0, levels).
std::pair<GrayImage, GrayImage> gen_correlated_pair(std::size_t n1, std::size_t n2, double p, int levels,
                                                    std::uint64_t seed);

/// n points of the Clayton copula scaled to [0, levels)^2, by conditional
/// inversion. Interleaved (u, w). Throws ParameterError for theta <= 0.
std::vector<double> gen_clayton_points(std::size_t n, double theta, double levels, std::uint64_t seed);

/// n x n x n volumes whose voxel intensities are the floored coordinates of
/// n^3 Clayton points, in slice-row-major order.
std::pair<GrayImage, GrayImage> gen_copula_images_3d(std::size_t n, double theta, int levels, std::uint64_t seed);

/// Homogeneous Poisson process of intensity lambda on the unit square.
PointCloud gen_poisson(double lambda, std::uint64_t seed);

struct ClusterSample {
  PointCloud points;
  /// Index of the generating point, -1 for cluster centres (and for points
  /// whose parent was removed by clipping).
  std::vector<int> parent;
};

/// Hawkes cluster process: centres ~ Poisson(lambda_parent) on the unit
/// square; every point recursively spawns Poisson(alpha) offspring with
/// N(0, sigma^2) displacement per axis. With `clip`, points outside the unit
/// square are dropped after the whole process has run.
/// Throws ParameterError unless lambda_parent > 0, 0 <= alpha < 1, sigma > 0.
ClusterSample gen_hawkes_cluster(double lambda_parent, double alpha, double sigma, std::uint64_t seed,
                                 bool clip = false);

}  // namespace eulersurf
