#pragma once

// Filtering functions on simplicial complexes built over point clouds, and
// the Euler characteristic surface of a simplicial bifiltration by a single
// pass over the simplices.

#include <span>
#include <vector>

#include "eulersurf/complex.hpp"
#include "eulersurf/points.hpp"

namespace eulersurf {

/// Alpha values on a planar Delaunay complex: 0 on vertices, circumradius on
/// triangles, half the length on Gabriel edges, and the smallest circumradius
/// of an adjacent triangle on attached edges.
std::vector<double> alpha_filtration(const PointCloud& points, const SimplicialComplex& delaunay);

/// Per-vertex sqrt of the mean squared distance to the k nearest other
/// points. Throws ParameterError unless 1 <= k < |points|.
std::vector<double> knn_vertex_values(const PointCloud& points, int k);

/// Per-vertex height <p, direction>. Throws ParameterError when the
/// direction does not match the dimension or |direction| differs from 1 by
/// more than 1e-12.
std::vector<double> height_vertex_values(const PointCloud& points, std::span<const double> direction);

/// Simplex value = max over its vertices.
std::vector<double> extend_by_max(const SimplicialComplex& complex, std::span<const double> vertex_values);

std::vector<double> knn_density_filter(const PointCloud& points, const SimplicialComplex& complex, int k);
std::vector<double> height_filter(const PointCloud& points, const SimplicialComplex& complex,
                                  std::span<const double> direction);

struct FilteredComplex {
  SimplicialComplex complex;
  std::vector<double> values;
};

/// Vietoris-Rips complex: edge value is the distance, higher simplices take
/// their longest edge; only simplices with value <= max_radius are kept.
/// Throws ParameterError for max_dim outside [0, 3].
FilteredComplex vietoris_rips(const PointCloud& points, int max_dim, double max_radius);

/// A simplicial complex with a pair of monotone values per simplex.
struct SimplicialBifiltration {
  SimplicialComplex complex;
  std::vector<double> h1;
  std::vector<double> h2;

  /// Same cells and values as a BifilteredComplex (one grade per simplex).
  BifilteredComplex to_complex() const;
};

/// Checks sizes and monotonicity; throws ValidationError.
SimplicialBifiltration make_bifiltration(SimplicialComplex complex, std::vector<double> h1, std::vector<double> h2);

/// Sorted distinct values.
ThresholdGrid unique_grid(std::span<const double> values);
/// `count` evenly spaced thresholds from lo to hi inclusive (a single
/// threshold when count == 1).
ThresholdGrid uniform_grid(double lo, double hi, std::size_t count);

/// Surface of the bifiltration by the single-pass row-suffix update and a
/// cumulative sum down columns. A simplex whose value exceeds the last
/// threshold of a grid never enters.
EulerSurface ecs_points(const SimplicialBifiltration& filtration, const ThresholdGrid& grid1,
                        const ThresholdGrid& grid2, int threads = 1);
/// Same for an arbitrary single-critical BifilteredComplex; throws
/// ValidationError for multi-critical input.
EulerSurface ecs_points(const BifilteredComplex& complex, const ThresholdGrid& grid1, const ThresholdGrid& grid2,
                        int threads = 1);

EulerCurve ecc_points(const SimplicialBifiltration& filtration, Parameter which, const ThresholdGrid& grid);
EulerCurve ecc_points(std::span<const int> dims, std::span<const double> values, const ThresholdGrid& grid);

}  // namespace eulersurf
