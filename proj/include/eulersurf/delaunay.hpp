#pragma once

#include <cstdint>

#include "eulersurf/points.hpp"

namespace eulersurf {

struct DelaunayOptions {
  /// Perturb every coordinate by at most 1e-9 times the bounding-box extent
  /// before running the predicates. Off by default: degenerate input is an
  /// error unless the caller opts in.
  bool jitter = false;
  std::uint64_t jitter_seed = 0;
};

/// Sign of the orientation of (a, b, c): +1 counter-clockwise, -1
/// clockwise, 0 when the floating-point filter cannot decide.
int orient2d(const double* a, const double* b, const double* c) noexcept;

/// +1 when d lies strictly inside the circle through counter-clockwise
/// (a, b, c), -1 outside, 0 when the filter cannot decide.
int incircle(const double* a, const double* b, const double* c, const double* d) noexcept;

/// Delaunay triangulation of planar points by incremental insertion,
/// returned as vertices, edges and triangles. Throws DegeneracyError on
/// collinear or cocircular configurations the predicates cannot resolve,
/// ParameterError for fewer than 3 points or non-planar input.
SimplicialComplex delaunay_2d(const PointCloud& points, const DelaunayOptions& options = {});

}  // namespace eulersurf
