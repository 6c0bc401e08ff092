#include "eulersurf/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eulersurf/error.hpp"
#include "eulersurf/parallel.hpp"

namespace eulersurf {

namespace {

double circumradius(const PointCloud& pts, int a, int b, int c) {
  const double ab = std::sqrt(pts.squared_distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
  const double bc = std::sqrt(pts.squared_distance(static_cast<std::size_t>(b), static_cast<std::size_t>(c)));
  const double ca = std::sqrt(pts.squared_distance(static_cast<std::size_t>(c), static_cast<std::size_t>(a)));
  const double ux = pts(static_cast<std::size_t>(b), 0) - pts(static_cast<std::size_t>(a), 0);
  const double uy = pts(static_cast<std::size_t>(b), 1) - pts(static_cast<std::size_t>(a), 1);
  const double vx = pts(static_cast<std::size_t>(c), 0) - pts(static_cast<std::size_t>(a), 0);
  const double vy = pts(static_cast<std::size_t>(c), 1) - pts(static_cast<std::size_t>(a), 1);
  const double twice_area = std::fabs(ux * vy - uy * vx);
  if (twice_area == 0.0) throw DegeneracyError("flat triangle in alpha filtration");
  return ab * bc * ca / (2.0 * twice_area);
}

// Is c strictly inside the circle with diameter ab?
bool inside_diametral_circle(const PointCloud& pts, int a, int b, int c) {
  double dot = 0.0;
  for (int ax = 0; ax < 2; ++ax) {
    const double ca = pts(static_cast<std::size_t>(a), ax) - pts(static_cast<std::size_t>(c), ax);
    const double cb = pts(static_cast<std::size_t>(b), ax) - pts(static_cast<std::size_t>(c), ax);
    dot += ca * cb;
  }
  return dot < 0.0;
}

struct GradedCells {
  std::vector<int> dims;
  std::vector<double> h1, h2;
};

EulerSurface surface_from_cells(const GradedCells& cells, const ThresholdGrid& grid1, const ThresholdGrid& grid2,
                                int threads) {
  const std::size_t rows = grid1.size(), cols = grid2.size();
  const int chunks = std::max(1, threads);
  std::vector<std::vector<std::int64_t>> parts(static_cast<std::size_t>(chunks),
                                               std::vector<std::int64_t>(rows * cols, 0));
  parallel_chunks(cells.dims.size(), chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& delta = parts[c];
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t s = grid1.first_at_least(cells.h1[i]);
      const std::size_t t = grid2.first_at_least(cells.h2[i]);
      if (s == rows || t == cols) continue;
      const std::int64_t sign = cells.dims[i] % 2 == 0 ? 1 : -1;
      std::int64_t* row = delta.data() + s * cols;
      for (std::size_t u = t; u < cols; ++u) row[u] += sign;
    }
  });
  auto chi = std::move(parts.front());
  for (std::size_t c = 1; c < parts.size(); ++c)
    for (std::size_t i = 0; i < chi.size(); ++i) chi[i] += parts[c][i];
  for (std::size_t s = 1; s < rows; ++s)
    for (std::size_t t = 0; t < cols; ++t) chi[s * cols + t] += chi[(s - 1) * cols + t];
  return EulerSurface(grid1, grid2, std::move(chi));
}

}  // namespace

std::vector<double> alpha_filtration(const PointCloud& points, const SimplicialComplex& delaunay) {
  if (points.dim() != 2) throw ParameterError("alpha filtration is implemented for planar points");
  std::vector<double> values(delaunay.size(), 0.0);
  // Opposite vertices of the triangles adjacent to each edge.
  std::vector<std::vector<int>> opposite(delaunay.size());
  for (std::size_t i = 0; i < delaunay.size(); ++i) {
    const auto& s = delaunay[i];
    if (s.size() > 3) throw ParameterError("alpha filtration expects a planar triangulation");
    if (s.size() != 3) continue;
    values[i] = circumradius(points, s[0], s[1], s[2]);
    for (int drop = 0; drop < 3; ++drop) {
      Simplex e;
      for (int k = 0; k < 3; ++k)
        if (k != drop) e.push_back(s[static_cast<std::size_t>(k)]);
      const auto ei = delaunay.find(e);
      if (ei < 0) throw ValidationError("triangle edge missing from complex");
      opposite[static_cast<std::size_t>(ei)].push_back(s[static_cast<std::size_t>(drop)]);
    }
  }
  for (std::size_t i = 0; i < delaunay.size(); ++i) {
    const auto& s = delaunay[i];
    if (s.size() != 2) continue;
    bool attached = false;
    for (const int c : opposite[i]) attached = attached || inside_diametral_circle(points, s[0], s[1], c);
    if (!attached) {
      values[i] = 0.5 * std::sqrt(points.squared_distance(static_cast<std::size_t>(s[0]), static_cast<std::size_t>(s[1])));
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const int c : opposite[i]) {
      Simplex t{s[0], s[1], c};
      std::sort(t.begin(), t.end());
      best = std::min(best, values[static_cast<std::size_t>(delaunay.find(t))]);
    }
    values[i] = best;
  }
  return values;
}

std::vector<double> knn_vertex_values(const PointCloud& points, int k) {
  const std::size_t n = points.size();
  if (k < 1 || static_cast<std::size_t>(k) >= n)
    throw ParameterError("k must satisfy 1 <= k < number of points (k=" + std::to_string(k) +
                         ", n=" + std::to_string(n) + ")");
  std::vector<double> out(n);
  std::vector<double> d2(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d2[m++] = points.squared_distance(i, j);
    const auto kk = static_cast<std::size_t>(k);
    std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(kk - 1), d2.end());
    std::sort(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(kk));
    double sum = 0.0;
    for (std::size_t j = 0; j < kk; ++j) sum += d2[j];
    out[i] = std::sqrt(sum / static_cast<double>(k));
  }
  return out;
}

std::vector<double> height_vertex_values(const PointCloud& points, std::span<const double> direction) {
  if (direction.size() != static_cast<std::size_t>(points.dim()))
    throw ParameterError("direction has " + std::to_string(direction.size()) + " components for " +
                         std::to_string(points.dim()) + "D points");
  double norm2 = 0.0;
  for (const double d : direction) norm2 += d * d;
  if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-12) throw ParameterError("height direction must be a unit vector");
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double h = 0.0;
    for (int a = 0; a < points.dim(); ++a) h += points(i, a) * direction[static_cast<std::size_t>(a)];
    out[i] = h;
  }
  return out;
}

std::vector<double> extend_by_max(const SimplicialComplex& complex, std::span<const double> vertex_values) {
  std::vector<double> out(complex.size());
  for (std::size_t i = 0; i < complex.size(); ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (const int v : complex[i]) {
      if (v < 0 || static_cast<std::size_t>(v) >= vertex_values.size())
        throw ValidationError("simplex vertex " + std::to_string(v) + " has no value");
      m = std::max(m, vertex_values[static_cast<std::size_t>(v)]);
    }
    out[i] = m;
  }
  return out;
}

std::vector<double> knn_density_filter(const PointCloud& points, const SimplicialComplex& complex, int k) {
  return extend_by_max(complex, knn_vertex_values(points, k));
}

std::vector<double> height_filter(const PointCloud& points, const SimplicialComplex& complex,
                                  std::span<const double> direction) {
  return extend_by_max(complex, height_vertex_values(points, direction));
}

FilteredComplex vietoris_rips(const PointCloud& points, int max_dim, double max_radius) {
  if (max_dim < 0 || max_dim > 3) throw ParameterError("Vietoris-Rips max_dim must be in [0, 3]");
  const std::size_t n = points.size();
  std::vector<std::vector<int>> higher(n);  // neighbours with larger index
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::sqrt(points.squared_distance(i, j)) <= max_radius) higher[i].push_back(static_cast<int>(j));

  std::vector<Simplex> simplices;
  std::vector<double> values;
  auto dist = [&](int a, int b) {
    return std::sqrt(points.squared_distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
  };
  // Depth-first clique expansion; candidates are common higher neighbours.
  auto expand = [&](auto&& self, Simplex& current, double value, const std::vector<int>& candidates) -> void {
    simplices.push_back(current);
    values.push_back(value);
    if (static_cast<int>(current.size()) > max_dim) return;
    for (const int v : candidates) {
      double nv = value;
      for (const int u : current) nv = std::max(nv, dist(u, v));
      std::vector<int> next;
      for (const int w : candidates)
        if (w > v && std::binary_search(higher[static_cast<std::size_t>(v)].begin(),
                                        higher[static_cast<std::size_t>(v)].end(), w))
          next.push_back(w);
      current.push_back(v);
      self(self, current, nv, next);
      current.pop_back();
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    Simplex s{static_cast<int>(i)};
    expand(expand, s, 0.0, higher[i]);
  }

  // SimplicialComplex sorts; carry values along by lookup.
  SimplicialComplex complex(simplices);
  std::vector<double> sorted_values(values.size());
  for (std::size_t i = 0; i < simplices.size(); ++i)
    sorted_values[static_cast<std::size_t>(complex.find(simplices[i]))] = values[i];
  return {std::move(complex), std::move(sorted_values)};
}

BifilteredComplex SimplicialBifiltration::to_complex() const {
  BifilteredComplex out;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    std::vector<std::int64_t> faces;
    for (const auto f : complex.facets(i)) faces.push_back(static_cast<std::int64_t>(f));
    out.add_cell(complex.dim(i), std::move(faces), Grade{h1[i], h2[i]});
  }
  return out;
}

SimplicialBifiltration make_bifiltration(SimplicialComplex complex, std::vector<double> h1, std::vector<double> h2) {
  if (h1.size() != complex.size() || h2.size() != complex.size())
    throw ValidationError("filtration values do not match the number of simplices");
  for (std::size_t i = 0; i < complex.size(); ++i) {
    if (std::isnan(h1[i]) || std::isnan(h2[i])) throw ValidationError("NaN filtration value");
    for (const auto f : complex.facets(i))
      if (h1[f] > h1[i] || h2[f] > h2[i])
        throw ValidationError("filtration is not monotone at simplex " + std::to_string(i));
  }
  return {std::move(complex), std::move(h1), std::move(h2)};
}

ThresholdGrid unique_grid(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return ThresholdGrid(std::move(v));
}

ThresholdGrid uniform_grid(double lo, double hi, std::size_t count) {
  if (count == 0) throw ParameterError("uniform grid needs at least one threshold");
  if (!(lo <= hi)) throw ParameterError("uniform grid needs lo <= hi");
  if (count == 1) return ThresholdGrid({hi});
  if (lo == hi) throw ParameterError("uniform grid with several thresholds needs lo < hi");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  v.back() = hi;
  return ThresholdGrid(std::move(v));
}

EulerSurface ecs_points(const SimplicialBifiltration& filtration, const ThresholdGrid& grid1,
                        const ThresholdGrid& grid2, int threads) {
  GradedCells cells;
  cells.dims.reserve(filtration.complex.size());
  for (std::size_t i = 0; i < filtration.complex.size(); ++i) cells.dims.push_back(filtration.complex.dim(i));
  cells.h1 = filtration.h1;
  cells.h2 = filtration.h2;
  return surface_from_cells(cells, grid1, grid2, threads);
}

EulerSurface ecs_points(const BifilteredComplex& complex, const ThresholdGrid& grid1, const ThresholdGrid& grid2,
                        int threads) {
  if (!complex.single_critical())
    throw ValidationError("single-pass simplicial surface needs one (h1, h2) pair per cell");
  complex.validate();
  GradedCells cells;
  for (std::size_t i = 0; i < complex.size(); ++i) {
    cells.dims.push_back(complex.cell(i).dim);
    cells.h1.push_back(complex.grades(i)[0].h1);
    cells.h2.push_back(complex.grades(i)[0].h2);
  }
  return surface_from_cells(cells, grid1, grid2, threads);
}

EulerCurve ecc_points(std::span<const int> dims, std::span<const double> values, const ThresholdGrid& grid) {
  if (dims.size() != values.size()) throw ValidationError("dims and values differ in length");
  std::vector<std::int64_t> chi(grid.size(), 0);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::size_t s = grid.first_at_least(values[i]);
    if (s < grid.size()) chi[s] += dims[i] % 2 == 0 ? 1 : -1;
  }
  for (std::size_t s = 1; s < chi.size(); ++s) chi[s] += chi[s - 1];
  return EulerCurve{grid, std::move(chi)};
}

EulerCurve ecc_points(const SimplicialBifiltration& filtration, Parameter which, const ThresholdGrid& grid) {
  std::vector<int> dims;
  for (std::size_t i = 0; i < filtration.complex.size(); ++i) dims.push_back(filtration.complex.dim(i));
  return ecc_points(dims, which == Parameter::kFirst ? filtration.h1 : filtration.h2, grid);
}

}  // namespace eulersurf
