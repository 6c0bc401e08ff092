#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eulersurf/delaunay.hpp"
#include "eulersurf/error.hpp"
#include "eulersurf/rng.hpp"
#include "eulersurf/simplicial.hpp"

using namespace eulersurf;

namespace {

PointCloud random_points(std::size_t n, std::uint64_t seed) {
  std::vector<double> xy;
  for (std::size_t i = 0; i < n; ++i) {
    Stream rng(seed, i);
    xy.push_back(rng.uniform());
    xy.push_back(rng.uniform());
  }
  return PointCloud(2, xy);
}

std::int64_t chi(const SimplicialComplex& k) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < k.size(); ++i) c += k.dim(i) % 2 == 0 ? 1 : -1;
  return c;
}

std::size_t count_dim(const SimplicialComplex& k, int d) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < k.size(); ++i) n += k.dim(i) == d;
  return n;
}

// Circumcircle emptiness checked in long double, independently of the
// floating-point filters.
bool empty_circumcircles(const PointCloud& pts, const SimplicialComplex& k) {
  for (const auto& s : k.simplices()) {
    if (s.size() != 3) continue;
    const long double ax = pts(s[0], 0), ay = pts(s[0], 1), bx = pts(s[1], 0), by = pts(s[1], 1);
    const long double cx = pts(s[2], 0), cy = pts(s[2], 1);
    const long double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    const long double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                            (cx * cx + cy * cy) * (ay - by)) / d;
    const long double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                            (cx * cx + cy * cy) * (bx - ax)) / d;
    const long double r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (static_cast<int>(p) == s[0] || static_cast<int>(p) == s[1] || static_cast<int>(p) == s[2]) continue;
      const long double dx = pts(p, 0) - ux, dy = pts(p, 1) - uy;
      if (dx * dx + dy * dy < r2 * (1 - 1e-12L)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("point clouds reject bad input") {
  CHECK_THROWS_AS(PointCloud(2, {0, 0, 0, 0}), ValidationError);
  CHECK_THROWS_AS(PointCloud(2, {0, NAN}), ValidationError);
  CHECK_THROWS_AS(PointCloud(4, {}), ParameterError);
  CHECK_THROWS_AS(SimplicialComplex({{0, 1}}), ValidationError);
}

TEST_CASE("delaunay of small configurations") {
  const auto tri = delaunay_2d(PointCloud(2, {0, 0, 1, 0, 0, 1}));
  CHECK(count_dim(tri, 0) == 3);
  CHECK(count_dim(tri, 1) == 3);
  CHECK(count_dim(tri, 2) == 1);

  const PointCloud square(2, {0, 0, 1, 0, 1, 1, 0, 1});
  CHECK_THROWS_AS(delaunay_2d(square), DegeneracyError);
  const auto sq = delaunay_2d(square, DelaunayOptions{true, 3});
  CHECK(count_dim(sq, 0) == 4);
  CHECK(count_dim(sq, 1) == 5);
  CHECK(count_dim(sq, 2) == 2);
  CHECK(chi(sq) == 1);

  CHECK_THROWS_AS(delaunay_2d(PointCloud(2, {0, 0, 1, 1, 2, 2})), DegeneracyError);
  CHECK_THROWS_AS(delaunay_2d(PointCloud(2, {0, 0, 1, 1})), ParameterError);
}

TEST_CASE("delaunay of random points is a disk with empty circumcircles") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pts = random_points(50, seed);
    const auto k = delaunay_2d(pts);
    CHECK(chi(k) == 1);
    CHECK(empty_circumcircles(pts, k));
  }
  // Points on a line after the first triangle must not break insertion.
  const auto k = delaunay_2d(PointCloud(2, {0, 0, 4, 0, 2, 3, 1, 0, 3, 0, 2, 0}));
  CHECK(chi(k) == 1);
  CHECK(count_dim(k, 0) == 6);
}

TEST_CASE("alpha values") {
  const double h = std::sqrt(3.0) / 2;
  const PointCloud eq(2, {0, 0, 1, 0, 0.5, h});
  const auto k = delaunay_2d(eq);
  const auto alpha = alpha_filtration(eq, k);
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k.dim(i) == 0) CHECK(alpha[i] == 0.0);
    if (k.dim(i) == 1) CHECK(alpha[i] == doctest::Approx(0.5).epsilon(1e-12));
    if (k.dim(i) == 2) CHECK(alpha[i] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
  }

  // Obtuse triangle: its long edge is not Gabriel.
  const PointCloud obtuse(2, {0, 0, 4, 0, 2, 0.1});
  const auto ko = delaunay_2d(obtuse);
  const auto ao = alpha_filtration(obtuse, ko);
  const double R = 4.0 * std::hypot(2.0, 0.1) * std::hypot(2.0, 0.1) / (4.0 * 0.5 * 4.0 * 0.1);
  CHECK(R == doctest::Approx(20.05));
  const auto long_edge = static_cast<std::size_t>(ko.find({0, 1}));
  const auto triangle = static_cast<std::size_t>(ko.find({0, 1, 2}));
  CHECK(ao[long_edge] > 2.0);
  CHECK(ao[long_edge] == doctest::Approx(R).epsilon(1e-12));
  CHECK(ao[triangle] == doctest::Approx(R).epsilon(1e-12));
  CHECK(ao[static_cast<std::size_t>(ko.find({0, 2}))] == doctest::Approx(std::hypot(2.0, 0.1) / 2));
}

TEST_CASE("alpha values are monotone on random triangulations") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pts = random_points(60, seed);
    const auto k = delaunay_2d(pts);
    const auto a = alpha_filtration(pts, k);
    for (std::size_t i = 0; i < k.size(); ++i)
      for (auto f : k.facets(i)) CHECK(a[f] <= a[i]);
  }
}

TEST_CASE("knn density values") {
  const PointCloud line(2, {0, 0, 1, 0, 2, 0});
  CHECK(knn_vertex_values(line, 1) == std::vector<double>{1, 1, 1});
  const auto k2 = knn_vertex_values(line, 2);
  CHECK(k2[1] == 1.0);
  CHECK(k2[0] == doctest::Approx(std::sqrt(2.5)));
  CHECK(k2[2] == doctest::Approx(std::sqrt(2.5)));
  CHECK_THROWS_AS(knn_vertex_values(line, 3), ParameterError);
  CHECK_THROWS_AS(knn_vertex_values(line, 0), ParameterError);

  const PointCloud cross(2, {0, 0, 2, 0, -2, 0, 0, 2, 0, -2});
  CHECK(knn_vertex_values(cross, 4)[0] == doctest::Approx(2.0));
}

TEST_CASE("height values") {
  const PointCloud pts(2, {3, 7, -1, 2, 0, 0});
  const double e1[2] = {1, 0};
  CHECK(height_vertex_values(pts, e1)[0] == 3.0);
  const double d[2] = {0.6, 0.8}, nd[2] = {-0.6, -0.8};
  const auto up = height_vertex_values(pts, d), down = height_vertex_values(pts, nd);
  for (std::size_t i = 0; i < 3; ++i) CHECK(down[i] == -up[i]);
  const double not_unit[2] = {1, 1};
  CHECK_THROWS_AS(height_vertex_values(pts, not_unit), ParameterError);
  const double three[3] = {1, 0, 0};
  CHECK_THROWS_AS(height_vertex_values(pts, three), ParameterError);

  const auto k = delaunay_2d(pts);
  const auto h = height_filter(pts, k, d);
  const auto tri = static_cast<std::size_t>(k.find({0, 1, 2}));
  CHECK(h[tri] == std::max({up[0], up[1], up[2]}));
}

TEST_CASE("vietoris-rips") {
  const auto far = vietoris_rips(PointCloud(2, {0, 0, 2, 0}), 2, 1.0);
  CHECK(far.complex.size() == 2);

  const double h = std::sqrt(3.0) / 2;
  const auto tri = vietoris_rips(PointCloud(2, {0, 0, 1, 0, 0.5, h}), 2, 1.5);
  REQUIRE(tri.complex.size() == 7);
  CHECK(tri.values[6] == doctest::Approx(1.0));

  const auto sq = vietoris_rips(PointCloud(2, {0, 0, 1, 0, 1, 1, 0, 1}), 3, 2.0);
  std::size_t unit_edges = 0, diagonals = 0;
  for (std::size_t i = 0; i < sq.complex.size(); ++i) {
    if (sq.complex.dim(i) != 1) continue;
    if (sq.values[i] == doctest::Approx(1.0)) ++unit_edges;
    if (sq.values[i] == doctest::Approx(std::sqrt(2.0))) ++diagonals;
  }
  CHECK(unit_edges == 4);
  CHECK(diagonals == 2);
  CHECK(chi(sq.complex) == 1);  // full 3-simplex on 4 vertices

  CHECK_THROWS_AS(vietoris_rips(PointCloud(2, {0, 0}), 4, 1.0), ParameterError);
}

TEST_CASE("point surfaces agree with the recount oracle") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto pts = random_points(20 + seed * 5, seed);
    const auto k = delaunay_2d(pts);
    const auto bif = make_bifiltration(k, alpha_filtration(pts, k), knn_density_filter(pts, k, 3));
    const auto g1 = unique_grid(bif.h1), g2 = unique_grid(bif.h2);
    const auto fast = ecs_points(bif, g1, g2);
    CHECK(fast == brute_force_surface(bif.to_complex(), g1, g2));
    CHECK(ecs_points(bif, g1, g2, 3) == fast);
    CHECK(fast.at(fast.rows() - 1, fast.cols() - 1) == 1);

    // Swapping the filters transposes the surface.
    const auto swapped = make_bifiltration(k, bif.h2, bif.h1);
    CHECK(ecs_points(swapped, g2, g1) == fast.transposed());

    // A coarse grid samples the fine surface.
    const auto c1 = uniform_grid(g1.front(), g1.back(), 7), c2 = uniform_grid(g2.front(), g2.back(), 5);
    const auto coarse = ecs_points(bif, c1, c2);
    for (std::size_t s = 0; s < c1.size(); ++s)
      for (std::size_t t = 0; t < c2.size(); ++t) {
        const auto fs = std::upper_bound(g1.values().begin(), g1.values().end(), c1[s]) - g1.values().begin() - 1;
        const auto ft = std::upper_bound(g2.values().begin(), g2.values().end(), c2[t]) - g2.values().begin() - 1;
        CHECK(coarse.at(s, t) == fast.at(static_cast<std::size_t>(fs), static_cast<std::size_t>(ft)));
      }

    const auto curve = ecc_points(bif, Parameter::kFirst, g1);
    CHECK(curve.chi == fast.column(fast.cols() - 1));
    CHECK(curve.chi.back() == 1);
  }
}

TEST_CASE("point surface edge cases") {
  const ThresholdGrid g({0, 1, 2});
  const auto empty = make_bifiltration(SimplicialComplex{}, {}, {});
  CHECK(ecs_points(empty, g, g).data() == std::vector<std::int64_t>(9, 0));

  const auto vertex = make_bifiltration(SimplicialComplex(std::vector<Simplex>{{0}}), {1}, {2});
  CHECK(ecs_points(vertex, g, g).data() == std::vector<std::int64_t>{0, 0, 0, 0, 0, 1, 0, 0, 1});

  // Values above the grid never enter.
  const auto high = make_bifiltration(SimplicialComplex(std::vector<Simplex>{{0}}), {5}, {0});
  CHECK(ecs_points(high, g, g).data() == std::vector<std::int64_t>(9, 0));

  CHECK_THROWS_AS(make_bifiltration(SimplicialComplex({{0}, {1}, {0, 1}}), {0, 2, 1}, {0, 0, 0}), ValidationError);

  BifilteredComplex multi;
  multi.add_cell(0, {}, std::vector<Grade>{{0, 1}, {1, 0}});
  CHECK_THROWS_AS(ecs_points(multi, g, g), ValidationError);
}

TEST_CASE("alpha curve of an equilateral triangle") {
  const double h = std::sqrt(3.0) / 2;
  const PointCloud eq(2, {0, 0, 1, 0, 0.5, h});
  const auto k = delaunay_2d(eq);
  const auto a = alpha_filtration(eq, k);
  std::vector<int> dims;
  for (std::size_t i = 0; i < k.size(); ++i) dims.push_back(k.dim(i));
  // Computed edge values may differ in the last bit, so sample just above them.
  CHECK(ecc_points(dims, a, ThresholdGrid({0, 0.5 + 1e-9, 1 / std::sqrt(3.0) + 1e-9})).chi ==
        std::vector<std::int64_t>{3, 0, 1});
  CHECK(ecc_points(dims, a, ThresholdGrid({0, 0.25, 0.55, 1})).chi == std::vector<std::int64_t>{3, 3, 0, 1});
}

TEST_CASE("grids") {
  const std::vector<double> v{3, 1, 2, 1, 3};
  CHECK(unique_grid(v).values() == std::vector<double>{1, 2, 3});
  CHECK(uniform_grid(0, 1, 5).values() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(uniform_grid(2, 2, 1).values() == std::vector<double>{2});
  CHECK(uniform_grid(0, 1, 3).back() == 1.0);
  CHECK_THROWS_AS(uniform_grid(1, 0, 3), ParameterError);
  CHECK_THROWS_AS(uniform_grid(0, 1, 0), ParameterError);
}
