#include "eulersurf/delaunay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "eulersurf/error.hpp"
#include "eulersurf/rng.hpp"

namespace eulersurf {

namespace {

// Static error bounds for the floating-point filters (Shewchuk 1997).
constexpr double kEps = 0x1.0p-53;
constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

constexpr int kInfinite = -1;

using Triangle = std::array<int, 3>;  // counter-clockwise; ghost triangles end in kInfinite

bool strictly_between(const double* u, const double* v, const double* p) noexcept {
  const double dx = v[0] - u[0], dy = v[1] - u[1];
  const double t = (p[0] - u[0]) * dx + (p[1] - u[1]) * dy;
  return t > 0.0 && t < dx * dx + dy * dy;
}

}  // namespace

int orient2d(const double* a, const double* b, const double* c) noexcept {
  const double detleft = (a[0] - c[0]) * (b[1] - c[1]);
  const double detright = (a[1] - c[1]) * (b[0] - c[0]);
  const double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  }
  const double bound = kCcwErrBound * detsum;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return 0;
}

int incircle(const double* a, const double* b, const double* c, const double* d) noexcept {
  const double adx = a[0] - d[0], ady = a[1] - d[1];
  const double bdx = b[0] - d[0], bdy = b[1] - d[1];
  const double cdx = c[0] - d[0], cdy = c[1] - d[1];

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  const double bound = kIccErrBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return 0;
}

SimplicialComplex delaunay_2d(const PointCloud& input, const DelaunayOptions& options) {
  if (input.dim() != 2) throw ParameterError("delaunay_2d needs planar points");
  const std::size_t n = input.size();
  if (n < 3) throw ParameterError("delaunay_2d needs at least 3 points");

  std::vector<double> xy = input.coords();
  if (options.jitter) {
    double lo[2] = {xy[0], xy[1]}, hi[2] = {xy[0], xy[1]};
    for (std::size_t i = 0; i < n; ++i)
      for (int a = 0; a < 2; ++a) {
        lo[a] = std::min(lo[a], xy[2 * i + static_cast<std::size_t>(a)]);
        hi[a] = std::max(hi[a], xy[2 * i + static_cast<std::size_t>(a)]);
      }
    const double extent = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-300});
    for (std::size_t i = 0; i < n; ++i) {
      Stream rng(options.jitter_seed, i);
      for (int a = 0; a < 2; ++a) xy[2 * i + static_cast<std::size_t>(a)] += (2.0 * rng.uniform() - 1.0) * 1e-9 * extent;
    }
  }
  auto pt = [&](int i) { return xy.data() + 2 * static_cast<std::size_t>(i); };

  // Seed triangle from the first three non-collinear points.
  int third = -1;
  for (std::size_t k = 2; k < n && third < 0; ++k)
    if (orient2d(pt(0), pt(1), pt(static_cast<int>(k))) != 0) third = static_cast<int>(k);
  if (third < 0) throw DegeneracyError("points are collinear; no triangulation exists");

  std::vector<Triangle> tris;
  {
    int a = 0, b = 1, c = third;
    if (orient2d(pt(a), pt(b), pt(c)) < 0) std::swap(a, b);
    tris.push_back({a, b, c});
    tris.push_back({b, a, kInfinite});
    tris.push_back({c, b, kInfinite});
    tris.push_back({a, c, kInfinite});
  }

  std::vector<Triangle> kept;
  std::map<std::pair<int, int>, int> edge_count;
  for (std::size_t pi = 2; pi < n; ++pi) {
    const int p = static_cast<int>(pi);
    if (p == third) continue;

    kept.clear();
    edge_count.clear();
    std::vector<Triangle> cavity;
    for (const auto& t : tris) {
      bool conflict;
      if (t[2] == kInfinite) {
        const int o = orient2d(pt(t[0]), pt(t[1]), pt(p));
        // On the supporting line of a hull edge: the ghost's circle is the
        // open edge itself.
        conflict = o > 0 || (o == 0 && strictly_between(pt(t[0]), pt(t[1]), pt(p)));
      } else {
        const int ic = incircle(pt(t[0]), pt(t[1]), pt(t[2]), pt(p));
        if (ic == 0)
          throw DegeneracyError("point " + std::to_string(p) + " is cocircular with points " +
                                std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " + std::to_string(t[2]));
        conflict = ic > 0;
      }
      if (conflict) {
        cavity.push_back(t);
        for (int e = 0; e < 3; ++e) ++edge_count[{t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)]}];
      } else {
        kept.push_back(t);
      }
    }
    if (cavity.empty()) throw DegeneracyError("point " + std::to_string(p) + " conflicts with no triangle");

    for (const auto& t : cavity)
      for (int e = 0; e < 3; ++e) {
        const int x = t[static_cast<std::size_t>(e)], y = t[static_cast<std::size_t>((e + 1) % 3)];
        if (edge_count.count({y, x}) != 0) continue;  // interior edge of the cavity
        if (x == kInfinite)
          kept.push_back({y, p, kInfinite});
        else if (y == kInfinite)
          kept.push_back({p, x, kInfinite});
        else if (orient2d(pt(x), pt(y), pt(p)) > 0)
          kept.push_back({x, y, p});
        else
          throw DegeneracyError("inserting point " + std::to_string(p) + " would create a flat triangle with " +
                                std::to_string(x) + " and " + std::to_string(y));
      }
    tris.swap(kept);
  }

  std::vector<Simplex> simplices;
  simplices.reserve(n + 3 * tris.size());
  for (std::size_t i = 0; i < n; ++i) simplices.push_back({static_cast<int>(i)});
  std::map<std::pair<int, int>, bool> edges;
  for (const auto& t : tris) {
    if (t[2] == kInfinite) continue;
    simplices.push_back({t[0], t[1], t[2]});
    for (int e = 0; e < 3; ++e) {
      int x = t[static_cast<std::size_t>(e)], y = t[static_cast<std::size_t>((e + 1) % 3)];
      if (x > y) std::swap(x, y);
      edges[{x, y}] = true;
    }
  }
  for (const auto& [e, unused] : edges) simplices.push_back({e.first, e.second});
  return SimplicialComplex(std::move(simplices));
}

}  // namespace eulersurf
