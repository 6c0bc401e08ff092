#pragma once

// Test-only reference computations. None of these call into the code paths
// they are used to check: cubical Euler characteristics are recounted from a
// dense cell-marker grid, local changes from explicit 3x3(x3) blocks.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "eulersurf/complex.hpp"
#include "eulersurf/image.hpp"
#include "eulersurf/rng.hpp"

namespace oracle {

/// Euler characteristic of the union of closed top cubes selected by
/// `present(flat index)` in an image of the given dims (2D or 3D).
inline std::int64_t chi_of_top_cells(const std::vector<std::size_t>& dims,
                                     const std::function<bool(std::size_t)>& present) {
  const bool three = dims.size() == 3;
  const std::size_t n1 = dims[0], n2 = dims[1], n3 = three ? dims[2] : 1;
  const std::size_t g1 = 2 * n1 + 1, g2 = 2 * n2 + 1, g3 = three ? 2 * n3 + 1 : 1;
  std::vector<char> mark(g1 * g2 * g3, 0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t k = 0; k < n3; ++k) {
        if (!present((i * n2 + j) * n3 + k)) continue;
        for (std::size_t a = 2 * i; a <= 2 * i + 2; ++a)
          for (std::size_t b = 2 * j; b <= 2 * j + 2; ++b) {
            if (three) {
              for (std::size_t c = 2 * k; c <= 2 * k + 2; ++c) mark[(a * g2 + b) * g3 + c] = 1;
            } else {
              mark[a * g2 + b] = 1;
            }
          }
      }
  std::int64_t chi = 0;
  for (std::size_t a = 0; a < g1; ++a)
    for (std::size_t b = 0; b < g2; ++b)
      for (std::size_t c = 0; c < g3; ++c) {
        if (!mark[(a * g2 + b) * g3 + c]) continue;
        const int d = static_cast<int>((a & 1) + (b & 1) + (three ? (c & 1) : 0));
        chi += d % 2 == 0 ? 1 : -1;
      }
  return chi;
}

/// chi of the sublevel set {v1 <= s and v2 <= t} of an image pair, for every
/// s, t in 0..levels-1.
inline std::vector<std::int64_t> image_pair_surface(const eulersurf::GrayImage& a, const eulersurf::GrayImage& b,
                                                    int levels) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels));
  for (int s = 0; s < levels; ++s)
    for (int t = 0; t < levels; ++t)
      out[static_cast<std::size_t>(s * levels + t)] =
          chi_of_top_cells(a.dims(), [&](std::size_t i) { return a[i] <= s && b[i] <= t; });
  return out;
}

inline std::vector<std::int64_t> image_curve(const eulersurf::GrayImage& a, int levels) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(levels));
  for (int s = 0; s < levels; ++s)
    out[static_cast<std::size_t>(s)] = chi_of_top_cells(a.dims(), [&](std::size_t i) { return a[i] <= s; });
  return out;
}

/// Change of chi when the centre cube of a 3^d block is added to the
/// neighbours flagged in `mask` (row-major neighbour order, first neighbour
/// is the most significant bit).
inline int local_change(int dim, std::uint32_t mask) {
  const int n = dim == 2 ? 8 : 26;
  const std::size_t side = 3;
  const std::vector<std::size_t> dims = dim == 2 ? std::vector<std::size_t>{side, side}
                                                 : std::vector<std::size_t>{side, side, side};
  const std::size_t centre = dim == 2 ? 4 : 13;
  auto neighbour_present = [&](std::size_t cell) {
    if (cell == centre) return false;
    const std::size_t k = cell < centre ? cell : cell - 1;
    return ((mask >> (n - 1 - static_cast<int>(k))) & 1u) != 0;
  };
  const auto without = chi_of_top_cells(dims, neighbour_present);
  const auto with = chi_of_top_cells(dims, [&](std::size_t c) { return c == centre || neighbour_present(c); });
  return static_cast<int>(with - without);
}

/// Kendall tau of continuous data (no ties) by counting inversions with a
/// merge sort after ordering by the first coordinate.
inline double kendall_tau(std::vector<std::pair<double, double>> xy) {
  std::sort(xy.begin(), xy.end());
  std::vector<double> y(xy.size()), buf(xy.size());
  for (std::size_t i = 0; i < xy.size(); ++i) y[i] = xy[i].second;
  std::uint64_t inversions = 0;
  std::function<void(std::size_t, std::size_t)> sort = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return;
    const std::size_t mid = (lo + hi) / 2;
    sort(lo, mid);
    sort(mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
      if (y[j] < y[i]) {
        inversions += mid - i;
        buf[k++] = y[j++];
      } else {
        buf[k++] = y[i++];
      }
    }
    while (i < mid) buf[k++] = y[i++];
    while (j < hi) buf[k++] = y[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
              y.begin() + static_cast<std::ptrdiff_t>(lo));
  };
  sort(0, y.size());
  const double n = static_cast<double>(xy.size());
  return 1.0 - 4.0 * static_cast<double>(inversions) / (n * (n - 1.0));
}

/// Independent uniform image, one stream per pixel (distinct stream keys
/// from the library generators via the index offset).
inline eulersurf::GrayImage random_image(std::vector<std::size_t> dims, int levels, std::uint64_t seed) {
  const std::size_t count = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  std::vector<std::int32_t> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    eulersurf::Stream rng(seed, (1ull << 40) + i);
    data[i] = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(levels));
  }
  return eulersurf::GrayImage(std::move(dims), std::move(data), levels);
}

}  // namespace oracle
