#include "eulersurf/cubical.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "eulersurf/error.hpp"
#include "eulersurf/parallel.hpp"

namespace eulersurf {

namespace {

// Candidate pixel indices along one axis for doubled coordinate x.
int axis_pixels(std::int64_t x, std::size_t n, std::array<std::size_t, 2>& out) {
  const auto nn = static_cast<std::int64_t>(n);
  if (x & 1) {
    out[0] = static_cast<std::size_t>((x - 1) / 2);
    return 1;
  }
  int c = 0;
  if (x / 2 - 1 >= 0) out[static_cast<std::size_t>(c++)] = static_cast<std::size_t>(x / 2 - 1);
  if (x / 2 < nn) out[static_cast<std::size_t>(c++)] = static_cast<std::size_t>(x / 2);
  return c;
}

void check_cell(const GrayImage& image, const CubeCell& cell) {
  if (cell.ndim != image.ndim()) throw ParameterError("cell dimension does not match image dimension");
  for (int a = 0; a < cell.ndim; ++a) {
    const auto x = cell.coords[static_cast<std::size_t>(a)];
    if (x < 0 || x > 2 * static_cast<std::int64_t>(image.dim(a)))
      throw ParameterError("cell coordinate " + std::to_string(x) + " outside the complex on axis " +
                           std::to_string(a));
  }
}

// Linear indices of the top cells containing `cell`.
std::vector<std::size_t> containing_pixels(const GrayImage& image, const CubeCell& cell) {
  std::array<std::array<std::size_t, 2>, 3> cand{};
  std::array<int, 3> count{1, 1, 1};
  for (int a = 0; a < cell.ndim; ++a)
    count[static_cast<std::size_t>(a)] =
        axis_pixels(cell.coords[static_cast<std::size_t>(a)], image.dim(a), cand[static_cast<std::size_t>(a)]);
  std::vector<std::size_t> out;
  for (int i = 0; i < count[0]; ++i)
    for (int j = 0; j < count[1]; ++j) {
      if (cell.ndim == 2) {
        out.push_back(cand[0][static_cast<std::size_t>(i)] * image.dim(1) + cand[1][static_cast<std::size_t>(j)]);
        continue;
      }
      for (int k = 0; k < count[2]; ++k)
        out.push_back((cand[0][static_cast<std::size_t>(i)] * image.dim(1) + cand[1][static_cast<std::size_t>(j)]) *
                          image.dim(2) +
                      cand[2][static_cast<std::size_t>(k)]);
    }
  return out;
}

std::vector<Grade> pareto_front(std::vector<Grade> g) {
  std::sort(g.begin(), g.end(), [](const Grade& a, const Grade& b) { return a.h1 < b.h1 || (a.h1 == b.h1 && a.h2 < b.h2); });
  std::vector<Grade> front;
  for (const auto& x : g)
    if (front.empty() || x.h2 < front.back().h2) front.push_back(x);
  return front;
}

// Image pair copied into arrays with a one-cell border valued levels
// (one past the last threshold), plus linear offsets of the 3^d - 1
// neighbours in row-major block order.
struct PaddedPair {
  std::vector<std::size_t> dims;  // original
  std::vector<std::size_t> pdims;
  std::vector<std::int32_t> v1, v2;
  std::vector<std::ptrdiff_t> offsets;

  std::size_t padded_index(std::size_t linear) const {
    if (dims.size() == 2) {
      const std::size_t i = linear / dims[1], j = linear % dims[1];
      return (i + 1) * pdims[1] + (j + 1);
    }
    const std::size_t k = linear % dims[2];
    const std::size_t ij = linear / dims[2];
    const std::size_t j = ij % dims[1], i = ij / dims[1];
    return ((i + 1) * pdims[1] + (j + 1)) * pdims[2] + (k + 1);
  }
};

PaddedPair pad(const GrayImage& image1, const GrayImage& image2, int levels) {
  PaddedPair p;
  p.dims = image1.dims();
  std::size_t total = 1;
  for (const auto d : p.dims) {
    p.pdims.push_back(d + 2);
    total *= d + 2;
  }
  p.v1.assign(total, levels);
  p.v2.assign(total, levels);
  for (std::size_t i = 0; i < image1.size(); ++i) {
    const auto q = p.padded_index(i);
    p.v1[q] = image1[i];
    p.v2[q] = image2[i];
  }
  const int d = image1.ndim();
  const auto s1 = static_cast<std::ptrdiff_t>(p.pdims[1]);
  if (d == 2) {
    for (std::ptrdiff_t di = -1; di <= 1; ++di)
      for (std::ptrdiff_t dj = -1; dj <= 1; ++dj)
        if (di != 0 || dj != 0) p.offsets.push_back(di * s1 + dj);
  } else {
    const auto s2 = static_cast<std::ptrdiff_t>(p.pdims[2]);
    for (std::ptrdiff_t di = -1; di <= 1; ++di)
      for (std::ptrdiff_t dj = -1; dj <= 1; ++dj)
        for (std::ptrdiff_t dk = -1; dk <= 1; ++dk)
          if (di != 0 || dj != 0 || dk != 0) p.offsets.push_back((di * s1 + dj) * s2 + dk);
  }
  return p;
}

void check_levels(const GrayImage& image, int levels) {
  if (levels < 1) throw ParameterError("levels must be positive");
  for (const auto v : image.data())
    if (v >= levels)
      throw ValidationError("intensity " + std::to_string(v) + " is not below levels=" + std::to_string(levels));
}

// Neighbours counted as already present when top cell p is inserted at
// value a: smaller values anywhere, equal values earlier in scan order.
inline std::uint32_t first_parameter_mask(const PaddedPair& pp, std::size_t p, std::int32_t a) {
  const auto n = pp.offsets.size();
  std::uint32_t mask = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto off = pp.offsets[k];
    const auto q = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + off);
    const bool present = off < 0 ? pp.v1[q] <= a : pp.v1[q] < a;
    if (present) mask |= 1u << (n - 1 - k);
  }
  return mask;
}

template <typename Change>
void scan_curve(const PaddedPair& pp, const Change& change, std::size_t begin, std::size_t end,
                std::vector<std::int64_t>& delta) {
  for (std::size_t i = begin; i < end; ++i) {
    const auto p = pp.padded_index(i);
    const auto a = pp.v1[p];
    delta[static_cast<std::size_t>(a)] += change(first_parameter_mask(pp, p, a));
  }
}

template <typename Change>
void scan_surface(const PaddedPair& pp, const Change& change, int levels, std::size_t begin, std::size_t end,
                  std::vector<std::int64_t>& delta) {
  const auto n = pp.offsets.size();
  const auto cols = static_cast<std::size_t>(levels);
  std::array<std::int32_t, 26> neigh2{};
  std::array<std::int32_t, 28> thresholds{};
  for (std::size_t i = begin; i < end; ++i) {
    const auto p = pp.padded_index(i);
    const auto a = pp.v1[p];
    const auto b = pp.v2[p];
    const std::uint32_t mask1 = first_parameter_mask(pp, p, a);

    // thresholds_2: b, the neighbours' second values above b, and levels.
    std::size_t nt = 0;
    thresholds[nt++] = b;
    for (std::size_t k = 0; k < n; ++k) {
      const auto q = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) + pp.offsets[k]);
      neigh2[k] = pp.v2[q];
      if (neigh2[k] > b && neigh2[k] < levels) thresholds[nt++] = neigh2[k];
    }
    std::sort(thresholds.begin() + 1, thresholds.begin() + static_cast<std::ptrdiff_t>(nt));
    nt = static_cast<std::size_t>(std::unique(thresholds.begin(), thresholds.begin() + static_cast<std::ptrdiff_t>(nt)) -
                                  thresholds.begin());
    thresholds[nt++] = levels;

    std::int64_t* row = delta.data() + static_cast<std::size_t>(a) * cols;
    for (std::size_t r = 0; r + 1 < nt; ++r) {
      const auto lo = thresholds[r];
      std::uint32_t mask2 = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (neigh2[k] <= lo) mask2 |= 1u << (n - 1 - k);
      const int d = change(mask1 & mask2);
      if (d == 0) continue;
      for (auto t = lo; t < thresholds[r + 1]; ++t) row[t] += d;
    }
  }
}

struct TableChange {
  const ChangeTable* table;
  int operator()(std::uint32_t mask) const noexcept { return (*table)[mask]; }
};

const ChangeTable& table_2d() {
  static const ChangeTable table = precompute_change_table(2);
  return table;
}

// Runs `body(change)` with the change evaluator selected by dimension and
// options.
template <typename Body>
void with_change_source(int dim, const ScanOptions& options, Body&& body) {
  if (dim == 2) {
    body(TableChange{&table_2d()});
    return;
  }
  if (options.mode == ChangeMode::kDirect) {
    body(LocalChange(3));
    return;
  }
  if (options.table != nullptr) {
    if (options.table->dim() != 3) throw ParameterError("eager 3D scan needs a 3D change table");
    body(TableChange{options.table});
    return;
  }
  const auto table = options.table_cache.empty() ? precompute_change_table(3)
                                                 : load_or_build_change_table(3, options.table_cache);
  body(TableChange{&table});
}

std::vector<std::int64_t> merge(std::vector<std::vector<std::int64_t>>& parts) {
  auto total = std::move(parts.front());
  for (std::size_t c = 1; c < parts.size(); ++c)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += parts[c][i];
  return total;
}

}  // namespace

std::int32_t cell_value(const GrayImage& image, const CubeCell& cell) {
  check_cell(image, cell);
  std::int32_t best = image.levels();
  for (const auto idx : containing_pixels(image, cell)) best = std::min(best, image[idx]);
  return best;
}

BifilteredComplex build_cubical_complex(const GrayImage& image1, const GrayImage& image2) {
  if (!image1.same_shape(image2)) throw ValidationError("image pair dimensions differ");
  const int d = image1.ndim();
  std::array<std::int64_t, 3> ext{1, 1, 1};
  for (int a = 0; a < d; ++a) ext[static_cast<std::size_t>(a)] = 2 * static_cast<std::int64_t>(image1.dim(a)) + 1;
  auto linear = [&](const std::array<std::int64_t, 3>& c) { return (c[0] * ext[1] + c[1]) * ext[2] + c[2]; };

  BifilteredComplex complex;
  for (std::int64_t x = 0; x < ext[0]; ++x)
    for (std::int64_t y = 0; y < ext[1]; ++y)
      for (std::int64_t z = 0; z < ext[2]; ++z) {
        CubeCell cell{{x, y, d == 3 ? z : 0}, d};
        std::vector<std::int64_t> faces;
        for (int a = 0; a < d; ++a) {
          if ((cell.coords[static_cast<std::size_t>(a)] & 1) == 0) continue;
          for (const std::int64_t step : {-1, 1}) {
            auto f = cell.coords;
            f[static_cast<std::size_t>(a)] += step;
            faces.push_back(linear(f));
          }
        }
        std::vector<Grade> grades;
        for (const auto idx : containing_pixels(image1, cell))
          grades.push_back({static_cast<double>(image1[idx]), static_cast<double>(image2[idx])});
        complex.add_cell(cell.dim(), std::move(faces), pareto_front(std::move(grades)));
      }
  return complex;
}

BifilteredComplex build_cubical_complex(const GrayImage& image) { return build_cubical_complex(image, image); }

EulerCurve ecc_image(const GrayImage& image, int levels, const ScanOptions& options) {
  check_levels(image, levels);
  const auto pp = pad(image, image, levels);
  const int chunks = std::max(1, options.threads);
  std::vector<std::vector<std::int64_t>> parts(static_cast<std::size_t>(chunks),
                                               std::vector<std::int64_t>(static_cast<std::size_t>(levels), 0));
  with_change_source(image.ndim(), options, [&](const auto& change) {
    parallel_chunks(image.size(), chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
      scan_curve(pp, change, b, e, parts[c]);
    });
  });
  auto chi = merge(parts);
  for (std::size_t s = 1; s < chi.size(); ++s) chi[s] += chi[s - 1];
  return EulerCurve{ThresholdGrid::integers(levels), std::move(chi)};
}

EulerSurface ecs_image_pair(const GrayImage& image1, const GrayImage& image2, int levels,
                            const ScanOptions& options) {
  if (!image1.same_shape(image2)) throw ValidationError("image pair dimensions differ");
  check_levels(image1, levels);
  check_levels(image2, levels);
  const auto pp = pad(image1, image2, levels);
  const auto cells = static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels);
  const int chunks = std::max(1, options.threads);
  std::vector<std::vector<std::int64_t>> parts(static_cast<std::size_t>(chunks), std::vector<std::int64_t>(cells, 0));
  with_change_source(image1.ndim(), options, [&](const auto& change) {
    parallel_chunks(image1.size(), chunks, [&](std::size_t c, std::size_t b, std::size_t e) {
      scan_surface(pp, change, levels, b, e, parts[c]);
    });
  });
  auto chi = merge(parts);
  // Row s now holds chi(Q_{s,t}) - chi(Q_{s-1,t}); accumulate down columns.
  const auto cols = static_cast<std::size_t>(levels);
  for (std::size_t s = 1; s < cols; ++s)
    for (std::size_t t = 0; t < cols; ++t) chi[s * cols + t] += chi[(s - 1) * cols + t];
  auto grid = ThresholdGrid::integers(levels);
  return EulerSurface(grid, grid, std::move(chi));
}

EulerCurve ecc_3d(const GrayImage& image, int levels, const ScanOptions& options) {
  if (image.ndim() != 3) throw ParameterError("ecc_3d needs a 3D image");
  return ecc_image(image, levels, options);
}

EulerSurface ecs_3d(const GrayImage& image1, const GrayImage& image2, int levels, const ScanOptions& options) {
  if (image1.ndim() != 3 || image2.ndim() != 3) throw ParameterError("ecs_3d needs 3D images");
  return ecs_image_pair(image1, image2, levels, options);
}

}  // namespace eulersurf
