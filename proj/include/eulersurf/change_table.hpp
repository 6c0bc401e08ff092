#pragma once

// Euler characteristic change produced by inserting one top-dimensional cube
// (and every face of it not already present) next to a given configuration
// of neighbouring top cubes.
//
// Neighbours are the 3^d - 1 cubes of the 3x3 (3x3x3) block around the
// inserted cube, enumerated in row-major (slice-row-major) order with the
// centre skipped. The first neighbour is the most significant bit of the
// configuration index, so the 2D block
//
//   1 0 1
//   0 . 0
//   1 0 1
//
// reads as 10100101 = 165.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace eulersurf {

constexpr int neighbor_count(int dim) noexcept { return dim == 2 ? 8 : dim == 3 ? 26 : -1; }

/// Index of a neighbour presence pattern; bits[0] is the most significant.
std::uint32_t neighborhood_index(std::span<const bool> bits);

/// Evaluates the change for a single configuration without a table: the
/// inserted cube's faces are tested against precomputed masks of the
/// neighbours sharing them.
class LocalChange {
 public:
  explicit LocalChange(int dim);

  int dim() const noexcept { return dim_; }
  int operator()(std::uint32_t mask) const noexcept {
    int delta = 0;
    for (std::size_t f = 0; f < face_masks_.size(); ++f)
      if ((mask & face_masks_[f]) == 0) delta += face_signs_[f];
    return delta;
  }

 private:
  int dim_;
  std::vector<std::uint32_t> face_masks_;
  std::vector<int> face_signs_;
};

/// All 2^(3^d - 1) changes for d in {2, 3}.
class ChangeTable {
 public:
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }
  int operator[](std::uint32_t mask) const noexcept { return entries_[mask]; }
  std::span<const std::int8_t> entries() const noexcept { return entries_; }

  /// Binary cache file keyed by a format-version checksum.
  void save(const std::filesystem::path& path) const;
  /// Throws FormatError on a missing, stale or corrupt file.
  static ChangeTable load(const std::filesystem::path& path);

  friend ChangeTable precompute_change_table(int dim);

 private:
  ChangeTable(int dim, std::vector<std::int8_t> entries) : dim_(dim), entries_(std::move(entries)) {}

  int dim_;
  std::vector<std::int8_t> entries_;
};

/// Throws ParameterError for dim outside {2, 3}; larger tables are
/// impractical (2^80 entries for d = 4).
ChangeTable precompute_change_table(int dim);

/// Loads `cache` when it holds a valid table for `dim`, otherwise computes
/// the table and writes it there.
ChangeTable load_or_build_change_table(int dim, const std::filesystem::path& cache);

}  // namespace eulersurf
