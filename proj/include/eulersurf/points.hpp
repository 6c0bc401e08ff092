#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace eulersurf {

/// Finite set of pairwise distinct points in R^2 or R^3, stored
/// interleaved.
class PointCloud {
 public:
  PointCloud(int dim, std::vector<double> coords);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const noexcept { return coords_.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double operator()(std::size_t i, int axis) const {
    return coords_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(axis)];
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

  double squared_distance(std::size_t i, std::size_t j) const noexcept;

 private:
  int dim_;
  std::vector<double> coords_;
};

/// Sorted vertex indices; dimension is size() - 1.
using Simplex = std::vector<int>;

/// Simplices ordered by dimension, then lexicographically. Every face of a
/// listed simplex is listed.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  /// Sorts each simplex and the list; throws ValidationError when a face is
  /// missing or a simplex repeats.
  explicit SimplicialComplex(std::vector<Simplex> simplices);

  std::size_t size() const noexcept { return simplices_.size(); }
  const Simplex& operator[](std::size_t i) const { return simplices_[i]; }
  const std::vector<Simplex>& simplices() const noexcept { return simplices_; }
  int dim(std::size_t i) const { return static_cast<int>(simplices_[i].size()) - 1; }

  /// Index of a simplex given in sorted order, or -1.
  std::ptrdiff_t find(const Simplex& s) const;

  /// Indices of the codimension-one faces of simplex i.
  std::vector<std::size_t> facets(std::size_t i) const;

 private:
  std::vector<Simplex> simplices_;
  std::map<Simplex, std::size_t> index_;
};

}  // namespace eulersurf
