#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace eulersurf {

/// Dense 2D (n1 x n2, row-major) or 3D (n1 x n2 x n3, slice-row-major)
/// raster of integer intensities in [0, levels).
class GrayImage {
 public:
  static constexpr int kDefaultLevels = 256;

  GrayImage(std::vector<std::size_t> dims, std::vector<std::int32_t> data, int levels = kDefaultLevels);

  static GrayImage filled(std::vector<std::size_t> dims, std::int32_t value, int levels = kDefaultLevels);

  int ndim() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  std::size_t size() const noexcept { return data_.size(); }
  int levels() const noexcept { return levels_; }

  std::int32_t operator()(std::size_t i, std::size_t j) const { return data_[i * dims_[1] + j]; }
  std::int32_t operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  std::int32_t operator[](std::size_t index) const { return data_[index]; }
  std::span<const std::int32_t> data() const noexcept { return data_; }

  bool same_shape(const GrayImage& o) const noexcept { return dims_ == o.dims_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::int32_t> data_;
  int levels_;
};

}  // namespace eulersurf
