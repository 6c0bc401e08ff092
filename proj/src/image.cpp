#include "eulersurf/image.hpp"

#include <string>

#include "eulersurf/error.hpp"

namespace eulersurf {

GrayImage::GrayImage(std::vector<std::size_t> dims, std::vector<std::int32_t> data, int levels)
    : dims_(std::move(dims)), data_(std::move(data)), levels_(levels) {
  if (dims_.size() != 2 && dims_.size() != 3) throw ValidationError("image must be 2D or 3D");
  std::size_t n = 1;
  for (const auto d : dims_) {
    if (d == 0) throw ValidationError("image dimensions must be positive");
    n *= d;
  }
  if (n != data_.size())
    throw ValidationError("image has " + std::to_string(data_.size()) + " values, dims require " +
                          std::to_string(n));
  if (levels_ < 1) throw ParameterError("levels must be positive");
  for (const auto v : data_)
    if (v < 0 || v >= levels_)
      throw ValidationError("intensity " + std::to_string(v) + " outside [0, " + std::to_string(levels_) + ")");
}

GrayImage GrayImage::filled(std::vector<std::size_t> dims, std::int32_t value, int levels) {
  std::size_t n = 1;
  for (const auto d : dims) n *= d;
  return GrayImage(std::move(dims), std::vector<std::int32_t>(n, value), levels);
}

}  // namespace eulersurf
