#include "eulersurf/derived.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eulersurf/error.hpp"

namespace eulersurf {

DerivedKind parse_derived_kind(std::string_view name) {
  if (name == "laplacian") return DerivedKind::kLaplacian;
  if (name == "gradient" || name == "top-down-gradient" || name == "top_down_gradient")
    return DerivedKind::kTopDownGradient;
  if (name == "complement") return DerivedKind::kComplement;
  if (name == "radial" || name == "radial-gradient" || name == "radial_gradient") return DerivedKind::kRadialGradient;
  throw ParameterError("unknown derived image kind `" + std::string(name) + "`");
}

GrayImage derived_image(const GrayImage& image, DerivedKind kind) {
  if (image.ndim() != 2) throw ParameterError("derived images are defined for 2D images only");
  const std::size_t n1 = image.dim(0), n2 = image.dim(1);
  const int top = image.levels() - 1;
  std::vector<std::int32_t> out(image.size());

  switch (kind) {
    case DerivedKind::kLaplacian: {
      auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) -> std::int64_t {
        if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(n1) || j >= static_cast<std::ptrdiff_t>(n2)) return 0;
        return image(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      };
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
          const auto si = static_cast<std::ptrdiff_t>(i), sj = static_cast<std::ptrdiff_t>(j);
          const std::int64_t v =
              4 * at(si, sj) - at(si - 1, sj) - at(si + 1, sj) - at(si, sj - 1) - at(si, sj + 1);
          out[i * n2 + j] = static_cast<std::int32_t>(std::clamp<std::int64_t>(v, 0, top));
        }
      break;
    }
    case DerivedKind::kTopDownGradient:
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
          out[i * n2 + j] = static_cast<std::int32_t>((static_cast<std::int64_t>(top) * static_cast<std::int64_t>(i)) /
                                                      static_cast<std::int64_t>(n1));
      break;
    case DerivedKind::kComplement:
      for (std::size_t i = 0; i < image.size(); ++i) out[i] = top - image[i];
      break;
    case DerivedKind::kRadialGradient: {
      const double ci = (static_cast<double>(n1) - 1.0) / 2.0;
      const double cj = (static_cast<double>(n2) - 1.0) / 2.0;
      const double corner = std::hypot(ci, cj);
      for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) {
          const double r = std::hypot(static_cast<double>(i) - ci, static_cast<double>(j) - cj);
          const double v = corner > 0.0 ? std::floor(top * r / corner) : 0.0;
          out[i * n2 + j] = static_cast<std::int32_t>(std::clamp(v, 0.0, static_cast<double>(top)));
        }
      break;
    }
  }
  return GrayImage(image.dims(), std::move(out), image.levels());
}

}  // namespace eulersurf
