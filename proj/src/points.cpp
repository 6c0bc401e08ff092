#include "eulersurf/points.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eulersurf/error.hpp"

namespace eulersurf {

PointCloud::PointCloud(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ != 2 && dim_ != 3) throw ParameterError("points must be 2D or 3D");
  if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
    throw ValidationError("coordinate count is not a multiple of the dimension");
  for (const double c : coords_)
    if (!std::isfinite(c)) throw ValidationError("point coordinates must be finite");
  std::vector<std::size_t> order(size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    const auto pa = point(a), pb = point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!less(order[i - 1], order[i]))
      throw ValidationError("points " + std::to_string(order[i - 1]) + " and " + std::to_string(order[i]) +
                            " coincide");
}

double PointCloud::squared_distance(std::size_t i, std::size_t j) const noexcept {
  double d2 = 0.0;
  for (int a = 0; a < dim_; ++a) {
    const double d = (*this)(i, a) - (*this)(j, a);
    d2 += d * d;
  }
  return d2;
}

SimplicialComplex::SimplicialComplex(std::vector<Simplex> simplices) : simplices_(std::move(simplices)) {
  for (auto& s : simplices_) {
    if (s.empty()) throw ValidationError("empty simplex");
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ValidationError("simplex repeats a vertex");
  }
  std::sort(simplices_.begin(), simplices_.end(), [](const Simplex& a, const Simplex& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (std::size_t i = 0; i < simplices_.size(); ++i)
    if (!index_.emplace(simplices_[i], i).second) throw ValidationError("simplex listed twice");
  for (std::size_t i = 0; i < simplices_.size(); ++i)
    if (simplices_[i].size() > 1) (void)facets(i);
}

std::ptrdiff_t SimplicialComplex::find(const Simplex& s) const {
  const auto it = index_.find(s);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::vector<std::size_t> SimplicialComplex::facets(std::size_t i) const {
  const auto& s = simplices_[i];
  std::vector<std::size_t> out;
  if (s.size() < 2) return out;
  for (std::size_t drop = 0; drop < s.size(); ++drop) {
    Simplex f;
    f.reserve(s.size() - 1);
    for (std::size_t k = 0; k < s.size(); ++k)
      if (k != drop) f.push_back(s[k]);
    const auto idx = find(f);
    if (idx < 0) throw ValidationError("simplicial complex is not closed under faces");
    out.push_back(static_cast<std::size_t>(idx));
  }
  return out;
}

}  // namespace eulersurf
