#include "eulersurf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eulersurf/error.hpp"

namespace eulersurf {

RealMatrix RealMatrix::from(const EulerSurface& s) {
  RealMatrix m(s.rows(), s.cols());
  for (std::size_t i = 0; i < s.data().size(); ++i) m.v_[i] = static_cast<double>(s.data()[i]);
  return m;
}

SurfaceEnsemble::SurfaceEnsemble(std::vector<EulerSurface> surfaces) : surfaces_(std::move(surfaces)) {
  if (surfaces_.empty()) throw ValidationError("surface ensemble is empty");
  for (const auto& s : surfaces_)
    if (!(s.grid1() == surfaces_.front().grid1()) || !(s.grid2() == surfaces_.front().grid2()))
      throw ValidationError("surfaces in an ensemble must share identical grids");
}

RealMatrix mean_surface(const SurfaceEnsemble& ensemble) {
  const auto& first = ensemble.surfaces().front();
  RealMatrix m(first.rows(), first.cols());
  for (const auto& s : ensemble.surfaces())
    for (std::size_t i = 0; i < m.data().size(); ++i) m.data()[i] += static_cast<double>(s.data()[i]);
  const double n = static_cast<double>(ensemble.size());
  for (auto& v : m.data()) v /= n;
  return m;
}

RealMatrix std_surface(const SurfaceEnsemble& ensemble) {
  const auto mean = mean_surface(ensemble);
  RealMatrix var(mean.rows(), mean.cols());
  for (const auto& s : ensemble.surfaces())
    for (std::size_t i = 0; i < var.data().size(); ++i) {
      const double d = static_cast<double>(s.data()[i]) - mean.data()[i];
      var.data()[i] += d * d;
    }
  const double n = static_cast<double>(ensemble.size());
  for (auto& v : var.data()) v = std::sqrt(v / n);
  return var;
}

std::size_t Terrain::sentinel_count() const noexcept {
  return static_cast<std::size_t>(std::count(sentinel.begin(), sentinel.end(), std::uint8_t{1}));
}

Terrain Terrain::absolute() const {
  Terrain out = *this;
  for (auto& v : out.values.data()) v = std::fabs(v);
  return out;
}

namespace {

void require_same_grids(const SurfaceEnsemble& a, const SurfaceEnsemble& b) {
  if (!(a.grid1() == b.grid1()) || !(a.grid2() == b.grid2()))
    throw ValidationError("ensembles are defined over different grids");
}

}  // namespace

Terrain terrain(const SurfaceEnsemble& a, const SurfaceEnsemble& b) {
  require_same_grids(a, b);
  auto values = mean_surface(a);
  const auto mb = mean_surface(b);
  for (std::size_t i = 0; i < values.data().size(); ++i) values.data()[i] -= mb.data()[i];
  std::vector<std::uint8_t> sentinel(values.data().size(), 0);
  return Terrain{a.grid1(), a.grid2(), std::move(values), TerrainKind::kRaw, std::move(sentinel)};
}

Terrain normalized_terrain(const SurfaceEnsemble& a, const SurfaceEnsemble& b) {
  auto t = terrain(a, b);
  const auto sa = std_surface(a);
  const auto sb = std_surface(b);
  for (std::size_t i = 0; i < t.values.data().size(); ++i) {
    const double num = t.values.data()[i];
    const double den = sa.data()[i] + sb.data()[i];
    if (den > 0.0) {
      t.values.data()[i] = num / den;
    } else {
      t.sentinel[i] = num != 0.0 ? 1 : 0;
      t.values.data()[i] = 0.0;
    }
  }
  t.kind = TerrainKind::kNormalized;
  return t;
}

double square_probability(double u, double w, double p) noexcept {
  return std::min(u, w) * p + u * w * (1.0 - p);
}

CellCensus cell_census(std::int64_t n1, std::int64_t n2) {
  if (n1 < 1 || n2 < 1) throw ParameterError("image sizes must be positive");
  CellCensus c;
  c.vertices_in_4 = (n1 - 1) * (n2 - 1);
  c.vertices_in_2 = 2 * (n1 - 1) + 2 * (n2 - 1);
  c.vertices_in_1 = 4;
  c.edges_in_2 = n1 * (n2 + 1) + n2 * (n1 + 1) - 2 * n1 - 2 * n2;
  c.edges_in_1 = 2 * n1 + 2 * n2;
  c.squares = n1 * n2;
  return c;
}

namespace {

double expected_chi(const CellCensus& c, double P) {
  auto present = [P](int k) { return 1.0 - std::pow(1.0 - P, k); };
  return static_cast<double>(c.vertices_in_4) * present(4) + static_cast<double>(c.vertices_in_2) * present(2) +
         static_cast<double>(c.vertices_in_1) * present(1) - static_cast<double>(c.edges_in_2) * present(2) -
         static_cast<double>(c.edges_in_1) * present(1) + static_cast<double>(c.squares) * P;
}

}  // namespace

RealMatrix expected_random_pair_surface(std::int64_t n1, std::int64_t n2, double p, int levels) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("correlation p must lie in [0, 1]");
  if (levels < 1) throw ParameterError("levels must be positive");
  const auto census = cell_census(n1, n2);
  const auto L = static_cast<std::size_t>(levels);
  RealMatrix out(L, L);
  for (std::size_t s = 0; s < L; ++s)
    for (std::size_t t = 0; t < L; ++t) {
      const double u = static_cast<double>(s + 1) / levels;
      const double w = static_cast<double>(t + 1) / levels;
      out.at(s, t) = expected_chi(census, square_probability(u, w, p));
    }
  return out;
}

std::vector<double> expected_uniform_curve(std::int64_t n1, std::int64_t n2, int levels) {
  if (levels < 1) throw ParameterError("levels must be positive");
  const auto census = cell_census(n1, n2);
  std::vector<double> out(static_cast<std::size_t>(levels));
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = expected_chi(census, static_cast<double>(s + 1) / levels);
  return out;
}

RegionSummary region_aggregate(const Terrain& terrain, const Region& region) {
  const std::size_t rows = terrain.values.rows(), cols = terrain.values.cols();
  auto selected = [&](std::size_t s, std::size_t t) -> bool {
    if (terrain.is_sentinel(s, t)) return false;
    if (const auto* r = std::get_if<RectRegion>(&region)) return s >= r->s0 && s <= r->s1 && t >= r->t0 && t <= r->t1;
    return std::fabs(terrain.values.at(s, t)) >= std::get<MaskRegion>(region).threshold;
  };
  if (const auto* r = std::get_if<RectRegion>(&region))
    if (r->s0 > r->s1 || r->t0 > r->t1 || r->s1 >= rows || r->t1 >= cols)
      throw ParameterError("region rectangle lies outside the terrain");

  RegionSummary out;
  double sum = 0.0;
  out.max = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < rows; ++s)
    for (std::size_t t = 0; t < cols; ++t) {
      if (!selected(s, t)) continue;
      const double v = terrain.values.at(s, t);
      sum += v;
      ++out.count;
      if (v > out.max) {
        out.max = v;
        out.argmax_s = s;
        out.argmax_t = t;
      }
    }
  if (out.count == 0) throw ParameterError("region selects no terrain cells");
  out.mean = sum / static_cast<double>(out.count);
  return out;
}

std::vector<double> ZScore::apply(std::span<const double> x) const {
  if (x.size() != mean.size() || x.size() != sd.size())
    throw ValidationError("feature length " + std::to_string(x.size()) + " does not match normalization length " +
                          std::to_string(mean.size()));
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sd[i] > 0.0 ? (x[i] - mean[i]) / sd[i] : 0.0;
  return out;
}

std::vector<double> subsample(const EulerCurve& curve, std::size_t stride) {
  if (stride == 0) throw ParameterError("stride must be at least 1");
  if (stride > curve.chi.size()) throw ParameterError("stride exceeds curve length");
  std::vector<double> out;
  for (std::size_t i = 0; i < curve.chi.size(); i += stride) out.push_back(static_cast<double>(curve.chi[i]));
  return out;
}

std::vector<double> subsample(const EulerSurface& surface, std::size_t stride) {
  if (stride == 0) throw ParameterError("stride must be at least 1");
  if (stride > surface.rows() || stride > surface.cols()) throw ParameterError("stride exceeds surface extent");
  std::vector<double> out;
  for (std::size_t s = 0; s < surface.rows(); s += stride)
    for (std::size_t t = 0; t < surface.cols(); t += stride) out.push_back(static_cast<double>(surface.at(s, t)));
  return out;
}

ZScore fit_zscore(std::span<const std::vector<double>> features) {
  if (features.empty()) throw ValidationError("cannot fit normalization to zero feature vectors");
  const std::size_t n = features.front().size();
  ZScore z{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (const auto& f : features) {
    if (f.size() != n) throw ValidationError("feature vectors differ in length");
    for (std::size_t i = 0; i < n; ++i) z.mean[i] += f[i];
  }
  const double count = static_cast<double>(features.size());
  for (auto& m : z.mean) m /= count;
  for (const auto& f : features)
    for (std::size_t i = 0; i < n; ++i) z.sd[i] += (f[i] - z.mean[i]) * (f[i] - z.mean[i]);
  for (auto& s : z.sd) s = std::sqrt(s / count);
  return z;
}

std::vector<double> featurize(const EulerCurve& curve, std::size_t stride, const ZScore* normalize) {
  auto f = subsample(curve, stride);
  return normalize ? normalize->apply(f) : f;
}

std::vector<double> featurize(const EulerSurface& surface, std::size_t stride, const ZScore* normalize) {
  auto f = subsample(surface, stride);
  return normalize ? normalize->apply(f) : f;
}

EulerSurface resample_surface(const EulerSurface& surface, const ThresholdGrid& grid1, const ThresholdGrid& grid2) {
  auto lower = [](const ThresholdGrid& old, double v) -> std::ptrdiff_t {
    const auto& vals = old.values();
    return (std::upper_bound(vals.begin(), vals.end(), v) - vals.begin()) - 1;
  };
  EulerSurface out(grid1, grid2);
  for (std::size_t s = 0; s < grid1.size(); ++s) {
    const auto os = lower(surface.grid1(), grid1[s]);
    for (std::size_t t = 0; t < grid2.size(); ++t) {
      const auto ot = lower(surface.grid2(), grid2[t]);
      out.at(s, t) = (os < 0 || ot < 0) ? 0 : surface.at(static_cast<std::size_t>(os), static_cast<std::size_t>(ot));
    }
  }
  return out;
}

}  // namespace eulersurf
