#include "eulersurf/synth.hpp"

#include <cmath>
#include <random>

#include "eulersurf/error.hpp"
#include "eulersurf/rng.hpp"

namespace eulersurf {

namespace {

void check_levels(int levels) {
  if (levels < 1) throw ParameterError("levels must be positive");
}

void check_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw ParameterError("Clayton theta must be positive and finite (theta = 0 is the independence copula)");
}

// Conditional inversion of the Clayton copula: w solves C(w | u) = q.
std::pair<double, double> clayton_draw(Stream& rng, double theta) {
  const double u = rng.uniform_open();
  const double q = rng.uniform_open();
  const double w = std::pow((std::pow(q, -theta / (1.0 + theta)) - 1.0) * std::pow(u, -theta) + 1.0, -1.0 / theta);
  return {u, w};
}

std::int32_t to_level(double unit, int levels) {
  const auto v = static_cast<std::int32_t>(std::floor(unit * levels));
  return v < levels ? v : levels - 1;  // guards rounding at unit -> 1
}

}  // namespace

std::pair<GrayImage, GrayImage> gen_correlated_pair(std::size_t n1, std::size_t n2, double p, int levels,
                                                    std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("correlation p must lie in [0, 1]");
  check_levels(levels);
  std::vector<std::int32_t> a(n1 * n2), b(n1 * n2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Stream rng(seed, i);
    const double x = rng.uniform();
    const double v1 = rng.uniform();
    const double v2 = rng.uniform();
    a[i] = to_level(v1, levels);
    b[i] = x <= p ? a[i] : to_level(v2, levels);
  }
  return {GrayImage({n1, n2}, std::move(a), levels), GrayImage({n1, n2}, std::move(b), levels)};
}

std::vector<double> gen_clayton_points(std::size_t n, double theta, double levels, std::uint64_t seed) {
  check_theta(theta);
  if (!(levels > 0.0)) throw ParameterError("scale must be positive");
  std::vector<double> out(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Stream rng(seed, i);
    const auto [u, w] = clayton_draw(rng, theta);
    out[2 * i] = u * levels;
    out[2 * i + 1] = w * levels;
  }
  return out;
}

std::pair<GrayImage, GrayImage> gen_copula_images_3d(std::size_t n, double theta, int levels, std::uint64_t seed) {
  check_theta(theta);
  check_levels(levels);
  const std::size_t count = n * n * n;
  std::vector<std::int32_t> a(count), b(count);
  for (std::size_t i = 0; i < count; ++i) {
    Stream rng(seed, i);
    const auto [u, w] = clayton_draw(rng, theta);
    a[i] = to_level(u, levels);
    b[i] = to_level(w, levels);
  }
  return {GrayImage({n, n, n}, std::move(a), levels), GrayImage({n, n, n}, std::move(b), levels)};
}

namespace {

// Stream 0 draws the count; point i draws from stream i + 1.
std::size_t poisson_count(double lambda, std::uint64_t seed) {
  Stream rng(seed, 0);
  std::poisson_distribution<long long> dist(lambda);
  return static_cast<std::size_t>(dist(rng));
}

}  // namespace

PointCloud gen_poisson(double lambda, std::uint64_t seed) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("Poisson intensity must be positive");
  const std::size_t n = poisson_count(lambda, seed);
  std::vector<double> xy(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Stream rng(seed, i + 1);
    xy[2 * i] = rng.uniform();
    xy[2 * i + 1] = rng.uniform();
  }
  return PointCloud(2, std::move(xy));
}

ClusterSample gen_hawkes_cluster(double lambda_parent, double alpha, double sigma, std::uint64_t seed, bool clip) {
  if (!(lambda_parent > 0.0) || !std::isfinite(lambda_parent))
    throw ParameterError("cluster-centre intensity must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("branching ratio alpha must lie in [0, 1)");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("offspring spread sigma must be positive");

  const std::size_t centres = poisson_count(lambda_parent, seed);
  std::vector<double> xy;
  std::vector<int> parent;
  xy.reserve(2 * centres);
  for (std::size_t i = 0; i < centres; ++i) {
    Stream rng(seed, i + 1);
    xy.push_back(rng.uniform());
    xy.push_back(rng.uniform());
    parent.push_back(-1);
  }
  // Breadth-first: point i's stream first yields its own position (centres
  // only, above), then its offspring count and displacements.
  for (std::size_t i = 0; i < parent.size(); ++i) {
    Stream rng(seed, i + 1);
    if (parent[i] < 0) {
      rng();
      rng();
    }
    std::poisson_distribution<int> children(alpha);
    std::normal_distribution<double> offset(0.0, sigma);
    const int k = alpha > 0.0 ? children(rng) : 0;
    for (int c = 0; c < k; ++c) {
      const double x = xy[2 * i] + offset(rng);
      const double y = xy[2 * i + 1] + offset(rng);
      xy.push_back(x);
      xy.push_back(y);
      parent.push_back(static_cast<int>(i));
    }
  }

  if (clip) {
    std::vector<int> remap(parent.size(), -1);
    std::vector<double> kept_xy;
    std::vector<int> kept_parent;
    for (std::size_t i = 0; i < parent.size(); ++i) {
      const double x = xy[2 * i], y = xy[2 * i + 1];
      if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) continue;
      remap[i] = static_cast<int>(kept_parent.size());
      kept_xy.push_back(x);
      kept_xy.push_back(y);
      kept_parent.push_back(parent[i] < 0 ? -1 : remap[static_cast<std::size_t>(parent[i])]);
    }
    xy.swap(kept_xy);
    parent.swap(kept_parent);
  }
  return ClusterSample{PointCloud(2, std::move(xy)), std::move(parent)};
}

}  // namespace eulersurf
