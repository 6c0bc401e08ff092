#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eulersurf/error.hpp"
#include "eulersurf/synth.hpp"
#include "support/oracles.hpp"

using namespace eulersurf;

namespace {

// Kolmogorov-Smirnov distance of a sample from Uniform(0, 1).
double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    d = std::max({d, std::fabs(double(i + 1) / n - x[i]), std::fabs(x[i] - double(i) / n)});
  return d;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("correlated pairs") {
  const auto [a1, b1] = gen_correlated_pair(40, 40, 1.0, 16, 3);
  CHECK(a1 == b1);

  auto agreement = [](double p, int levels) {
    const auto [a, b] = gen_correlated_pair(200, 200, p, levels, 11);
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
    return static_cast<double>(same) / static_cast<double>(a.size());
  };
  // P(equal) = p + (1 - p) / L; 40000 pixels give a standard error below 0.0025.
  CHECK(std::fabs(agreement(0.0, 16) - 1.0 / 16) < 0.01);
  CHECK(std::fabs(agreement(0.4, 8) - (0.4 + 0.6 / 8)) < 0.01);

  // Marginals are uniform over the levels.
  const auto [a, b] = gen_correlated_pair(100, 100, 0.3, 4, 5);
  std::vector<int> hist(4, 0);
  for (auto v : b.data()) ++hist[static_cast<std::size_t>(v)];
  for (int h : hist) CHECK(std::abs(h - 2500) < 200);

  CHECK(gen_correlated_pair(5, 7, 0.5, 8, 9) == gen_correlated_pair(5, 7, 0.5, 8, 9));
  CHECK_FALSE(gen_correlated_pair(5, 7, 0.5, 8, 9).first == gen_correlated_pair(5, 7, 0.5, 8, 10).first);
  CHECK_THROWS_AS(gen_correlated_pair(2, 2, 1.5, 8, 0), ParameterError);
  CHECK_THROWS_AS(gen_correlated_pair(2, 2, 0.5, 0, 0), ParameterError);
}

TEST_CASE("clayton copula marginals and rank correlation") {
  const std::size_t n = 100000;
  for (double theta : {1.0, 5.0}) {
    CAPTURE(theta);
    const auto xy = gen_clayton_points(n, theta, 1.0, 17);
    std::vector<double> u, w;
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      u.push_back(xy[2 * i]);
      w.push_back(xy[2 * i + 1]);
      pairs.emplace_back(xy[2 * i], xy[2 * i + 1]);
    }
    // 1% critical value of the one-sample KS statistic.
    CHECK(ks_uniform(u) < 1.63 / std::sqrt(double(n)));
    CHECK(ks_uniform(w) < 1.63 / std::sqrt(double(n)));
    CHECK(std::fabs(oracle::kendall_tau(pairs) - theta / (theta + 2)) < 0.02);
  }
  CHECK_THROWS_AS(gen_clayton_points(10, 0.0, 1.0, 0), ParameterError);
  CHECK_THROWS_AS(gen_clayton_points(10, -1.0, 1.0, 0), ParameterError);
}

TEST_CASE("copula volumes") {
  const auto [a, b] = gen_copula_images_3d(8, 50.0, 256, 4);
  CHECK(a.dims() == std::vector<std::size_t>{8, 8, 8});
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap += std::abs(a[i] - b[i]);
  CHECK(gap / static_cast<double>(a.size()) < 256.0 / 10);
  CHECK(gen_copula_images_3d(4, 2.0, 16, 1) == gen_copula_images_3d(4, 2.0, 16, 1));
}

TEST_CASE("poisson process") {
  std::vector<double> counts;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto pts = gen_poisson(400, seed);
    counts.push_back(static_cast<double>(pts.size()));
    for (double c : pts.coords()) {
      CHECK(c >= 0.0);
      CHECK(c < 1.0);
    }
  }
  const double m = mean_of(counts);
  double var = 0.0;
  for (double c : counts) var += (c - m) * (c - m);
  var /= static_cast<double>(counts.size() - 1);
  CHECK(std::fabs(m - 400) < 4 * std::sqrt(400.0 / 300));
  CHECK(var / 400 > 0.75);
  CHECK(var / 400 < 1.3);
  CHECK_THROWS_AS(gen_poisson(0, 0), ParameterError);
}

TEST_CASE("hawkes cluster process") {
  SUBCASE("no branching reduces to the parent process") {
    const auto h = gen_hawkes_cluster(400, 0.0, 0.02, 8);
    CHECK(h.points.coords() == gen_poisson(400, 8).coords());
    CHECK(std::all_of(h.parent.begin(), h.parent.end(), [](int p) { return p == -1; }));
  }

  SUBCASE("mean size and displacement") {
    std::vector<double> sizes, dx;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto h = gen_hawkes_cluster(280, 0.3, 0.02, seed);
      sizes.push_back(static_cast<double>(h.points.size()));
      for (std::size_t i = 0; i < h.parent.size(); ++i) {
        if (h.parent[i] < 0) continue;
        const auto p = static_cast<std::size_t>(h.parent[i]);
        CHECK(p < i);
        dx.push_back(h.points(i, 0) - h.points(p, 0));
      }
    }
    // Var of the total count is lambda / (1 - alpha)^3.
    const double se = std::sqrt(280 / std::pow(0.7, 3) / 200);
    CHECK(std::fabs(mean_of(sizes) - 400) < 3 * se);
    double ss = 0.0;
    for (double d : dx) ss += d * d;
    CHECK(std::sqrt(ss / static_cast<double>(dx.size())) == doctest::Approx(0.02).epsilon(0.05));
  }

  SUBCASE("clipping keeps the unit square and consistent parents") {
    const auto h = gen_hawkes_cluster(280, 0.5, 0.2, 3, true);
    for (double c : h.points.coords()) {
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
    CHECK(h.parent.size() == h.points.size());
    for (std::size_t i = 0; i < h.parent.size(); ++i) CHECK(h.parent[i] < static_cast<int>(i));
    CHECK(h.points.size() < gen_hawkes_cluster(280, 0.5, 0.2, 3).points.size());
  }

  CHECK_THROWS_AS(gen_hawkes_cluster(280, 1.0, 0.02, 0), ParameterError);
  CHECK_THROWS_AS(gen_hawkes_cluster(280, -0.1, 0.02, 0), ParameterError);
  CHECK_THROWS_AS(gen_hawkes_cluster(280, 0.3, 0.0, 0), ParameterError);
  CHECK_THROWS_AS(gen_hawkes_cluster(0, 0.3, 0.02, 0), ParameterError);
}
