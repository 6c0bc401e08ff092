#include <doctest.h>

#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "eulersurf/complex.hpp"
#include "eulersurf/error.hpp"
#include "eulersurf/rng.hpp"

using namespace eulersurf;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Vertex a at (0,0), vertex b at (1,0), edge ab at (1,2).
BifilteredComplex three_cells() {
  BifilteredComplex k;
  const auto a = k.add_cell(0, {}, Grade{0, 0});
  const auto b = k.add_cell(0, {}, Grade{1, 0});
  k.add_cell(1, {a, b}, Grade{1, 2});
  return k;
}

// Cubical n1 x n2 grid as an abstract complex, every cell at (0,0), with
// the squares listed in `skip` left out.
BifilteredComplex grid_complex(int n1, int n2, std::set<std::pair<int, int>> skip = {}) {
  BifilteredComplex k;
  auto vid = [&](int i, int j) { return static_cast<std::int64_t>(i * (n2 + 1) + j); };
  for (int i = 0; i <= n1; ++i)
    for (int j = 0; j <= n2; ++j) k.add_cell(0, {}, Grade{});
  std::map<std::pair<int, int>, std::int64_t> hor, ver;
  for (int i = 0; i <= n1; ++i)
    for (int j = 0; j < n2; ++j) hor[{i, j}] = k.add_cell(1, {vid(i, j), vid(i, j + 1)}, Grade{});
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j <= n2; ++j) ver[{i, j}] = k.add_cell(1, {vid(i, j), vid(i + 1, j)}, Grade{});
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (!skip.count({i, j})) k.add_cell(2, {hor[{i, j}], hor[{i + 1, j}], ver[{i, j}], ver[{i, j + 1}]}, Grade{});
  return k;
}

// Random monotone complex: a random simplicial complex on a few vertices
// whose grades dominate those of their faces.
BifilteredComplex random_complex(std::uint64_t seed) {
  Stream rng(seed, 0);
  BifilteredComplex k;
  const int nv = 3 + static_cast<int>(rng() % 5);
  std::map<std::vector<int>, std::int64_t> ids;
  for (int v = 0; v < nv; ++v) ids[{v}] = k.add_cell(0, {}, Grade{double(rng() % 5), double(rng() % 5)});
  auto grade_over = [&](const std::vector<std::int64_t>& faces) {
    Grade g{0, 0};
    for (auto f : faces) {
      g.h1 = std::max(g.h1, k.grades(static_cast<std::size_t>(f))[0].h1);
      g.h2 = std::max(g.h2, k.grades(static_cast<std::size_t>(f))[0].h2);
    }
    g.h1 += double(rng() % 3);
    g.h2 += double(rng() % 3);
    return g;
  };
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b)
      if (rng() % 2) {
        std::vector<std::int64_t> f{ids[{a}], ids[{b}]};
        ids[{a, b}] = k.add_cell(1, f, grade_over(f));
      }
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b)
      for (int c = b + 1; c < nv; ++c)
        if (ids.count({a, b}) && ids.count({a, c}) && ids.count({b, c}) && rng() % 2) {
          std::vector<std::int64_t> f{ids[{a, b}], ids[{a, c}], ids[{b, c}]};
          k.add_cell(2, f, grade_over(f));
        }
  return k;
}

}  // namespace

TEST_CASE("euler characteristic of small complexes") {
  BifilteredComplex vertex;
  vertex.add_cell(0, {}, Grade{});
  CHECK(euler_characteristic(vertex) == 1);
  CHECK(euler_characteristic(BifilteredComplex{}) == 0);

  const auto full = grid_complex(3, 3);
  CHECK(full.size() == 16 + 24 + 9);
  CHECK(euler_characteristic(full) == 1);

  const auto annulus = grid_complex(3, 3, {{1, 1}});
  CHECK(annulus.size() == 16 + 24 + 8);
  CHECK(euler_characteristic(annulus) == 0);
}

TEST_CASE("euler characteristic is additive over disjoint unions") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = random_complex(seed), b = random_complex(seed + 1000);
    std::vector<Cell> cells(a.cells());
    for (const auto& c : b.cells()) cells.push_back({c.id + static_cast<std::int64_t>(a.size()), c.dim});
    CHECK(euler_characteristic(cells) == euler_characteristic(a) + euler_characteristic(b));
  }
}

TEST_CASE("sublevel complex") {
  const auto k = three_cells();
  CHECK(sublevel_complex(k, kInf, kInf).size() == 3);
  CHECK(sublevel_complex(k, -1, kInf).empty());
  const auto at11 = sublevel_complex(k, 1, 1);
  REQUIRE(at11.size() == 2);
  CHECK(at11[0].id == 0);
  CHECK(at11[1].id == 1);

  SUBCASE("rejects a face entering after its coface") {
    BifilteredComplex bad;
    const auto a = bad.add_cell(0, {}, Grade{3, 0});
    const auto b = bad.add_cell(0, {}, Grade{0, 0});
    bad.add_cell(1, {a, b}, Grade{1, 1});
    CHECK_THROWS_AS(sublevel_complex(bad, 1, 1), ValidationError);
    CHECK_THROWS_AS(brute_force_surface(bad, ThresholdGrid({0, 1}), ThresholdGrid({0, 1})), ValidationError);
  }
  SUBCASE("rejects dangling and same-dimension faces") {
    BifilteredComplex bad;
    bad.add_cell(1, {5}, Grade{});
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    BifilteredComplex flat;
    const auto a = flat.add_cell(1, {}, Grade{});
    flat.add_cell(1, {a}, Grade{});
    CHECK_THROWS_AS(flat.validate(), ValidationError);
  }
}

TEST_CASE("sublevel sets are nested and face-closed") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto k = random_complex(seed);
    for (double s = 0; s < 10; s += 1.5)
      for (double t = 0; t < 10; t += 2) {
        const auto small = sublevel_complex(k, s, t);
        const auto big = sublevel_complex(k, s + 1, t + 1);
        std::set<std::int64_t> in_big, in_small;
        for (const auto& c : big) in_big.insert(c.id);
        for (const auto& c : small) in_small.insert(c.id);
        for (auto id : in_small) CHECK(in_big.count(id) == 1);
        for (auto id : in_small)
          for (auto f : k.faces(static_cast<std::size_t>(id))) CHECK(in_small.count(f) == 1);
      }
  }
}

TEST_CASE("brute force curve") {
  BifilteredComplex one;
  one.add_cell(0, {}, Grade{0.5, 0});
  CHECK(brute_force_curve(one, ThresholdGrid({0, 1})).chi == std::vector<std::int64_t>{0, 1});

  BifilteredComplex path;
  const auto a = path.add_cell(0, {}, Grade{0, 0});
  const auto b = path.add_cell(0, {}, Grade{1, 0});
  path.add_cell(1, {a, b}, Grade{2, 0});
  CHECK(brute_force_curve(path, ThresholdGrid({0, 1, 2})).chi == std::vector<std::int64_t>{1, 2, 1});

  CHECK(brute_force_curve(BifilteredComplex{}, ThresholdGrid({-1, 0, 7})).chi == std::vector<std::int64_t>{0, 0, 0});
}

TEST_CASE("brute force surface") {
  const ThresholdGrid g({0, 1, 2});
  CHECK(brute_force_surface(BifilteredComplex{}, g, g).data() == std::vector<std::int64_t>(9, 0));

  BifilteredComplex vertex;
  vertex.add_cell(0, {}, Grade{1, 2});
  CHECK(brute_force_surface(vertex, g, g).data() == std::vector<std::int64_t>{0, 0, 0, 0, 0, 1, 0, 0, 1});

  CHECK(brute_force_surface(three_cells(), g, g).data() == std::vector<std::int64_t>{1, 1, 1, 2, 2, 1, 2, 2, 1});
}

TEST_CASE("last row and column of a surface are the one-parameter curves") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto k = random_complex(seed);
    const ThresholdGrid g1({0, 1, 2, 3, 5, 8, 13}), g2({0, 2, 4, 6, 7, 9, 12});
    const auto surface = brute_force_surface(k, g1, g2);
    const auto last_row = surface.row(surface.rows() - 1);
    CHECK(std::vector<std::int64_t>(last_row.begin(), last_row.end()) ==
          brute_force_curve(k, g2, Parameter::kSecond).chi);
    CHECK(surface.column(surface.cols() - 1) == brute_force_curve(k, g1, Parameter::kFirst).chi);
  }
}

TEST_CASE("multi-critical cells enter at any of their grades") {
  BifilteredComplex k;
  k.add_cell(0, {}, std::vector<Grade>{{0, 5}, {5, 0}});
  const ThresholdGrid g({0, 5});
  CHECK(brute_force_surface(k, g, g).data() == std::vector<std::int64_t>{0, 1, 1, 1});
  CHECK(k.value(0, Parameter::kFirst) == 0);
  CHECK(k.value(0, Parameter::kSecond) == 0);
  CHECK_FALSE(k.single_critical());
}

TEST_CASE("threshold grid") {
  CHECK_THROWS_AS(ThresholdGrid({}), ValidationError);
  CHECK_THROWS_AS(ThresholdGrid({1, 1}), ValidationError);
  CHECK_THROWS_AS(ThresholdGrid({2, 1}), ValidationError);
  const ThresholdGrid g({0, 1.5, 3});
  CHECK(g.first_at_least(-1) == 0);
  CHECK(g.first_at_least(1.5) == 1);
  CHECK(g.first_at_least(1.6) == 2);
  CHECK(g.first_at_least(4) == 3);
  CHECK(ThresholdGrid::integers(4).values() == std::vector<double>{0, 1, 2, 3});
}

TEST_CASE("complex text format") {
  const auto k = three_cells();
  std::stringstream ss;
  write_complex(ss, k);
  const auto back = read_complex(ss);
  REQUIRE(back.size() == k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    CHECK(back.cell(i) == k.cell(i));
    CHECK(std::vector<Grade>(back.grades(i).begin(), back.grades(i).end()) ==
          std::vector<Grade>(k.grades(i).begin(), k.grades(i).end()));
  }

  std::istringstream multi("EULERCPLX 1\ndim 0 faces h1 0 h2 5 h1 5 h2 0\n");
  CHECK(read_complex(multi).grades(0).size() == 2);

  std::istringstream no_header("dim 0 faces h1 0 h2 0\n");
  CHECK_THROWS_AS(read_complex(no_header), FormatError);
  std::istringstream bad_line("EULERCPLX 1\ndim 0 faces h1 0\n");
  CHECK_THROWS_AS(read_complex(bad_line), FormatError);
}
