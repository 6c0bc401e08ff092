#include <doctest.h>

#include <array>
#include <filesystem>
#include <fstream>

#include "eulersurf/change_table.hpp"
#include "eulersurf/error.hpp"
#include "eulersurf/rng.hpp"
#include "support/oracles.hpp"

using namespace eulersurf;

TEST_CASE("neighbourhood index reads the first neighbour as the high bit") {
  const std::array<bool, 8> none{}, all{true, true, true, true, true, true, true, true};
  const std::array<bool, 8> corners{true, false, true, false, false, true, false, true};
  CHECK(neighborhood_index(none) == 0);
  CHECK(neighborhood_index(corners) == 165);
  CHECK(neighborhood_index(all) == 255);
  const std::array<bool, 26> top_corner{true};
  CHECK(neighborhood_index(top_corner) == (1u << 25));
  const std::array<bool, 5> wrong{};
  CHECK_THROWS_AS(neighborhood_index(wrong), ParameterError);
}

TEST_CASE("2D table matches explicit local complexes") {
  const auto table = precompute_change_table(2);
  REQUIRE(table.size() == 256);
  for (std::uint32_t mask = 0; mask < 256; ++mask) CHECK(table[mask] == oracle::local_change(2, mask));
  CHECK(table[0] == 1);
  CHECK(table[165] == -3);
  CHECK(table[255] == 1);
}

TEST_CASE("3D local changes match explicit local complexes") {
  const LocalChange direct(3);
  CHECK(direct(0) == 1);
  CHECK(direct((1u << 26) - 1) == -1);  // only the open cube itself is new
  CHECK(oracle::local_change(3, (1u << 26) - 1) == -1);
  for (std::uint64_t i = 0; i < 3000; ++i) {
    Stream rng(42, i);
    const auto mask = static_cast<std::uint32_t>(rng() & ((1u << 26) - 1));
    CHECK(direct(mask) == oracle::local_change(3, mask));
  }
}

TEST_CASE("unsupported dimensions are rejected") {
  CHECK_THROWS_AS(precompute_change_table(1), ParameterError);
  CHECK_THROWS_AS(precompute_change_table(4), ParameterError);
  CHECK_THROWS_AS(LocalChange(4), ParameterError);
}

TEST_CASE("table cache round trip and stale files") {
  const auto dir = std::filesystem::temp_directory_path() / "eulersurf_change_table_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "table2.bin";
  const auto table = precompute_change_table(2);
  table.save(path);
  const auto back = ChangeTable::load(path);
  CHECK(back.dim() == 2);
  CHECK(std::equal(back.entries().begin(), back.entries().end(), table.entries().begin(), table.entries().end()));

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
  }
  CHECK_THROWS_AS(ChangeTable::load(path), FormatError);
  CHECK_THROWS_AS(ChangeTable::load(dir / "missing.bin"), FormatError);

  // A corrupt cache is rebuilt and rewritten.
  const auto rebuilt = load_or_build_change_table(2, path);
  CHECK(rebuilt[165] == -3);
  CHECK(ChangeTable::load(path)[165] == -3);
  std::filesystem::remove_all(dir);
}
