#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "eulersurf/cli.hpp"
#include "eulersurf/io.hpp"
#include "eulersurf/manifest.hpp"

using namespace eulersurf;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "eulersurf");
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  const fs::path d = fs::path(EULERSURF_TEST_TMP);
  fs::create_directories(d);
  return d / name;
}

}  // namespace

TEST_CASE("oracle run on a generated pair") {
  const auto a = tmp("a.pgm").string(), b = tmp("b.pgm").string();
  REQUIRE(run({"gen", "pair", "--p", "0.5", "--n", "12", "--levels", "16", "--seed", "4", "--out", a, b}).code == 0);
  CHECK(fs::exists(manifest_path_for(a)));

  const auto r = run({"ecs", "--image1", a, "--image2", b, "--oracle"});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("0 mismatches") != std::string::npos);
  CHECK(r.out.rfind("# eulersurf surface 1", 0) == 0);

  std::istringstream csv(r.out);
  const auto s = read_surface_csv(csv);
  CHECK(s.rows() == 16);
  CHECK(s.at(15, 15) == 1);

  // Thread count must not change the bytes.
  CHECK(run({"--threads", "3", "ecs", "--image1", a, "--image2", b}).out == r.out);
}

TEST_CASE("exit codes") {
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"expected", "--p", "1.5"}).code == kExitUsage);
  CHECK(run({"ecc", "--image", "x.pgm", "--no-such-flag"}).code == kExitUsage);
  CHECK(run({"ecc", "--image", tmp("does-not-exist.pgm").string()}).code == kExitData);
  CHECK(run({"gen", "hawkes", "--alpha", "1.2"}).code == kExitUsage);

  const auto bad = tmp("bad.pgm");
  write_file(bad, "P2\n2 2\n255\n0 0\n");
  CHECK(run({"ecc", "--image", bad.string()}).code == kExitData);
}

TEST_CASE("manifest replay reproduces the artifact") {
  const auto pts = tmp("hawkes.csv"), out = tmp("hawkes_surface.csv");
  REQUIRE(run({"gen", "hawkes", "--seed", "9", "-o", pts.string()}).code == 0);
  REQUIRE(run({"ecs-points", "--points", pts.string(), "--h1", "alpha", "--h2", "knn:k=3", "--grid",
               "uniform:20", "-o", out.string()})
              .code == 0);
  const auto first = read_file(out);
  const auto argv = manifest_argv(read_file(manifest_path_for(out)));
  fs::remove(out);
  std::ostringstream o, e;
  REQUIRE(cli_dispatch(argv, o, e) == 0);
  CHECK(read_file(out) == first);
}

TEST_CASE("expected surface and featurize") {
  const auto r = run({"expected", "--n1", "4", "--n2", "4", "--p", "0.3", "--levels", "8"});
  CHECK(r.code == 0);
  CHECK(r.out.find("h1\\h2") != std::string::npos);

  const auto img = tmp("f.pgm");
  REQUIRE(run({"gen", "pair", "--p", "0.2", "--n", "10", "--levels", "12", "--out", img.string(),
               tmp("f2.pgm").string()})
              .code == 0);
  const auto surf = tmp("f.csv"), curve = tmp("fc.csv");
  REQUIRE(run({"ecs", "--image1", img.string(), "--image2", tmp("f2.pgm").string(), "-o", surf.string()}).code == 0);
  REQUIRE(run({"ecc", "--image", img.string(), "-o", curve.string()}).code == 0);

  const auto f = run({"featurize", surf.string(), surf.string(), "--stride", "6"});
  CHECK(f.code == 0);
  std::istringstream rows(f.out);
  const auto features = read_features_csv(rows);
  REQUIRE(features.size() == 2);
  CHECK(features[0].size() == 4);  // thresholds 0 and 6 on each axis

  const auto z = tmp("z.json");
  CHECK(run({"featurize", curve.string(), "--stride", "6", "--fit", z.string()}).code == 0);
  const auto applied = run({"featurize", curve.string(), "--stride", "6", "--normalize", z.string()});
  CHECK(applied.code == 0);
  std::istringstream zr(applied.out);
  const auto normalized = read_features_csv(zr);
  REQUIRE(normalized.size() == 1);
  for (double v : normalized[0]) CHECK(v == 0.0);  // one sample: every sd is 0
  CHECK(run({"featurize", curve.string(), "--stride", "13"}).code == kExitUsage);
}

TEST_CASE("terrain over two ensembles") {
  const auto dir_a = tmp("ens_a"), dir_b = tmp("ens_b");
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);
  for (int i = 0; i < 3; ++i) {
    const auto a1 = tmp("ta.pgm").string(), a2 = tmp("tb.pgm").string();
    REQUIRE(run({"gen", "pair", "--p", "0.9", "--n", "8", "--levels", "8", "--seed", std::to_string(i), "--out", a1,
                 a2})
                .code == 0);
    REQUIRE(run({"ecs", "--image1", a1, "--image2", a2, "-o", (dir_a / ("s" + std::to_string(i) + ".csv")).string()})
                .code == 0);
    REQUIRE(run({"gen", "pair", "--p", "0.0", "--n", "8", "--levels", "8", "--seed", std::to_string(i), "--out", a1,
                 a2})
                .code == 0);
    REQUIRE(run({"ecs", "--image1", a1, "--image2", a2, "-o", (dir_b / ("s" + std::to_string(i) + ".csv")).string()})
                .code == 0);
  }
  const auto r = run({"terrain", "--a", dir_a.string(), "--b", dir_b.string(), "--normalized", "--region", "0,3,0,3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# kind: normalized") != std::string::npos);
  CHECK(r.err.find("region: cells=") != std::string::npos);
  CHECK(run({"terrain", "--a", dir_a.string(), "--b", dir_b.string(), "--region", "0,9,0,0"}).code == kExitUsage);
}

TEST_CASE("oracle-check and bench") {
  const auto r = run({"oracle-check", "--kind", "all", "--count", "3", "--n", "5", "--levels", "5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("cubical2d: 3 instances") != std::string::npos);
  CHECK(r.out.find(" 0 mismatches") != std::string::npos);

  const auto b = run({"bench", "--n", "12", "--levels", "8", "--repeat", "1"});
  CHECK(b.code == 0);
  CHECK(b.out.find("identical yes") != std::string::npos);
}
