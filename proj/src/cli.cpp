#include "eulersurf/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "eulersurf/cubical.hpp"
#include "eulersurf/delaunay.hpp"
#include "eulersurf/derived.hpp"
#include "eulersurf/error.hpp"
#include "eulersurf/heatmap.hpp"
#include "eulersurf/io.hpp"
#include "eulersurf/manifest.hpp"
#include "eulersurf/rng.hpp"
#include "eulersurf/simplicial.hpp"
#include "eulersurf/stats.hpp"
#include "eulersurf/synth.hpp"
#include "text_util.hpp"

namespace eulersurf {

namespace fs = std::filesystem;

namespace {

using detail::format_double;
using detail::parse_number;
using detail::split;

// ------------------------------------------------------------ shared pieces

struct Context {
  std::vector<std::string> argv;
  std::ostream& out;
  std::ostream& err;
  int threads = 1;
};

/// Writes `text` to the output file (plus its manifest) or to stdout.
void emit(Context& ctx, const std::string& text, const std::string& output, RunManifest* manifest) {
  if (output.empty() || output == "-") {
    ctx.out << text;
    return;
  }
  write_file(output, text);
  if (manifest) {
    manifest->add_output(output);
    manifest->write_beside(output);
  }
}

void emit_heatmap(const RealMatrix& values, const std::vector<std::uint8_t>* sentinel, const std::string& output,
                  RunManifest& manifest) {
  if (output.empty()) throw ParameterError("--out pgm-heatmap needs --output PATH");
  const auto hm = render_heatmap(values, sentinel);
  save_pgm(output, hm.image);
  manifest.extra()["heatmap"] = {{"lo", hm.lo}, {"hi", hm.hi}, {"sentinels", hm.has_sentinels}};
  manifest.add_output(output);
  manifest.write_beside(output);
}

std::size_t count_mismatches(const EulerSurface& a, const EulerSurface& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::max(a.data().size(), b.data().size());
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) n += a.data()[i] != b.data()[i];
  return n;
}

std::size_t count_mismatches(const EulerCurve& a, const EulerCurve& b) {
  if (a.chi.size() != b.chi.size()) return std::max(a.chi.size(), b.chi.size());
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.chi.size(); ++i) n += a.chi[i] != b.chi[i];
  return n;
}

int oracle_report(Context& ctx, std::size_t mismatches, std::size_t total) {
  ctx.err << "oracle: " << mismatches << " mismatches in " << total << " entries\n";
  return mismatches == 0 ? kExitOk : kExitInvariant;
}

ChangeMode parse_mode(const std::string& s) { return s == "eager" ? ChangeMode::kEager : ChangeMode::kDirect; }

// Uniform random planar points, one stream per point.
PointCloud uniform_points(std::size_t n, std::uint64_t seed) {
  std::vector<double> xy(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Stream rng(seed, i);
    xy[2 * i] = rng.uniform();
    xy[2 * i + 1] = rng.uniform();
  }
  return PointCloud(2, std::move(xy));
}

// ------------------------------------------------------------ point filters

struct PointComplex {
  SimplicialComplex complex;
  std::vector<double> rips_values;  // only for Vietoris-Rips complexes
};

struct PointOptions {
  std::string points;
  std::string complex;
  double rips_radius = 0.0;
  int rips_dim = 2;
  bool jitter = false;
  std::uint64_t jitter_seed = 0;
  std::string grid = "unique";
};

PointComplex build_point_complex(const PointCloud& points, const PointOptions& o) {
  if (o.rips_radius > 0.0) {
    auto fc = vietoris_rips(points, o.rips_dim, o.rips_radius);
    return {std::move(fc.complex), std::move(fc.values)};
  }
  return {delaunay_2d(points, DelaunayOptions{o.jitter, o.jitter_seed}), {}};
}

/// alpha | knn[:k=K] | height:d1,d2[,d3] | rips
std::vector<double> filter_values(const std::string& spec, const PointCloud& points, const PointComplex& pc,
                                  nlohmann::json& record) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "alpha") {
    if (!pc.rips_values.empty()) throw ParameterError("alpha values need a Delaunay complex, not --rips");
    record = {{"filter", "alpha"}};
    return alpha_filtration(points, pc.complex);
  }
  if (name == "knn") {
    int k = 3;
    std::string_view v = arg;
    if (v.rfind("k=", 0) == 0) v.remove_prefix(2);
    if (!v.empty() && !parse_number(v, k)) throw ParameterError("bad knn parameter '" + arg + "'");
    record = {{"filter", "knn"}, {"k", k}};
    return knn_density_filter(points, pc.complex, k);
  }
  if (name == "height") {
    std::vector<double> dir;
    for (const auto f : split(arg, ',')) {
      double x = 0.0;
      if (!parse_number(f, x)) throw ParameterError("bad height direction '" + arg + "'");
      dir.push_back(x);
    }
    double norm = 0.0;
    for (const double x : dir) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw ParameterError("height direction must be non-zero");
    for (auto& x : dir) x /= norm;
    record = {{"filter", "height"}, {"direction", dir}};
    return height_filter(points, pc.complex, dir);
  }
  if (name == "rips") {
    if (pc.rips_values.empty()) throw ParameterError("filter 'rips' needs --rips RADIUS");
    record = {{"filter", "rips"}};
    return pc.rips_values;
  }
  throw ParameterError("unknown filter '" + spec + "' (expected alpha, knn:k=K, height:dx,dy or rips)");
}

ThresholdGrid make_grid(const std::string& spec, std::span<const double> values) {
  if (spec == "unique") return unique_grid(values);
  if (spec.rfind("uniform:", 0) == 0) {
    std::size_t m = 0;
    if (!parse_number(std::string_view(spec).substr(8), m) || m == 0) throw ParameterError("bad grid '" + spec + "'");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) return ThresholdGrid({*lo});
    return uniform_grid(*lo, *hi, m);
  }
  throw ParameterError("grid must be 'unique' or 'uniform:M', got '" + spec + "'");
}

// ------------------------------------------------------------ terrain input

std::vector<fs::path> surface_files(const std::vector<std::string>& paths) {
  std::vector<fs::path> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(p);
    }
  }
  if (files.empty()) throw ValidationError("no surface CSV files found");
  return files;
}

SurfaceEnsemble load_ensemble(const std::vector<std::string>& paths, RunManifest& manifest) {
  std::vector<EulerSurface> surfaces;
  for (const auto& f : surface_files(paths)) {
    manifest.add_input(f);
    surfaces.push_back(load_surface_csv(f));
  }
  return SurfaceEnsemble(std::move(surfaces));
}

// ------------------------------------------------------------ timing

template <typename Fn>
double best_seconds(int repeat, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, repeat); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

int run(Context& ctx) {
  CLI::App app{"Euler characteristic curves, surfaces and terrains for images and point clouds", "eulersurf"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", ctx.threads, "Worker threads for engine calls (0 = all cores)")
      ->envname("EULERSURF_THREADS")
      ->check(CLI::NonNegativeNumber);

  std::function<int()> action;
  auto bind = [&action](CLI::App* sub, std::function<int()> fn) { sub->callback([&action, fn] { action = fn; }); };
  const std::vector<std::string> formats{"csv", "pgm-heatmap"};
  const std::vector<std::string> modes{"direct", "eager"};

  // ---- ecc
  struct {
    std::string image, output, out = "csv", mode = "direct", table_cache;
    int levels = 0;
    bool oracle = false;
  } ecc;
  auto* ecc_cmd = app.add_subcommand("ecc", "Euler characteristic curve of a 2D or 3D image");
  ecc_cmd->add_option("--image", ecc.image, "PGM or EUVOL image")->required();
  ecc_cmd->add_option("--levels", ecc.levels, "Intensity levels L (default: maxval + 1)")->check(CLI::PositiveNumber);
  ecc_cmd->add_option("--out", ecc.out, "Output format")->check(CLI::IsMember({"csv"}));
  ecc_cmd->add_option("-o,--output", ecc.output, "Output path (default stdout)");
  ecc_cmd->add_flag("--oracle", ecc.oracle, "Also run the brute-force recount and diff");
  ecc_cmd->add_option("--mode", ecc.mode, "3D change evaluation")->check(CLI::IsMember(modes));
  ecc_cmd->add_option("--table-cache", ecc.table_cache, "Cache file for the eager 3D table");
  bind(ecc_cmd, [&] {
    RunManifest manifest(ctx.argv);
    manifest.set_command("ecc");
    manifest.add_input(ecc.image);
    const auto image = load_image(ecc.image, ecc.levels);
    manifest.params() = {{"levels", image.levels()}, {"mode", ecc.mode}};
    ScanOptions opt{ctx.threads, parse_mode(ecc.mode), nullptr, ecc.table_cache};
    const auto curve = ecc_image(image, image.levels(), opt);
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    emit(ctx, csv.str(), ecc.output, &manifest);
    if (!ecc.oracle) return int{kExitOk};
    const auto brute = brute_force_curve(build_cubical_complex(image), curve.grid);
    return oracle_report(ctx, count_mismatches(curve, brute), curve.chi.size());
  });

  // ---- ecs
  struct {
    std::string image1, image2, derived, output, out = "csv", mode = "direct", table_cache;
    int levels = 0;
    bool oracle = false;
  } ecs;
  auto* ecs_cmd = app.add_subcommand("ecs", "Euler characteristic surface of an image pair");
  ecs_cmd->add_option("--image1", ecs.image1, "First image (PGM or EUVOL)")->required();
  auto* second = ecs_cmd->add_option("--image2", ecs.image2, "Second image");
  ecs_cmd->add_option("--derived", ecs.derived, "Build the second image: laplacian|gradient|complement|radial")
      ->excludes(second);
  ecs_cmd->add_option("--levels", ecs.levels, "Intensity levels L (default: first image's maxval + 1)")
      ->check(CLI::PositiveNumber);
  ecs_cmd->add_option("--out", ecs.out, "Output format")->check(CLI::IsMember(formats));
  ecs_cmd->add_option("-o,--output", ecs.output, "Output path (default stdout)");
  ecs_cmd->add_flag("--oracle", ecs.oracle, "Also run the brute-force recount and diff");
  ecs_cmd->add_option("--mode", ecs.mode, "3D change evaluation")->check(CLI::IsMember(modes));
  ecs_cmd->add_option("--table-cache", ecs.table_cache, "Cache file for the eager 3D table");
  bind(ecs_cmd, [&] {
    if (ecs.image2.empty() == ecs.derived.empty()) throw ParameterError("give exactly one of --image2 and --derived");
    RunManifest manifest(ctx.argv);
    manifest.set_command("ecs");
    manifest.add_input(ecs.image1);
    const auto image1 = load_image(ecs.image1, ecs.levels);
    std::optional<GrayImage> image2;
    if (!ecs.derived.empty()) {
      image2 = derived_image(image1, parse_derived_kind(ecs.derived));
    } else {
      manifest.add_input(ecs.image2);
      image2 = load_image(ecs.image2, image1.levels());
    }
    const int levels = image1.levels();
    manifest.params() = {{"levels", levels}, {"derived", ecs.derived}, {"mode", ecs.mode}, {"format", ecs.out}};
    ScanOptions opt{ctx.threads, parse_mode(ecs.mode), nullptr, ecs.table_cache};
    const auto surface = ecs_image_pair(image1, *image2, levels, opt);
    if (ecs.out == "pgm-heatmap") {
      emit_heatmap(RealMatrix::from(surface), nullptr, ecs.output, manifest);
    } else {
      std::ostringstream csv;
      write_surface_csv(csv, surface);
      emit(ctx, csv.str(), ecs.output, &manifest);
    }
    if (!ecs.oracle) return int{kExitOk};
    const auto brute =
        brute_force_surface(build_cubical_complex(image1, *image2), surface.grid1(), surface.grid2());
    return oracle_report(ctx, count_mismatches(surface, brute), surface.data().size());
  });

  // ---- ecc-points / ecs-points
  PointOptions pts;
  auto add_point_options = [&pts](CLI::App* sub) {
    auto* p = sub->add_option("--points", pts.points, "Point CSV (x,y[,z])");
    sub->add_option("--complex", pts.complex, "Bifiltered complex in EULERCPLX format")->excludes(p);
    sub->add_option("--rips", pts.rips_radius, "Use a Vietoris-Rips complex up to this radius")
        ->check(CLI::PositiveNumber);
    sub->add_option("--rips-dim", pts.rips_dim, "Vietoris-Rips maximal simplex dimension")->check(CLI::Range(0, 3));
    sub->add_flag("--jitter", pts.jitter, "Perturb points slightly before Delaunay");
    sub->add_option("--jitter-seed", pts.jitter_seed, "Seed for --jitter");
    sub->add_option("--grid", pts.grid, "Threshold grid: unique | uniform:M");
  };

  struct {
    std::string h = "alpha", output;
    int param = 1;
  } eccp;
  auto* eccp_cmd = app.add_subcommand("ecc-points", "Euler characteristic curve of a filtered point complex");
  eccp_cmd->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  add_point_options(eccp_cmd);
  eccp_cmd->add_option("--h", eccp.h, "Filter: alpha | knn:k=K | height:dx,dy | rips");
  eccp_cmd->add_option("--param", eccp.param, "Parameter of a --complex input (1 or 2)")->check(CLI::Range(1, 2));
  eccp_cmd->add_option("-o,--output", eccp.output, "Output path (default stdout)");
  bind(eccp_cmd, [&] {
    RunManifest manifest(ctx.argv);
    manifest.set_command("ecc-points");
    EulerCurve curve{ThresholdGrid({0.0}), {}};
    if (!pts.complex.empty()) {
      manifest.add_input(pts.complex);
      std::istringstream in(read_file(pts.complex));
      const auto complex = read_complex(in);
      const auto which = eccp.param == 1 ? Parameter::kFirst : Parameter::kSecond;
      std::vector<int> dims;
      std::vector<double> values;
      for (std::size_t i = 0; i < complex.size(); ++i) {
        dims.push_back(complex.cell(i).dim);
        values.push_back(complex.value(i, which));
      }
      if (values.empty()) throw ValidationError("complex has no cells");
      curve = ecc_points(dims, values, make_grid(pts.grid, values));
    } else {
      if (pts.points.empty()) throw ParameterError("give --points or --complex");
      manifest.add_input(pts.points);
      const auto cloud = load_points_csv(pts.points);
      const auto pc = build_point_complex(cloud, pts);
      nlohmann::json rec;
      const auto values = filter_values(eccp.h, cloud, pc, rec);
      manifest.params() = {{"h", rec}, {"grid", pts.grid}};
      std::vector<int> dims;
      for (std::size_t i = 0; i < pc.complex.size(); ++i) dims.push_back(pc.complex.dim(i));
      curve = ecc_points(dims, values, make_grid(pts.grid, values));
    }
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    emit(ctx, csv.str(), eccp.output, &manifest);
    return int{kExitOk};
  });

  struct {
    std::string h1 = "alpha", h2 = "knn:k=3", output, out = "csv", grid1, grid2, export_path;
    bool oracle = false;
  } ecsp;
  auto* ecsp_cmd = app.add_subcommand("ecs-points", "Euler characteristic surface of a bifiltered point complex");
  add_point_options(ecsp_cmd);
  ecsp_cmd->add_option("--h1", ecsp.h1, "First filter");
  ecsp_cmd->add_option("--h2", ecsp.h2, "Second filter");
  ecsp_cmd->add_option("--grid1", ecsp.grid1, "Grid for h1 (overrides --grid)");
  ecsp_cmd->add_option("--grid2", ecsp.grid2, "Grid for h2 (overrides --grid)");
  ecsp_cmd->add_option("--out", ecsp.out, "Output format")->check(CLI::IsMember(formats));
  ecsp_cmd->add_option("-o,--output", ecsp.output, "Output path (default stdout)");
  ecsp_cmd->add_option("--export", ecsp.export_path, "Also write the bifiltered complex (EULERCPLX)");
  ecsp_cmd->add_flag("--oracle", ecsp.oracle, "Also run the brute-force recount and diff");
  bind(ecsp_cmd, [&] {
    RunManifest manifest(ctx.argv);
    manifest.set_command("ecs-points");
    BifilteredComplex complex;
    std::vector<double> h1, h2;
    if (!pts.complex.empty()) {
      manifest.add_input(pts.complex);
      std::istringstream in(read_file(pts.complex));
      complex = read_complex(in);
      for (std::size_t i = 0; i < complex.size(); ++i) {
        h1.push_back(complex.value(i, Parameter::kFirst));
        h2.push_back(complex.value(i, Parameter::kSecond));
      }
    } else {
      if (pts.points.empty()) throw ParameterError("give --points or --complex");
      manifest.add_input(pts.points);
      const auto cloud = load_points_csv(pts.points);
      auto pc = build_point_complex(cloud, pts);
      nlohmann::json r1, r2;
      h1 = filter_values(ecsp.h1, cloud, pc, r1);
      h2 = filter_values(ecsp.h2, cloud, pc, r2);
      manifest.params() = {{"h1", r1}, {"h2", r2}};
      complex = make_bifiltration(std::move(pc.complex), h1, h2).to_complex();
    }
    if (h1.empty()) throw ValidationError("complex has no cells");
    const auto g1 = make_grid(ecsp.grid1.empty() ? pts.grid : ecsp.grid1, h1);
    const auto g2 = make_grid(ecsp.grid2.empty() ? pts.grid : ecsp.grid2, h2);
    manifest.params()["grid1"] = ecsp.grid1.empty() ? pts.grid : ecsp.grid1;
    manifest.params()["grid2"] = ecsp.grid2.empty() ? pts.grid : ecsp.grid2;
    const auto surface = ecs_points(complex, g1, g2, ctx.threads);
    if (!ecsp.export_path.empty()) {
      std::ostringstream cx;
      write_complex(cx, complex);
      write_file(ecsp.export_path, cx.str());
    }
    if (ecsp.out == "pgm-heatmap") {
      emit_heatmap(RealMatrix::from(surface), nullptr, ecsp.output, manifest);
    } else {
      std::ostringstream csv;
      write_surface_csv(csv, surface);
      emit(ctx, csv.str(), ecsp.output, &manifest);
    }
    if (!ecsp.oracle) return int{kExitOk};
    const auto brute = brute_force_surface(complex, g1, g2);
    return oracle_report(ctx, count_mismatches(surface, brute), surface.data().size());
  });

  // ---- terrain
  struct {
    std::vector<std::string> a, b;
    bool normalized = false, abs = false;
    std::string output, out = "csv", region;
    std::optional<double> mask;
  } ter;
  auto* ter_cmd = app.add_subcommand("terrain", "Difference terrain of two ensembles of surfaces");
  ter_cmd->add_option("--a", ter.a, "Surface CSVs or directories of them (ensemble A)")->required();
  ter_cmd->add_option("--b", ter.b, "Surface CSVs or directories of them (ensemble B)")->required();
  ter_cmd->add_flag("--normalized", ter.normalized, "Divide by the sum of pointwise standard deviations");
  ter_cmd->add_flag("--abs", ter.abs, "Report absolute values");
  ter_cmd->add_option("--region", ter.region, "Summarize the index rectangle s0,s1,t0,t1");
  ter_cmd->add_option("--mask", ter.mask, "Summarize cells with |value| >= C");
  ter_cmd->add_option("--out", ter.out, "Output format")->check(CLI::IsMember(formats));
  ter_cmd->add_option("-o,--output", ter.output, "Output path (default stdout)");
  bind(ter_cmd, [&] {
    RunManifest manifest(ctx.argv);
    manifest.set_command("terrain");
    const auto a = load_ensemble(ter.a, manifest);
    const auto b = load_ensemble(ter.b, manifest);
    auto t = ter.normalized ? normalized_terrain(a, b) : terrain(a, b);
    if (ter.abs) t = t.absolute();
    manifest.params() = {{"normalized", ter.normalized}, {"abs", ter.abs}, {"sd", "population"},
                         {"ensemble_a", a.size()},      {"ensemble_b", b.size()}};
    manifest.extra()["sentinels"] = t.sentinel_count();
    if (ter.out == "pgm-heatmap") {
      emit_heatmap(t.values, &t.sentinel, ter.output, manifest);
    } else {
      std::ostringstream csv;
      write_terrain_csv(csv, t);
      emit(ctx, csv.str(), ter.output, &manifest);
    }
    std::optional<Region> region;
    if (!ter.region.empty()) {
      const auto f = split(ter.region, ',');
      std::size_t v[4];
      if (f.size() != 4 || !std::all_of(f.begin(), f.end(), [&, i = 0](std::string_view x) mutable {
            return parse_number(x, v[i++]);
          }))
        throw ParameterError("--region expects s0,s1,t0,t1");
      region = RectRegion{v[0], v[1], v[2], v[3]};
    } else if (ter.mask) {
      region = MaskRegion{*ter.mask};
    }
    if (region) {
      const auto r = region_aggregate(t, *region);
      ctx.err << "region: cells=" << r.count << " mean=" << format_double(r.mean) << " max=" << format_double(r.max)
              << " at (" << format_double(t.grid1[r.argmax_s]) << ", " << format_double(t.grid2[r.argmax_t])
              << ")\n";
    }
    return int{kExitOk};
  });

  // ---- expected
  struct {
    std::int64_t n1 = 32, n2 = 32;
    double p = 0.0;
    int levels = 256;
    bool marginal = false;
    std::string output, out = "csv";
  } ex;
  auto* ex_cmd = app.add_subcommand("expected", "Expected surface of correlated uniform random image pairs");
  ex_cmd->add_option("--n1", ex.n1, "Rows")->check(CLI::PositiveNumber);
  ex_cmd->add_option("--n2", ex.n2, "Columns")->check(CLI::PositiveNumber);
  ex_cmd->add_option("--p", ex.p, "Probability that a pixel pair shares its value")->required();
  ex_cmd->add_option("--levels", ex.levels, "Intensity levels L")->check(CLI::PositiveNumber);
  ex_cmd->add_flag("--marginal", ex.marginal, "Emit the expected one-parameter curve instead");
  ex_cmd->add_option("--out", ex.out, "Output format")->check(CLI::IsMember(formats));
  ex_cmd->add_option("-o,--output", ex.output, "Output path (default stdout)");
  bind(ex_cmd, [&] {
    RunManifest manifest(ctx.argv);
    manifest.set_command("expected");
    manifest.params() = {{"n1", ex.n1}, {"n2", ex.n2}, {"p", ex.p}, {"levels", ex.levels}};
    const auto surface = expected_random_pair_surface(ex.n1, ex.n2, ex.p, ex.levels);
    const auto grid = ThresholdGrid::integers(ex.levels);
    std::ostringstream csv;
    if (ex.marginal) {
      csv << "# eulersurf expected-curve " << kCsvFormatVersion << "\nthreshold,chi\n";
      for (std::size_t s = 0; s < grid.size(); ++s)
        csv << format_double(grid[s]) << ',' << format_double(surface.at(s, grid.size() - 1)) << '\n';
    } else if (ex.out == "pgm-heatmap") {
      emit_heatmap(surface, nullptr, ex.output, manifest);
      return int{kExitOk};
    } else {
      write_real_surface_csv(csv, grid, grid, surface, "expected-surface");
    }
    emit(ctx, csv.str(), ex.output, &manifest);
    return int{kExitOk};
  });

  // ---- featurize
  struct {
    std::vector<std::string> inputs;
    std::size_t stride = 6;
    std::string fit, normalize, output;
  } fe;
  auto* fe_cmd = app.add_subcommand("featurize", "Subsampled, optionally z-normalized feature vectors");
  fe_cmd->add_option("inputs", fe.inputs, "Curve or surface CSVs (one feature row each)")->required();
  fe_cmd->add_option("--stride", fe.stride, "Keep every stride-th threshold")->check(CLI::PositiveNumber);
  auto* fit_opt = fe_cmd->add_option("--fit", fe.fit, "Fit z-score parameters on the inputs, write them here, apply");
  fe_cmd->add_option("--normalize", fe.normalize, "Apply z-score parameters from this JSON file")->excludes(fit_opt);
  fe_cmd->add_option("-o,--output", fe.output, "Output path (default stdout)");
  bind(fe_cmd, [&] {
    RunManifest manifest(ctx.argv);
    manifest.set_command("featurize");
    manifest.params() = {{"stride", fe.stride}};
    std::vector<std::vector<double>> rows;
    for (const auto& path : fe.inputs) {
      manifest.add_input(path);
      const auto src = load_curve_or_surface(path);
      rows.push_back(src.curve ? featurize(*src.curve, fe.stride) : featurize(*src.surface, fe.stride));
    }
    std::optional<ZScore> z;
    if (!fe.fit.empty()) {
      z = fit_zscore(rows);
      write_file(fe.fit, zscore_to_json(*z));
    } else if (!fe.normalize.empty()) {
      manifest.add_input(fe.normalize);
      z = zscore_from_json(read_file(fe.normalize));
    }
    if (z)
      for (auto& r : rows) r = z->apply(r);
    std::ostringstream csv;
    write_features_csv(csv, rows);
    emit(ctx, csv.str(), fe.output, &manifest);
    return int{kExitOk};
  });

  // ---- gen
  auto* gen_cmd = app.add_subcommand("gen", "Seeded synthetic data");
  gen_cmd->require_subcommand(1);

  struct {
    double p = 0.0;
    std::size_t n = 32, n1 = 0, n2 = 0;
    int levels = 256;
    std::uint64_t seed = 0;
    std::vector<std::string> out{"pair_1.pgm", "pair_2.pgm"};
  } gp;
  auto* gp_cmd = gen_cmd->add_subcommand("pair", "Correlated uniform random image pair");
  gp_cmd->add_option("--p", gp.p, "Probability that a pixel pair shares its value")->required();
  gp_cmd->add_option("--n", gp.n, "Side length of a square image")->check(CLI::PositiveNumber);
  gp_cmd->add_option("--n1", gp.n1, "Rows (overrides --n)")->check(CLI::PositiveNumber);
  gp_cmd->add_option("--n2", gp.n2, "Columns (overrides --n)")->check(CLI::PositiveNumber);
  gp_cmd->add_option("--levels", gp.levels, "Intensity levels L")->check(CLI::Range(1, 65536));
  gp_cmd->add_option("--seed", gp.seed, "Random seed");
  gp_cmd->add_option("--out", gp.out, "Two output PGM paths")->expected(2);
  bind(gp_cmd, [&] {
    const std::size_t n1 = gp.n1 ? gp.n1 : gp.n, n2 = gp.n2 ? gp.n2 : gp.n;
    const auto [a, b] = gen_correlated_pair(n1, n2, gp.p, gp.levels, gp.seed);
    RunManifest manifest(ctx.argv);
    manifest.set_command("gen pair");
    manifest.add_seed("seed", gp.seed);
    manifest.params() = {{"p", gp.p}, {"n1", n1}, {"n2", n2}, {"levels", gp.levels}};
    save_pgm(gp.out[0], a);
    save_pgm(gp.out[1], b);
    manifest.add_output(gp.out[0]);
    manifest.add_output(gp.out[1]);
    manifest.write_beside(gp.out[0]);
    manifest.write_beside(gp.out[1]);
    return int{kExitOk};
  });

  struct {
    double theta = 1.0;
    std::size_t n = 16;
    int levels = 256;
    std::uint64_t seed = 0;
    std::vector<std::string> out{"copula_1.vol", "copula_2.vol"};
  } gc;
  auto* gc_cmd = gen_cmd->add_subcommand("copula3d", "Clayton-copula 3D volume pair");
  gc_cmd->add_option("--theta", gc.theta, "Clayton parameter (> 0)")->required();
  gc_cmd->add_option("--n", gc.n, "Side length")->check(CLI::PositiveNumber);
  gc_cmd->add_option("--levels", gc.levels, "Intensity levels L")->check(CLI::PositiveNumber);
  gc_cmd->add_option("--seed", gc.seed, "Random seed");
  gc_cmd->add_option("--out", gc.out, "Two output EUVOL paths")->expected(2);
  bind(gc_cmd, [&] {
    const auto [a, b] = gen_copula_images_3d(gc.n, gc.theta, gc.levels, gc.seed);
    RunManifest manifest(ctx.argv);
    manifest.set_command("gen copula3d");
    manifest.add_seed("seed", gc.seed);
    manifest.params() = {{"theta", gc.theta}, {"n", gc.n}, {"levels", gc.levels}};
    save_volume(gc.out[0], a);
    save_volume(gc.out[1], b);
    manifest.add_output(gc.out[0]);
    manifest.add_output(gc.out[1]);
    manifest.write_beside(gc.out[0]);
    manifest.write_beside(gc.out[1]);
    return int{kExitOk};
  });

  struct {
    double theta = 1.0, scale = 256.0;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string output;
  } gcl;
  auto* gcl_cmd = gen_cmd->add_subcommand("clayton", "Clayton-copula points in [0, scale)^2");
  gcl_cmd->add_option("--theta", gcl.theta, "Clayton parameter (> 0)")->required();
  gcl_cmd->add_option("--n", gcl.n, "Number of points");
  gcl_cmd->add_option("--scale", gcl.scale, "Scale of both marginals")->check(CLI::PositiveNumber);
  gcl_cmd->add_option("--seed", gcl.seed, "Random seed");
  gcl_cmd->add_option("-o,--output", gcl.output, "Output CSV (default stdout)");
  bind(gcl_cmd, [&] {
    const auto xy = gen_clayton_points(gcl.n, gcl.theta, gcl.scale, gcl.seed);
    RunManifest manifest(ctx.argv);
    manifest.set_command("gen clayton");
    manifest.add_seed("seed", gcl.seed);
    manifest.params() = {{"theta", gcl.theta}, {"n", gcl.n}, {"scale", gcl.scale}};
    std::ostringstream csv;
    csv << "x,y\n";
    for (std::size_t i = 0; i < gcl.n; ++i) csv << format_double(xy[2 * i]) << ',' << format_double(xy[2 * i + 1]) << '\n';
    emit(ctx, csv.str(), gcl.output, &manifest);
    return int{kExitOk};
  });

  struct {
    double lambda = 400.0;
    std::uint64_t seed = 0;
    std::string output;
  } gpo;
  auto* gpo_cmd = gen_cmd->add_subcommand("poisson", "Poisson point process on the unit square");
  gpo_cmd->add_option("--lambda", gpo.lambda, "Intensity");
  gpo_cmd->add_option("--seed", gpo.seed, "Random seed");
  gpo_cmd->add_option("-o,--output", gpo.output, "Output CSV (default stdout)");
  bind(gpo_cmd, [&] {
    const auto cloud = gen_poisson(gpo.lambda, gpo.seed);
    RunManifest manifest(ctx.argv);
    manifest.set_command("gen poisson");
    manifest.add_seed("seed", gpo.seed);
    manifest.params() = {{"lambda", gpo.lambda}};
    std::ostringstream csv;
    write_points_csv(csv, cloud);
    emit(ctx, csv.str(), gpo.output, &manifest);
    return int{kExitOk};
  });

  struct {
    double lambda = 280.0, alpha = 0.3, sigma = 0.02;
    std::uint64_t seed = 0;
    bool clip = false, parents = false;
    std::string output;
  } gh;
  auto* gh_cmd = gen_cmd->add_subcommand("hawkes", "Hawkes cluster process");
  gh_cmd->add_option("--lambda", gh.lambda, "Cluster-centre intensity");
  gh_cmd->add_option("--alpha", gh.alpha, "Branching ratio in [0, 1)");
  gh_cmd->add_option("--sigma", gh.sigma, "Offspring displacement sd per axis");
  gh_cmd->add_option("--seed", gh.seed, "Random seed");
  gh_cmd->add_flag("--clip", gh.clip, "Drop points outside the unit square");
  gh_cmd->add_flag("--parents", gh.parents, "Add a parent-index column");
  gh_cmd->add_option("-o,--output", gh.output, "Output CSV (default stdout)");
  bind(gh_cmd, [&] {
    const auto sample = gen_hawkes_cluster(gh.lambda, gh.alpha, gh.sigma, gh.seed, gh.clip);
    RunManifest manifest(ctx.argv);
    manifest.set_command("gen hawkes");
    manifest.add_seed("seed", gh.seed);
    manifest.params() = {{"lambda", gh.lambda}, {"alpha", gh.alpha}, {"sigma", gh.sigma}, {"clip", gh.clip}};
    std::ostringstream csv;
    write_points_csv(csv, sample.points, gh.parents ? &sample.parent : nullptr);
    emit(ctx, csv.str(), gh.output, &manifest);
    return int{kExitOk};
  });

  // ---- oracle-check
  struct {
    std::string kind = "all", mode = "direct";
    int count = 20, levels = 8;
    std::size_t n = 8;
    std::uint64_t seed = 1;
  } oc;
  auto* oc_cmd = app.add_subcommand("oracle-check", "Compare fast algorithms with brute force on random inputs");
  oc_cmd->add_option("--kind", oc.kind, "cubical2d | cubical3d | points | all")
      ->check(CLI::IsMember({"cubical2d", "cubical3d", "points", "all"}));
  oc_cmd->add_option("--count", oc.count, "Instances per kind")->check(CLI::PositiveNumber);
  oc_cmd->add_option("--n", oc.n, "Maximal image side")->check(CLI::PositiveNumber);
  oc_cmd->add_option("--levels", oc.levels, "Intensity levels")->check(CLI::PositiveNumber);
  oc_cmd->add_option("--seed", oc.seed, "Random seed");
  oc_cmd->add_option("--mode", oc.mode, "3D change evaluation")->check(CLI::IsMember(modes));
  bind(oc_cmd, [&] {
    std::size_t total_bad = 0;
    auto run_kind = [&](const std::string& kind) {
      std::size_t bad = 0, entries = 0;
      for (int i = 0; i < oc.count; ++i) {
        Stream rng(oc.seed, static_cast<std::uint64_t>(i));
        const std::uint64_t seed = rng();
        const double p = rng.uniform();
        if (kind == "points") {
          const auto cloud = uniform_points(30 + rng() % 51, seed);
          const auto cx = delaunay_2d(cloud);
          const auto bif = make_bifiltration(cx, alpha_filtration(cloud, cx), knn_density_filter(cloud, cx, 3));
          const auto g1 = unique_grid(bif.h1), g2 = unique_grid(bif.h2);
          const auto fast = ecs_points(bif, g1, g2, ctx.threads);
          bad += count_mismatches(fast, brute_force_surface(bif.to_complex(), g1, g2));
          entries += fast.data().size();
          continue;
        }
        const std::size_t n1 = 1 + rng() % oc.n, n2 = 1 + rng() % oc.n;
        GrayImage a = GrayImage::filled({1, 1}, 0), b = a;
        if (kind == "cubical3d") {
          std::tie(a, b) = gen_copula_images_3d(std::max<std::size_t>(1, oc.n), 0.5 + 4.0 * p, oc.levels, seed);
        } else {
          std::tie(a, b) = gen_correlated_pair(n1, n2, p, oc.levels, seed);
        }
        ScanOptions opt{ctx.threads, parse_mode(oc.mode), nullptr, {}};
        const auto fast = ecs_image_pair(a, b, oc.levels, opt);
        bad += count_mismatches(fast, brute_force_surface(build_cubical_complex(a, b), fast.grid1(), fast.grid2()));
        entries += fast.data().size();
      }
      ctx.out << kind << ": " << oc.count << " instances, " << entries << " entries, " << bad << " mismatches\n";
      total_bad += bad;
    };
    if (oc.kind == "all") {
      for (const char* k : {"cubical2d", "cubical3d", "points"}) run_kind(k);
    } else {
      run_kind(oc.kind);
    }
    return total_bad == 0 ? int{kExitOk} : int{kExitInvariant};
  });

  // ---- bench
  struct {
    std::string kind = "image";
    std::size_t n = 64;
    int levels = 64, repeat = 3;
    std::uint64_t seed = 1;
  } be;
  auto* be_cmd = app.add_subcommand("bench", "Wall time of the fast algorithms against the naive recount");
  be_cmd->add_option("--kind", be.kind, "image | points")->check(CLI::IsMember({"image", "points"}));
  be_cmd->add_option("--n", be.n, "Image side, or number of points")->check(CLI::PositiveNumber);
  be_cmd->add_option("--levels", be.levels, "Intensity levels")->check(CLI::PositiveNumber);
  be_cmd->add_option("--repeat", be.repeat, "Best-of repetitions")->check(CLI::PositiveNumber);
  be_cmd->add_option("--seed", be.seed, "Random seed");
  bind(be_cmd, [&] {
    double fast_s = 0.0, naive_s = 0.0;
    bool identical = false;
    if (be.kind == "image") {
      const auto [a, b] = gen_correlated_pair(be.n, be.n, 0.5, be.levels, be.seed);
      std::optional<EulerSurface> fast, naive;
      ScanOptions opt{ctx.threads, ChangeMode::kDirect, nullptr, {}};
      fast_s = best_seconds(be.repeat, [&] { fast = ecs_image_pair(a, b, be.levels, opt); });
      naive_s = best_seconds(be.repeat, [&] {
        naive = brute_force_surface(build_cubical_complex(a, b), fast->grid1(), fast->grid2());
      });
      identical = *fast == *naive;
    } else {
      const auto cloud = uniform_points(be.n, be.seed);
      const auto cx = delaunay_2d(cloud);
      const auto bif = make_bifiltration(cx, alpha_filtration(cloud, cx), knn_density_filter(cloud, cx, 3));
      const auto g1 = unique_grid(bif.h1), g2 = unique_grid(bif.h2);
      std::optional<EulerSurface> fast, naive;
      fast_s = best_seconds(be.repeat, [&] { fast = ecs_points(bif, g1, g2, ctx.threads); });
      naive_s = best_seconds(be.repeat, [&] { naive = brute_force_surface(bif.to_complex(), g1, g2); });
      identical = *fast == *naive;
    }
    ctx.out << "bench kind=" << be.kind << " n=" << be.n << " levels=" << be.levels << " threads=" << ctx.threads
            << " repeat=" << be.repeat << '\n'
            << "fast_seconds " << format_double(fast_s) << '\n'
            << "naive_seconds " << format_double(naive_s) << '\n'
            << "speedup " << format_double(naive_s / std::max(fast_s, 1e-12)) << '\n'
            << "identical " << (identical ? "yes" : "no") << '\n';
    return identical ? int{kExitOk} : int{kExitInvariant};
  });

  std::vector<const char*> cargv;
  for (const auto& a : ctx.argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, ctx.out, ctx.err);
    if (code == 0) return kExitOk;
    if (app.get_subcommands().empty()) ctx.err << app.help();
    return kExitUsage;
  }
  return action ? action() : int{kExitUsage};
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{args.empty() ? std::vector<std::string>{"eulersurf"} : args, out, err};
  try {
    return run(ctx);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

int cli_dispatch(int argc, const char* const* argv) {
  return cli_dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace eulersurf
