#include "eulersurf/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "eulersurf/error.hpp"
#include "text_util.hpp"

namespace eulersurf {

using detail::format_double;
using detail::parse_number;
using detail::split;
using detail::trim;
using Kind = FormatError::Kind;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(Kind::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(Kind::kIo, "cannot write " + path.string());
    out << content;
    if (!out.flush()) throw FormatError(Kind::kIo, "write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw FormatError(Kind::kIo, "cannot replace " + path.string() + ": " + ec.message());
}

namespace {

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

// Header/ASCII-payload tokenizer with '#' comments running to end of line.
class Tokens {
 public:
  explicit Tokens(const std::string& s, std::size_t pos = 0) : s_(s), pos_(pos) {}

  std::optional<std::string_view> next() {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ >= s_.size()) return std::nullopt;
    const std::size_t b = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '#') ++pos_;
    return std::string_view(s_).substr(b, pos_ - b);
  }
  std::size_t pos() const noexcept { return pos_; }

 private:
  const std::string& s_;
  std::size_t pos_;
};

std::size_t header_number(Tokens& tok, const char* what, Kind kind = Kind::kMalformedHeader) {
  const auto t = tok.next();
  long long v = 0;
  if (!t || !parse_number(*t, v) || v <= 0) throw FormatError(kind, std::string("PGM header: bad or missing ") + what);
  return static_cast<std::size_t>(v);
}

}  // namespace

GrayImage read_pgm(std::istream& in, int levels) {
  const std::string s = slurp(in);
  if (s.size() < 2 || s[0] != 'P' || (s[1] != '2' && s[1] != '5'))
    throw FormatError(Kind::kMalformedHeader, "not a PGM file (expected magic P2 or P5)");
  const bool binary = s[1] == '5';
  Tokens tok(s, 2);
  const std::size_t width = header_number(tok, "width");
  const std::size_t height = header_number(tok, "height");
  const auto maxtok = tok.next();
  long long maxval = 0;
  if (!maxtok || !parse_number(*maxtok, maxval) || maxval <= 0)
    throw FormatError(Kind::kMalformedHeader, "PGM header: bad or missing maxval");
  if (maxval > 65535) throw FormatError(Kind::kMaxvalOverflow, "PGM maxval " + std::to_string(maxval) + " exceeds 65535");
  if (levels < 0) throw ParameterError("levels must be positive");

  const std::size_t count = width * height;
  std::vector<std::int32_t> raw(count);
  if (binary) {
    std::size_t pos = tok.pos();
    if (pos >= s.size() || !std::isspace(static_cast<unsigned char>(s[pos])))
      throw FormatError(Kind::kMalformedHeader, "PGM header must end with a single whitespace byte");
    ++pos;
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    if (s.size() - pos < count * bytes)
      throw FormatError(Kind::kTruncatedPayload, "PGM payload has " + std::to_string(s.size() - pos) +
                                                     " bytes, expected " + std::to_string(count * bytes));
    const auto* p = reinterpret_cast<const unsigned char*>(s.data() + pos);
    for (std::size_t i = 0; i < count; ++i)
      raw[i] = bytes == 2 ? (p[2 * i] << 8) | p[2 * i + 1] : p[i];
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto t = tok.next();
      if (!t)
        throw FormatError(Kind::kTruncatedPayload, "PGM payload has " + std::to_string(i) + " values, expected " +
                                                       std::to_string(count));
      if (!parse_number(*t, raw[i]) || raw[i] < 0)
        throw FormatError(Kind::kSyntax, "bad PGM pixel value '" + std::string(*t) + "'");
    }
  }
  for (const auto v : raw)
    if (v > maxval) throw FormatError(Kind::kSyntax, "PGM pixel value " + std::to_string(v) + " exceeds maxval");

  if (levels == 0) return GrayImage({height, width}, std::move(raw), static_cast<int>(maxval) + 1);
  for (auto& v : raw) v = static_cast<std::int32_t>(static_cast<std::int64_t>(v) * levels / (maxval + 1));
  return GrayImage({height, width}, std::move(raw), levels);
}

GrayImage load_pgm(const std::filesystem::path& path, int levels) {
  std::istringstream in(read_file(path));
  return read_pgm(in, levels);
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  if (image.ndim() != 2) throw ParameterError("PGM holds 2D images only");
  if (image.levels() > 65536) throw ParameterError("PGM cannot hold more than 65536 levels");
  const int maxval = std::max(image.levels() - 1, 1);
  out << "P5\n" << image.dim(1) << ' ' << image.dim(0) << '\n' << maxval << '\n';
  std::string payload;
  payload.reserve(image.size() * (maxval > 255 ? 2 : 1));
  for (const auto v : image.data()) {
    if (maxval > 255) payload.push_back(static_cast<char>((v >> 8) & 0xff));
    payload.push_back(static_cast<char>(v & 0xff));
  }
  out << payload;
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ostringstream out;
  write_pgm(out, image);
  write_file(path, out.str());
}

GrayImage read_volume(std::istream& in) {
  const std::string s = slurp(in);
  Tokens tok(s);
  const auto magic = tok.next();
  if (!magic || *magic != "EUVOL") throw FormatError(Kind::kMalformedHeader, "not a volume file (expected EUVOL)");
  std::size_t dims[3];
  long long levels = 0;
  for (auto& d : dims) {
    const auto t = tok.next();
    long long v = 0;
    if (!t || !parse_number(*t, v) || v <= 0) throw FormatError(Kind::kMalformedHeader, "volume header: bad dimension");
    d = static_cast<std::size_t>(v);
  }
  const auto lt = tok.next();
  if (!lt || !parse_number(*lt, levels) || levels <= 0)
    throw FormatError(Kind::kMalformedHeader, "volume header: bad level count");
  if (levels > std::numeric_limits<std::int32_t>::max())
    throw FormatError(Kind::kMaxvalOverflow, "volume level count too large");
  const std::size_t count = dims[0] * dims[1] * dims[2];
  std::vector<std::int32_t> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto t = tok.next();
    if (!t) throw FormatError(Kind::kTruncatedPayload, "volume payload has " + std::to_string(i) + " values, expected " +
                                                           std::to_string(count));
    if (!parse_number(*t, data[i]) || data[i] < 0 || data[i] >= levels)
      throw FormatError(Kind::kSyntax, "bad voxel value '" + std::string(*t) + "'");
  }
  if (tok.next()) throw FormatError(Kind::kShapeMismatch, "volume payload longer than its header declares");
  return GrayImage({dims[0], dims[1], dims[2]}, std::move(data), static_cast<int>(levels));
}

GrayImage load_volume(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_volume(in);
}

void write_volume(std::ostream& out, const GrayImage& image) {
  if (image.ndim() != 3) throw ParameterError("volume files hold 3D images only");
  out << "EUVOL " << image.dim(0) << ' ' << image.dim(1) << ' ' << image.dim(2) << ' ' << image.levels() << '\n';
  const std::size_t row = image.dim(2);
  for (std::size_t i = 0; i < image.size(); ++i) out << image[i] << ((i + 1) % row == 0 ? '\n' : ' ');
}

void save_volume(const std::filesystem::path& path, const GrayImage& image) {
  std::ostringstream out;
  write_volume(out, image);
  write_file(path, out.str());
}

GrayImage load_image(const std::filesystem::path& path, int levels) {
  const std::string s = read_file(path);
  std::istringstream in(s);
  if (s.rfind("EUVOL", 0) == 0) {
    auto v = read_volume(in);
    if (levels == 0 || levels == v.levels()) return v;
    std::vector<std::int32_t> data(v.data().begin(), v.data().end());
    for (auto& x : data) x = static_cast<std::int32_t>(static_cast<std::int64_t>(x) * levels / v.levels());
    return GrayImage(v.dims(), std::move(data), levels);
  }
  return read_pgm(in, levels);
}

void save_image(const std::filesystem::path& path, const GrayImage& image) {
  if (image.ndim() == 3)
    save_volume(path, image);
  else
    save_pgm(path, image);
}

// ---------------------------------------------------------------- CSV

namespace {

std::vector<std::string> data_lines(std::istream& in, std::vector<std::string>* comments = nullptr) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (trim(line).front() == '#') {
      if (comments) comments->push_back(line);
      continue;
    }
    out.push_back(line);
  }
  return out;
}

double csv_double(std::string_view field, std::size_t line) {
  double v = 0.0;
  if (!parse_number(field, v))
    throw FormatError(Kind::kSyntax, "line " + std::to_string(line) + ": bad number '" + std::string(trim(field)) + "'");
  return v;
}

std::int64_t csv_int(std::string_view field, std::size_t line) {
  std::int64_t v = 0;
  if (!parse_number(field, v))
    throw FormatError(Kind::kSyntax, "line " + std::to_string(line) + ": bad integer '" + std::string(trim(field)) + "'");
  return v;
}

void write_grid_header(std::ostream& out, const ThresholdGrid& grid2) {
  out << "h1\\h2";
  for (const double b : grid2.values()) out << ',' << format_double(b);
  out << '\n';
}

// Generic grid-matrix reader: returns grids and raw cell fields.
struct GridTable {
  std::vector<double> grid1, grid2;
  std::vector<std::string> cells;
};

GridTable read_grid_table(const std::vector<std::string>& lines) {
  if (lines.empty()) throw FormatError(Kind::kShapeMismatch, "surface file has no header row");
  GridTable t;
  const auto header = split(lines[0], ',');
  for (std::size_t c = 1; c < header.size(); ++c) t.grid2.push_back(csv_double(header[c], 1));
  if (t.grid2.empty()) throw FormatError(Kind::kShapeMismatch, "surface header lists no thresholds");
  if (lines.size() < 2) throw FormatError(Kind::kShapeMismatch, "surface file has no rows");
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split(lines[r], ',');
    if (fields.size() != t.grid2.size() + 1)
      throw FormatError(Kind::kShapeMismatch, "row " + std::to_string(r) + " has " +
                                                  std::to_string(fields.size() - 1) + " values but the header grid has " +
                                                  std::to_string(t.grid2.size()));
    t.grid1.push_back(csv_double(fields[0], r + 1));
    for (std::size_t c = 1; c < fields.size(); ++c) t.cells.emplace_back(trim(fields[c]));
  }
  return t;
}

}  // namespace

void write_surface_csv(std::ostream& out, const EulerSurface& surface) {
  out << "# eulersurf surface " << kCsvFormatVersion << '\n';
  write_grid_header(out, surface.grid2());
  for (std::size_t s = 0; s < surface.rows(); ++s) {
    out << format_double(surface.grid1()[s]);
    for (const auto v : surface.row(s)) out << ',' << v;
    out << '\n';
  }
}

EulerSurface read_surface_csv(std::istream& in) {
  const auto t = read_grid_table(data_lines(in));
  std::vector<std::int64_t> chi;
  chi.reserve(t.cells.size());
  for (std::size_t i = 0; i < t.cells.size(); ++i) chi.push_back(csv_int(t.cells[i], 2 + i / t.grid2.size()));
  return EulerSurface(ThresholdGrid(t.grid1), ThresholdGrid(t.grid2), std::move(chi));
}

void save_surface_csv(const std::filesystem::path& path, const EulerSurface& surface) {
  std::ostringstream out;
  write_surface_csv(out, surface);
  write_file(path, out.str());
}

EulerSurface load_surface_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_surface_csv(in);
}

void write_curve_csv(std::ostream& out, const EulerCurve& curve) {
  out << "# eulersurf curve " << kCsvFormatVersion << "\nthreshold,chi\n";
  for (std::size_t i = 0; i < curve.chi.size(); ++i) out << format_double(curve.grid[i]) << ',' << curve.chi[i] << '\n';
}

EulerCurve read_curve_csv(std::istream& in) {
  auto lines = data_lines(in);
  if (!lines.empty() && trim(lines[0]).rfind("threshold", 0) == 0) lines.erase(lines.begin());
  if (lines.empty()) throw FormatError(Kind::kShapeMismatch, "curve file has no rows");
  std::vector<double> grid;
  std::vector<std::int64_t> chi;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 2) throw FormatError(Kind::kShapeMismatch, "curve rows need exactly two fields");
    grid.push_back(csv_double(f[0], i + 1));
    chi.push_back(csv_int(f[1], i + 1));
  }
  return EulerCurve{ThresholdGrid(std::move(grid)), std::move(chi)};
}

void save_curve_csv(const std::filesystem::path& path, const EulerCurve& curve) {
  std::ostringstream out;
  write_curve_csv(out, curve);
  write_file(path, out.str());
}

EulerCurve load_curve_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_curve_csv(in);
}

void write_real_surface_csv(std::ostream& out, const ThresholdGrid& grid1, const ThresholdGrid& grid2,
                            const RealMatrix& values, const std::string& title) {
  if (values.rows() != grid1.size() || values.cols() != grid2.size())
    throw ValidationError("matrix shape does not match its grids");
  out << "# eulersurf " << title << ' ' << kCsvFormatVersion << '\n';
  write_grid_header(out, grid2);
  for (std::size_t s = 0; s < values.rows(); ++s) {
    out << format_double(grid1[s]);
    for (std::size_t t = 0; t < values.cols(); ++t) out << ',' << format_double(values.at(s, t));
    out << '\n';
  }
}

void write_terrain_csv(std::ostream& out, const Terrain& terrain) {
  out << "# eulersurf terrain " << kCsvFormatVersion << '\n';
  out << "# kind: " << (terrain.kind == TerrainKind::kNormalized ? "normalized" : "raw") << '\n';
  out << "# sd: population\n";
  out << "# sentinels: " << terrain.sentinel_count() << '\n';
  write_grid_header(out, terrain.grid2);
  for (std::size_t s = 0; s < terrain.values.rows(); ++s) {
    out << format_double(terrain.grid1[s]);
    for (std::size_t t = 0; t < terrain.values.cols(); ++t)
      out << ',' << (terrain.is_sentinel(s, t) ? std::string("nan") : format_double(terrain.values.at(s, t)));
    out << '\n';
  }
}

Terrain read_terrain_csv(std::istream& in) {
  std::vector<std::string> comments;
  const auto t = read_grid_table(data_lines(in, &comments));
  TerrainKind kind = TerrainKind::kRaw;
  for (const auto& c : comments)
    if (c.find("kind: normalized") != std::string::npos) kind = TerrainKind::kNormalized;
  RealMatrix values(t.grid1.size(), t.grid2.size());
  std::vector<std::uint8_t> sentinel(t.cells.size(), 0);
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    if (t.cells[i] == "nan") {
      sentinel[i] = 1;
      continue;
    }
    values.data()[i] = csv_double(t.cells[i], 2 + i / t.grid2.size());
  }
  return Terrain{ThresholdGrid(t.grid1), ThresholdGrid(t.grid2), std::move(values), kind, std::move(sentinel)};
}

void write_points_csv(std::ostream& out, const PointCloud& points, const std::vector<int>* parent) {
  if (parent && parent->size() != points.size()) throw ValidationError("parent list does not match the point count");
  out << (points.dim() == 3 ? "x,y,z" : "x,y") << (parent ? ",parent" : "") << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int a = 0; a < points.dim(); ++a) out << (a ? "," : "") << format_double(points(i, a));
    if (parent) out << ',' << (*parent)[i];
    out << '\n';
  }
}

PointCloud read_points_csv(std::istream& in) {
  auto lines = data_lines(in);
  if (lines.empty()) throw FormatError(Kind::kShapeMismatch, "point file is empty");
  int dim = 0;
  const auto first = split(lines[0], ',');
  double probe = 0.0;
  if (!parse_number(first[0], probe)) {
    for (const auto f : first) {
      const auto name = trim(f);
      if (name == "x" || name == "y" || name == "z") ++dim;
    }
    lines.erase(lines.begin());
  } else {
    dim = static_cast<int>(first.size());
  }
  if (dim != 2 && dim != 3) throw FormatError(Kind::kShapeMismatch, "points need 2 or 3 coordinates");
  std::vector<double> coords;
  coords.reserve(lines.size() * static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() < static_cast<std::size_t>(dim))
      throw FormatError(Kind::kShapeMismatch, "point row " + std::to_string(i + 1) + " is too short");
    for (int a = 0; a < dim; ++a) coords.push_back(csv_double(f[static_cast<std::size_t>(a)], i + 1));
  }
  return PointCloud(dim, std::move(coords));
}

PointCloud load_points_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_points_csv(in);
}

LoadedFeatureSource load_curve_or_surface(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  LoadedFeatureSource out;
  if (text.rfind("# eulersurf curve", 0) == 0)
    out.curve = read_curve_csv(in);
  else if (text.rfind("# eulersurf surface", 0) == 0)
    out.surface = read_surface_csv(in);
  else
    throw FormatError(Kind::kMalformedHeader, path.string() + " is neither a curve nor a surface CSV");
  return out;
}

void write_features_csv(std::ostream& out, const std::vector<std::vector<double>>& rows) {
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
    out << '\n';
  }
}

std::vector<std::vector<double>> read_features_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  const auto lines = data_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::vector<double> r;
    for (const auto f : split(lines[i], ',')) r.push_back(csv_double(f, i + 1));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string zscore_to_json(const ZScore& z) {
  nlohmann::json j;
  j["format"] = "eulersurf-zscore";
  j["version"] = 1;
  j["mean"] = z.mean;
  j["sd"] = z.sd;
  return j.dump(2) + "\n";
}

ZScore zscore_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "eulersurf-zscore") throw FormatError(Kind::kMalformedHeader, "not a z-score file");
    ZScore z{j.at("mean").get<std::vector<double>>(), j.at("sd").get<std::vector<double>>()};
    if (z.mean.size() != z.sd.size()) throw FormatError(Kind::kShapeMismatch, "z-score mean and sd differ in length");
    return z;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(Kind::kSyntax, std::string("z-score JSON: ") + e.what());
  }
}

}  // namespace eulersurf
