#include "eulersurf/complex.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "eulersurf/error.hpp"
#include "text_util.hpp"

namespace eulersurf {

ThresholdGrid::ThresholdGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("threshold grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::isnan(values_[i])) throw ValidationError("threshold grid contains NaN");
    if (i > 0 && !(values_[i - 1] < values_[i]))
      throw ValidationError("threshold grid is not strictly increasing at index " + std::to_string(i));
  }
}

ThresholdGrid ThresholdGrid::integers(int levels) {
  if (levels < 1) throw ParameterError("levels must be positive");
  std::vector<double> v(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) v[static_cast<std::size_t>(i)] = i;
  return ThresholdGrid(std::move(v));
}

std::size_t ThresholdGrid::first_at_least(double v) const noexcept {
  return static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), v) - values_.begin());
}

std::int64_t BifilteredComplex::add_cell(int dim, std::vector<std::int64_t> faces, Grade grade) {
  return add_cell(dim, std::move(faces), std::vector<Grade>{grade});
}

std::int64_t BifilteredComplex::add_cell(int dim, std::vector<std::int64_t> faces, std::vector<Grade> grades) {
  if (dim < 0) throw ValidationError("negative cell dimension");
  if (grades.empty()) throw ValidationError("cell without filtration value");
  const auto id = static_cast<std::int64_t>(cells_.size());
  cells_.push_back({id, dim});
  faces_.push_back(std::move(faces));
  grades_.push_back(std::move(grades));
  return id;
}

double BifilteredComplex::value(std::size_t i, Parameter which) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : grades_[i]) best = std::min(best, which == Parameter::kFirst ? g.h1 : g.h2);
  return best;
}

bool BifilteredComplex::single_critical() const noexcept {
  return std::all_of(grades_.begin(), grades_.end(), [](const auto& g) { return g.size() == 1; });
}

int BifilteredComplex::max_dim() const noexcept {
  int d = -1;
  for (const auto& c : cells_) d = std::max(d, c.dim);
  return d;
}

bool BifilteredComplex::contains(std::size_t i, double s, double t) const noexcept {
  for (const auto& g : grades_[i])
    if (g.h1 <= s && g.h2 <= t) return true;
  return false;
}

void BifilteredComplex::validate() const {
  const auto n = static_cast<std::int64_t>(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    for (const auto& g : grades_[i])
      if (std::isnan(g.h1) || std::isnan(g.h2))
        throw ValidationError("cell " + std::to_string(i) + " has a NaN filtration value");
    for (const auto f : faces_[i]) {
      if (f < 0 || f >= n)
        throw ValidationError("cell " + std::to_string(i) + " references missing face " + std::to_string(f));
      const auto fi = static_cast<std::size_t>(f);
      if (cells_[fi].dim >= cells_[i].dim)
        throw ValidationError("cell " + std::to_string(i) + " has face " + std::to_string(f) +
                              " of non-lower dimension");
      for (const auto& g : grades_[i]) {
        const bool covered = std::any_of(grades_[fi].begin(), grades_[fi].end(),
                                         [&](const Grade& fg) { return fg.dominated_by(g); });
        if (!covered)
          throw ValidationError("filtration is not monotone: face " + std::to_string(f) + " of cell " +
                                std::to_string(i) + " enters later than the cell");
      }
    }
  }
}

EulerSurface::EulerSurface(ThresholdGrid grid1, ThresholdGrid grid2)
    : grid1_(std::move(grid1)), grid2_(std::move(grid2)), chi_(grid1_.size() * grid2_.size(), 0) {}

EulerSurface::EulerSurface(ThresholdGrid grid1, ThresholdGrid grid2, std::vector<std::int64_t> chi)
    : grid1_(std::move(grid1)), grid2_(std::move(grid2)), chi_(std::move(chi)) {
  if (chi_.size() != grid1_.size() * grid2_.size())
    throw ValidationError("surface matrix does not match its grids");
}

std::vector<std::int64_t> EulerSurface::column(std::size_t t) const {
  std::vector<std::int64_t> out(rows());
  for (std::size_t s = 0; s < rows(); ++s) out[s] = at(s, t);
  return out;
}

EulerSurface EulerSurface::transposed() const {
  EulerSurface out(grid2_, grid1_);
  for (std::size_t s = 0; s < rows(); ++s)
    for (std::size_t t = 0; t < cols(); ++t) out.at(t, s) = at(s, t);
  return out;
}

std::int64_t euler_characteristic(std::span<const Cell> cells) noexcept {
  std::int64_t chi = 0;
  for (const auto& c : cells) chi += (c.dim % 2 == 0) ? 1 : -1;
  return chi;
}

std::int64_t euler_characteristic(const BifilteredComplex& complex) noexcept {
  return euler_characteristic(std::span<const Cell>(complex.cells()));
}

std::vector<Cell> sublevel_complex(const BifilteredComplex& complex, double s, double t) {
  complex.validate();
  std::vector<Cell> out;
  for (std::size_t i = 0; i < complex.size(); ++i)
    if (complex.contains(i, s, t)) out.push_back(complex.cell(i));
  return out;
}

EulerCurve brute_force_curve(const BifilteredComplex& complex, const ThresholdGrid& grid, Parameter which) {
  complex.validate();
  constexpr double inf = std::numeric_limits<double>::infinity();
  EulerCurve curve{grid, std::vector<std::int64_t>(grid.size(), 0)};
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const double a = grid[s];
    std::int64_t chi = 0;
    for (std::size_t i = 0; i < complex.size(); ++i) {
      const bool in = which == Parameter::kFirst ? complex.contains(i, a, inf) : complex.contains(i, inf, a);
      if (in) chi += (complex.cell(i).dim % 2 == 0) ? 1 : -1;
    }
    curve.chi[s] = chi;
  }
  return curve;
}

EulerSurface brute_force_surface(const BifilteredComplex& complex, const ThresholdGrid& grid1,
                                 const ThresholdGrid& grid2) {
  complex.validate();
  EulerSurface surface(grid1, grid2);
  for (std::size_t s = 0; s < grid1.size(); ++s) {
    for (std::size_t t = 0; t < grid2.size(); ++t) {
      std::int64_t chi = 0;
      for (std::size_t i = 0; i < complex.size(); ++i)
        if (complex.contains(i, grid1[s], grid2[t])) chi += (complex.cell(i).dim % 2 == 0) ? 1 : -1;
      surface.at(s, t) = chi;
    }
  }
  return surface;
}

namespace {

constexpr const char* kComplexMagic = "EULERCPLX";

FormatError syntax(std::size_t line, const std::string& msg) {
  return FormatError(FormatError::Kind::kSyntax, "complex line " + std::to_string(line) + ": " + msg);
}

}  // namespace

BifilteredComplex read_complex(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!detail::blank_or_comment(line)) break;
  }
  {
    std::istringstream hs(line);
    std::string magic;
    int version = 0;
    if (!(hs >> magic >> version) || magic != kComplexMagic)
      throw FormatError(FormatError::Kind::kMalformedHeader, "missing `EULERCPLX 1` header");
    if (version != 1)
      throw FormatError(FormatError::Kind::kMalformedHeader, "unsupported complex format version " +
                                                                 std::to_string(version));
  }

  BifilteredComplex complex;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    std::istringstream ls(line);
    std::string tok;
    int dim = -1;
    if (!(ls >> tok) || tok != "dim" || !(ls >> dim)) throw syntax(lineno, "expected `dim <d>`");
    if (!(ls >> tok) || tok != "faces") throw syntax(lineno, "expected `faces`");
    std::vector<std::int64_t> faces;
    std::vector<Grade> grades;
    while (ls >> tok && tok != "h1") {
      std::int64_t id = 0;
      if (!detail::parse_number(tok, id)) throw syntax(lineno, "bad face id `" + tok + "`");
      faces.push_back(id);
    }
    while (tok == "h1") {
      Grade g;
      std::string v1, key, v2;
      if (!(ls >> v1 >> key >> v2) || key != "h2" || !detail::parse_number(v1, g.h1) ||
          !detail::parse_number(v2, g.h2))
        throw syntax(lineno, "expected `h1 <v> h2 <v>`");
      grades.push_back(g);
      tok.clear();
      ls >> tok;
    }
    if (!tok.empty()) throw syntax(lineno, "unexpected token `" + tok + "`");
    if (grades.empty()) throw syntax(lineno, "missing `h1 <v> h2 <v>`");
    complex.add_cell(dim, std::move(faces), std::move(grades));
  }
  complex.validate();
  return complex;
}

void write_complex(std::ostream& out, const BifilteredComplex& complex) {
  out << kComplexMagic << " 1\n";
  for (std::size_t i = 0; i < complex.size(); ++i) {
    out << "dim " << complex.cell(i).dim << " faces";
    for (const auto f : complex.faces(i)) out << ' ' << f;
    for (const auto& g : complex.grades(i))
      out << " h1 " << detail::format_double(g.h1) << " h2 " << detail::format_double(g.h2);
    out << '\n';
  }
}

}  // namespace eulersurf
