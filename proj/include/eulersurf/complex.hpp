#pragma once

// Cell complexes with one- and two-parameter sublevel filtrations, the
// Euler characteristic, and brute-force recount oracles for curves and
// surfaces.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace eulersurf {

struct Cell {
  std::int64_t id = 0;
  int dim = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// A pair of filtration values (h1, h2) at which a cell enters.
struct Grade {
  double h1 = 0.0;
  double h2 = 0.0;

  bool dominated_by(const Grade& o) const noexcept { return h1 <= o.h1 && h2 <= o.h2; }
  friend bool operator==(const Grade&, const Grade&) = default;
};

enum class Parameter { kFirst, kSecond };

/// Strictly increasing, non-empty list of thresholds a_0 < ... < a_m.
class ThresholdGrid {
 public:
  explicit ThresholdGrid(std::vector<double> values);

  /// The integer grid 0, 1, ..., levels-1 used for images.
  static ThresholdGrid integers(int levels);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Index of the first threshold >= v, or size() when every threshold is
  /// below v.
  std::size_t first_at_least(double v) const noexcept;

  friend bool operator==(const ThresholdGrid&, const ThresholdGrid&) = default;

 private:
  std::vector<double> values_;
};

/// A cell complex where every cell carries one or more entry grades. The
/// cell is present in K_{s,t} when at least one grade is <= (s,t).
/// Simplicial filtrations use exactly one grade per cell; cubical
/// bifiltrations built from image pairs may need several for lower cells
/// (one per containing top cell on the Pareto front).
///
/// Cell ids are insertion indices.
class BifilteredComplex {
 public:
  std::int64_t add_cell(int dim, std::vector<std::int64_t> faces, Grade grade);
  std::int64_t add_cell(int dim, std::vector<std::int64_t> faces, std::vector<Grade> grades);

  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const Cell& cell(std::size_t i) const { return cells_[i]; }
  std::span<const std::int64_t> faces(std::size_t i) const { return faces_[i]; }
  std::span<const Grade> grades(std::size_t i) const { return grades_[i]; }

  /// Single-parameter value: smallest h1 (resp. h2) over the cell's grades.
  double value(std::size_t i, Parameter which) const noexcept;

  bool single_critical() const noexcept;
  int max_dim() const noexcept;

  bool contains(std::size_t i, double s, double t) const noexcept;

  /// Throws ValidationError unless faces reference existing lower-dimensional
  /// cells and every grade of a cell dominates some grade of each face.
  void validate() const;

 private:
  std::vector<Cell> cells_;
  std::vector<std::vector<std::int64_t>> faces_;
  std::vector<std::vector<Grade>> grades_;
};

struct EulerCurve {
  ThresholdGrid grid;
  std::vector<std::int64_t> chi;

  friend bool operator==(const EulerCurve&, const EulerCurve&) = default;
};

/// chi(s, t) = Euler characteristic of K_{s,t}; rows follow grid1.
class EulerSurface {
 public:
  EulerSurface(ThresholdGrid grid1, ThresholdGrid grid2);
  EulerSurface(ThresholdGrid grid1, ThresholdGrid grid2, std::vector<std::int64_t> chi);

  const ThresholdGrid& grid1() const noexcept { return grid1_; }
  const ThresholdGrid& grid2() const noexcept { return grid2_; }
  std::size_t rows() const noexcept { return grid1_.size(); }
  std::size_t cols() const noexcept { return grid2_.size(); }

  std::int64_t& at(std::size_t s, std::size_t t) { return chi_[s * cols() + t]; }
  std::int64_t at(std::size_t s, std::size_t t) const { return chi_[s * cols() + t]; }
  std::span<const std::int64_t> row(std::size_t s) const { return {chi_.data() + s * cols(), cols()}; }
  std::vector<std::int64_t> column(std::size_t t) const;
  const std::vector<std::int64_t>& data() const noexcept { return chi_; }

  /// Rows become columns; grids swap.
  EulerSurface transposed() const;

  friend bool operator==(const EulerSurface&, const EulerSurface&) = default;

 private:
  ThresholdGrid grid1_;
  ThresholdGrid grid2_;
  std::vector<std::int64_t> chi_;
};

std::int64_t euler_characteristic(std::span<const Cell> cells) noexcept;
std::int64_t euler_characteristic(const BifilteredComplex& complex) noexcept;

/// Cells of K_{s,t}. Validates the complex first.
std::vector<Cell> sublevel_complex(const BifilteredComplex& complex, double s, double t);

/// Naive recount of chi at every threshold of one parameter.
EulerCurve brute_force_curve(const BifilteredComplex& complex, const ThresholdGrid& grid,
                             Parameter which = Parameter::kFirst);

/// Naive recount of chi at every (s, t).
EulerSurface brute_force_surface(const BifilteredComplex& complex, const ThresholdGrid& grid1,
                                 const ThresholdGrid& grid2);

/// Text format: header `EULERCPLX 1`, then one cell per line
/// `dim <d> faces <id...> h1 <v> h2 <v>`; extra `h1 <v> h2 <v>` pairs list
/// further grades. Ids are line indices starting at 0.
BifilteredComplex read_complex(std::istream& in);
void write_complex(std::ostream& out, const BifilteredComplex& complex);

}  // namespace eulersurf
