#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "phidual/extended_value.hpp"

namespace phidual {

using Point = std::vector<double>;

// Axis-aligned box in R^n, n >= 1, lower[i] <= upper[i].
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper);

  // Same interval [lo, hi] in every one of `dim` coordinates.
  static Box cube(std::size_t dim, double lo, double hi);

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

  bool contains(std::span<const double> x, double slack = 0.0) const;
  bool contains(const Box& other, double slack = 1e-12) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// Uniform tensor grid over a Box. Every dimension carries at least two
// points and both box endpoints. Flat indices run in lexicographic order
// with the first coordinate varying slowest; that is the scan order used
// for every tie-break in the library.
class Grid {
 public:
  Grid(Box box, std::vector<std::size_t> points_per_dim);

  static Grid uniform(Box box, std::size_t points_per_dim);

  const Box& box() const noexcept { return box_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  std::size_t size() const noexcept { return size_; }
  const std::vector<std::size_t>& points_per_dim() const noexcept { return counts_; }

  double step(std::size_t d) const;
  double max_step() const;
  // Coordinate `i` along dimension `d`; exact at both endpoints.
  double coordinate(std::size_t d, std::size_t i) const;

  std::span<const double> point(std::size_t flat) const {
    return {coords_->data() + flat * dim(), dim()};
  }
  Point point_copy(std::size_t flat) const;

  std::vector<std::size_t> multi_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const std::size_t> multi) const;

  // Flat index of the grid point within `tolerance` (max-norm) of x.
  std::optional<std::size_t> find(std::span<const double> x, double tolerance = 1e-9) const;
  std::size_t require_index(std::span<const double> x, double tolerance = 1e-9) const;

 private:
  Box box_;
  std::vector<std::size_t> counts_;
  std::size_t size_ = 0;
  std::shared_ptr<const std::vector<double>> coords_;
};

// Values of a function on every point of a grid.
struct GridFunction {
  Grid grid;
  std::vector<ExtendedValue> values;

  GridFunction(Grid g, std::vector<ExtendedValue> v);

  ExtendedValue at(std::size_t flat) const { return values[flat]; }
  std::size_t size() const noexcept { return values.size(); }

  // dom f ≠ ∅ on the grid and no value is -inf.
  bool is_proper() const;
  // Throws NumericalError if any value is -inf.
  void require_no_neg_inf() const;
};

enum class ExtremumMode { min, max };

struct Extremum {
  ExtendedValue value;
  std::optional<std::size_t> index;
  std::optional<Point> argpoint;
};

// Exact extremum over grid values; first index in scan order wins ties.
// For min, +inf values are skipped unless every value is +inf, in which case
// value = +inf and no argpoint is reported.
Extremum grid_extremum(const GridFunction& f, ExtremumMode mode);

}  // namespace phidual
