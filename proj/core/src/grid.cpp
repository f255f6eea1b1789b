#include "phidual/grid.hpp"

#include <algorithm>
#include <cmath>

#include "phidual/errors.hpp"

namespace phidual {

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw ValidationError("box dimension must be at least 1");
  if (lower_.size() != upper_.size()) throw ValidationError("box bounds differ in length");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw ValidationError("box bounds must be finite");
    }
    if (lower_[i] > upper_[i]) {
      throw ValidationError("box lower bound exceeds upper bound in coordinate " +
                            std::to_string(i + 1));
    }
  }
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  return Box(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool Box::contains(std::span<const double> x, double slack) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i] < lower_[i] - slack || x[i] > upper_[i] + slack) return false;
  }
  return true;
}

bool Box::contains(const Box& other, double slack) const {
  return contains(other.lower(), slack) && contains(other.upper(), slack);
}

Grid::Grid(Box box, std::vector<std::size_t> points_per_dim)
    : box_(std::move(box)), counts_(std::move(points_per_dim)) {
  if (counts_.size() != box_.dim()) {
    throw ValidationError("grid needs one point count per box dimension");
  }
  size_ = 1;
  for (std::size_t c : counts_) {
    if (c < 2) throw ValidationError("grid needs at least 2 points per dimension");
    size_ *= c;
  }
  const std::size_t n = dim();
  auto coords = std::make_shared<std::vector<double>>(size_ * n);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t flat = 0; flat < size_; ++flat) {
    for (std::size_t d = 0; d < n; ++d) (*coords)[flat * n + d] = coordinate(d, idx[d]);
    for (std::size_t d = n; d-- > 0;) {
      if (++idx[d] < counts_[d]) break;
      idx[d] = 0;
    }
  }
  coords_ = std::move(coords);
}

Grid Grid::uniform(Box box, std::size_t points_per_dim) {
  const std::size_t n = box.dim();
  return Grid(std::move(box), std::vector<std::size_t>(n, points_per_dim));
}

double Grid::step(std::size_t d) const {
  return (box_.upper()[d] - box_.lower()[d]) / static_cast<double>(counts_[d] - 1);
}

double Grid::max_step() const {
  double s = 0.0;
  for (std::size_t d = 0; d < dim(); ++d) s = std::max(s, step(d));
  return s;
}

double Grid::coordinate(std::size_t d, std::size_t i) const {
  // Weighted form keeps lattice values such as 0 and 1/2 exact.
  const double m = static_cast<double>(counts_[d] - 1);
  const double k = static_cast<double>(i);
  return (box_.lower()[d] * (m - k) + box_.upper()[d] * k) / m;
}

Point Grid::point_copy(std::size_t flat) const {
  auto p = point(flat);
  return Point(p.begin(), p.end());
}

std::vector<std::size_t> Grid::multi_index(std::size_t flat) const {
  std::vector<std::size_t> idx(dim());
  for (std::size_t d = dim(); d-- > 0;) {
    idx[d] = flat % counts_[d];
    flat /= counts_[d];
  }
  return idx;
}

std::size_t Grid::flat_index(std::span<const std::size_t> multi) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < dim(); ++d) flat = flat * counts_[d] + multi[d];
  return flat;
}

std::optional<std::size_t> Grid::find(std::span<const double> x, double tolerance) const {
  if (x.size() != dim()) return std::nullopt;
  std::vector<std::size_t> idx(dim());
  for (std::size_t d = 0; d < dim(); ++d) {
    const double h = step(d);
    const double r = h > 0.0 ? std::round((x[d] - box_.lower()[d]) / h) : 0.0;
    if (r < 0.0 || r > static_cast<double>(counts_[d] - 1)) return std::nullopt;
    idx[d] = static_cast<std::size_t>(r);
    if (std::abs(coordinate(d, idx[d]) - x[d]) > tolerance) return std::nullopt;
  }
  return flat_index(idx);
}

std::size_t Grid::require_index(std::span<const double> x, double tolerance) const {
  auto i = find(x, tolerance);
  if (!i) throw ValidationError("point is not on the grid");
  return *i;
}

GridFunction::GridFunction(Grid g, std::vector<ExtendedValue> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ValidationError("grid function needs one value per grid point");
  }
}

bool GridFunction::is_proper() const {
  bool finite_somewhere = false;
  for (auto v : values) {
    if (v.is_neg_inf()) return false;
    finite_somewhere = finite_somewhere || v.is_finite();
  }
  return finite_somewhere;
}

void GridFunction::require_no_neg_inf() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_neg_inf()) {
      throw NumericalError("function takes -inf at grid point " + std::to_string(i) +
                           " (not proper)");
    }
  }
}

Extremum grid_extremum(const GridFunction& f, ExtremumMode mode) {
  if (f.size() == 0) throw ValidationError("empty grid");
  const bool minimize = mode == ExtremumMode::min;
  // The "absent" value is skipped unless every point carries it.
  const ExtendedValue absent = minimize ? ExtendedValue::pos_inf() : ExtendedValue::neg_inf();
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ExtendedValue v = f.values[i];
    if (v == absent) continue;
    if (!best || (minimize ? v < f.values[*best] : v > f.values[*best])) best = i;
  }
  if (!best) return Extremum{absent, std::nullopt, std::nullopt};
  return Extremum{f.values[*best], best, f.grid.point_copy(*best)};
}

}  // namespace phidual
