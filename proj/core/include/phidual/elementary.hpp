#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phidual/grid.hpp"

namespace phidual {

// The three classes of elementary functions:
//   affine         <ell, x> + c
//   quad_minorant  -a|x|^2 + <ell, x> + c   (a >= 0)
//   quad_majorant  +a|x|^2 + <ell, x> + c   (a >= 0)
enum class ElementaryClass { affine, quad_minorant, quad_majorant };

std::string_view to_string(ElementaryClass cls);
ElementaryClass elementary_class_from_string(std::string_view name);

class ElementaryFunction {
 public:
  static ElementaryFunction affine(std::vector<double> ell, double c);
  static ElementaryFunction quad_minorant(double a, std::vector<double> ell, double c);
  static ElementaryFunction quad_majorant(double a, std::vector<double> ell, double c);
  // Constant function c on R^dim.
  static ElementaryFunction constant(std::size_t dim, double c);

  ElementaryClass cls() const noexcept { return cls_; }
  double curvature() const noexcept { return a_; }
  const std::vector<double>& slope() const noexcept { return ell_; }
  double offset() const noexcept { return c_; }
  std::size_t dim() const noexcept { return ell_.size(); }

  // Same (a, ell), different constant.
  ElementaryFunction with_offset(double c) const;

  double operator()(std::span<const double> x) const;

  // True for members of Φ_lsc (affine functions included).
  bool is_lsc_class() const noexcept { return cls_ != ElementaryClass::quad_majorant; }

  friend bool operator==(const ElementaryFunction&, const ElementaryFunction&) = default;

 private:
  ElementaryFunction(ElementaryClass cls, double a, std::vector<double> ell, double c);

  ElementaryClass cls_;
  double a_;
  std::vector<double> ell_;
  double c_;
};

// (a, ell) pair of a sampled elementary function; c is handled analytically.
struct ParameterPoint {
  double a = 0.0;
  std::vector<double> ell;

  friend bool operator==(const ParameterPoint&, const ParameterPoint&) = default;
};

// Finite sample of an elementary class: every a in `a_values` crossed with
// every point of `ell_grid`, followed by any extra `seeds` not already on the
// grid. The constant c is never sampled.
class ParameterGrid {
 public:
  ParameterGrid(ElementaryClass cls, std::vector<double> a_values, Grid ell_grid,
                std::vector<ParameterPoint> seeds = {});

  static ParameterGrid affine(Grid ell_grid, std::vector<ParameterPoint> seeds = {});

  ElementaryClass cls() const noexcept { return cls_; }
  const std::vector<double>& a_values() const noexcept { return a_values_; }
  const Grid& ell_grid() const noexcept { return ell_grid_; }
  double a_max() const noexcept { return a_values_.back(); }
  std::size_t dim() const noexcept { return ell_grid_.dim(); }
  // Largest |ell| over the sample (Euclidean).
  double ell_norm_max() const noexcept { return ell_norm_max_; }

  std::size_t size() const noexcept { return points_.size(); }
  const ParameterPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<ParameterPoint>& points() const noexcept { return points_; }

  ElementaryFunction function(std::size_t i, double c = 0.0) const;
  ElementaryFunction function(const ParameterPoint& p, double c = 0.0) const;

  // Same class and ell grid with a_values truncated to those <= a_max.
  ParameterGrid truncated(double a_max) const;

 private:
  ElementaryClass cls_;
  std::vector<double> a_values_;
  Grid ell_grid_;
  std::vector<ParameterPoint> points_;
  double ell_norm_max_ = 0.0;
};

}  // namespace phidual
