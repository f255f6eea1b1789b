#include "phidual/elementary.hpp"

#include <algorithm>
#include <cmath>

#include "phidual/errors.hpp"

namespace phidual {

std::string_view to_string(ElementaryClass cls) {
  switch (cls) {
    case ElementaryClass::affine: return "affine";
    case ElementaryClass::quad_minorant: return "quad_minorant";
    case ElementaryClass::quad_majorant: return "quad_majorant";
  }
  return "?";
}

ElementaryClass elementary_class_from_string(std::string_view name) {
  if (name == "affine") return ElementaryClass::affine;
  if (name == "quad_minorant" || name == "quad") return ElementaryClass::quad_minorant;
  if (name == "quad_majorant") return ElementaryClass::quad_majorant;
  throw ValidationError("unknown elementary class '" + std::string(name) + "'");
}

ElementaryFunction::ElementaryFunction(ElementaryClass cls, double a, std::vector<double> ell,
                                       double c)
    : cls_(cls), a_(a), ell_(std::move(ell)), c_(c) {
  if (ell_.empty()) throw ValidationError("elementary function needs dimension >= 1");
  if (!(a_ >= 0.0) || !std::isfinite(a_)) {
    throw ValidationError("elementary curvature must be finite and >= 0");
  }
  if (cls_ == ElementaryClass::affine && a_ != 0.0) {
    throw ValidationError("affine elementary functions have zero curvature");
  }
  if (!std::isfinite(c_)) throw ValidationError("elementary constant must be finite");
  for (double l : ell_) {
    if (!std::isfinite(l)) throw ValidationError("elementary slope must be finite");
  }
}

ElementaryFunction ElementaryFunction::affine(std::vector<double> ell, double c) {
  return ElementaryFunction(ElementaryClass::affine, 0.0, std::move(ell), c);
}

ElementaryFunction ElementaryFunction::quad_minorant(double a, std::vector<double> ell, double c) {
  return ElementaryFunction(ElementaryClass::quad_minorant, a, std::move(ell), c);
}

ElementaryFunction ElementaryFunction::quad_majorant(double a, std::vector<double> ell, double c) {
  return ElementaryFunction(ElementaryClass::quad_majorant, a, std::move(ell), c);
}

ElementaryFunction ElementaryFunction::constant(std::size_t dim, double c) {
  return affine(std::vector<double>(dim, 0.0), c);
}

ElementaryFunction ElementaryFunction::with_offset(double c) const {
  return ElementaryFunction(cls_, a_, ell_, c);
}

double ElementaryFunction::operator()(std::span<const double> x) const {
  double lin = c_;
  double sq = 0.0;
  for (std::size_t i = 0; i < ell_.size(); ++i) {
    lin += ell_[i] * x[i];
    sq += x[i] * x[i];
  }
  switch (cls_) {
    case ElementaryClass::affine: return lin;
    case ElementaryClass::quad_minorant: return lin - a_ * sq;
    case ElementaryClass::quad_majorant: return lin + a_ * sq;
  }
  return lin;
}

ParameterGrid::ParameterGrid(ElementaryClass cls, std::vector<double> a_values, Grid ell_grid,
                             std::vector<ParameterPoint> seeds)
    : cls_(cls), a_values_(std::move(a_values)), ell_grid_(std::move(ell_grid)) {
  if (a_values_.empty()) throw ValidationError("parameter grid needs at least one a value");
  if (a_values_.front() != 0.0) throw ValidationError("parameter grid a values must include 0");
  for (std::size_t i = 0; i < a_values_.size(); ++i) {
    if (!(a_values_[i] >= 0.0) || !std::isfinite(a_values_[i])) {
      throw ValidationError("parameter grid a values must be finite and >= 0");
    }
    if (i > 0 && !(a_values_[i] > a_values_[i - 1])) {
      throw ValidationError("parameter grid a values must be increasing");
    }
  }
  if (cls_ == ElementaryClass::affine && a_values_.size() != 1) {
    throw ValidationError("affine parameter grids have a_values = {0}");
  }

  points_.reserve(a_values_.size() * ell_grid_.size() + seeds.size());
  for (double a : a_values_) {
    for (std::size_t i = 0; i < ell_grid_.size(); ++i) {
      points_.push_back(ParameterPoint{a, ell_grid_.point_copy(i)});
    }
  }
  for (auto& s : seeds) {
    if (s.ell.size() != ell_grid_.dim()) {
      throw ValidationError("seed parameter has the wrong dimension");
    }
    if (!(s.a >= 0.0) || (cls_ == ElementaryClass::affine && s.a != 0.0)) {
      throw ValidationError("seed parameter curvature is invalid for the class");
    }
    const bool on_grid = std::find(a_values_.begin(), a_values_.end(), s.a) != a_values_.end() &&
                         ell_grid_.find(s.ell, 0.0).has_value();
    if (!on_grid && std::find(points_.begin(), points_.end(), s) == points_.end()) {
      points_.push_back(std::move(s));
    }
  }
  for (const auto& p : points_) {
    double n2 = 0.0;
    for (double l : p.ell) n2 += l * l;
    ell_norm_max_ = std::max(ell_norm_max_, std::sqrt(n2));
  }
}

ParameterGrid ParameterGrid::affine(Grid ell_grid, std::vector<ParameterPoint> seeds) {
  return ParameterGrid(ElementaryClass::affine, {0.0}, std::move(ell_grid), std::move(seeds));
}

ElementaryFunction ParameterGrid::function(std::size_t i, double c) const {
  return function(points_[i], c);
}

ElementaryFunction ParameterGrid::function(const ParameterPoint& p, double c) const {
  switch (cls_) {
    case ElementaryClass::affine: return ElementaryFunction::affine(p.ell, c);
    case ElementaryClass::quad_minorant: return ElementaryFunction::quad_minorant(p.a, p.ell, c);
    case ElementaryClass::quad_majorant: return ElementaryFunction::quad_majorant(p.a, p.ell, c);
  }
  return ElementaryFunction::affine(p.ell, c);
}

ParameterGrid ParameterGrid::truncated(double a_max) const {
  std::vector<double> as;
  for (double a : a_values_) {
    if (a <= a_max) as.push_back(a);
  }
  std::vector<ParameterPoint> seeds;
  const std::size_t on_grid = a_values_.size() * ell_grid_.size();
  for (std::size_t i = on_grid; i < points_.size(); ++i) {
    if (points_[i].a <= a_max) seeds.push_back(points_[i]);
  }
  return ParameterGrid(cls_, std::move(as), ell_grid_, std::move(seeds));
}

}  // namespace phidual
