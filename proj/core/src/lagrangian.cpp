#include "phidual/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "phidual/errors.hpp"
#include "phidual/parallel.hpp"
#include "phidual/report_io.hpp"
#include "phidual/tolerances.hpp"

namespace phidual {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked(double v, const char* what) {
  if (std::isnan(v)) throw NumericalError(std::string(what) + " evaluated to NaN");
  return v;
}

}  // namespace

std::string_view to_string(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::constraint: return "constraint";
    case PerturbationKind::fenchel: return "fenchel";
    case PerturbationKind::custom: return "custom";
  }
  return "?";
}

PerturbationFunction PerturbationFunction::constraint(ObjectiveFunction f,
                                                      std::vector<Expression> g) {
  if (g.empty()) throw ValidationError("constraint perturbation needs at least one constraint");
  for (const auto& gi : g) {
    if (gi.dim() != f.dim()) throw ValidationError("constraint dimension differs from f");
  }
  PerturbationFunction p;
  p.kind_ = PerturbationKind::constraint;
  p.x_dim_ = f.dim();
  p.y_dim_ = g.size();
  p.anchor_ = Point(g.size(), 0.0);
  p.x_domain_ = f.domain();
  p.parts_.push_back(std::move(f));
  p.constraints_ = std::move(g);
  return p;
}

PerturbationFunction PerturbationFunction::fenchel(ObjectiveFunction g, ObjectiveFunction h) {
  if (g.dim() != h.dim()) throw ValidationError("fenchel parts differ in dimension");
  PerturbationFunction p;
  p.kind_ = PerturbationKind::fenchel;
  p.x_dim_ = g.dim();
  p.y_dim_ = g.dim();
  p.anchor_ = Point(g.dim(), 0.0);
  p.x_domain_ = g.domain();
  p.parts_.push_back(std::move(g));
  p.parts_.push_back(std::move(h));
  return p;
}

PerturbationFunction PerturbationFunction::custom(ObjectiveFunction joint, std::size_t x_dim,
                                                  Point anchor) {
  if (x_dim == 0 || x_dim >= joint.dim()) {
    throw ValidationError("custom perturbation needs 0 < x_dim < joint dimension");
  }
  if (anchor.size() != joint.dim() - x_dim) {
    throw ValidationError("custom perturbation anchor has the wrong dimension");
  }
  PerturbationFunction p;
  p.kind_ = PerturbationKind::custom;
  p.x_dim_ = x_dim;
  p.y_dim_ = joint.dim() - x_dim;
  p.anchor_ = std::move(anchor);
  const auto& lo = joint.domain().lower();
  const auto& hi = joint.domain().upper();
  p.x_domain_ = Box(std::vector<double>(lo.begin(), lo.begin() + static_cast<long>(x_dim)),
                    std::vector<double>(hi.begin(), hi.begin() + static_cast<long>(x_dim)));
  p.parts_.push_back(std::move(joint));
  return p;
}

ExtendedValue PerturbationFunction::operator()(std::span<const double> x,
                                               std::span<const double> y) const {
  if (x.size() != x_dim_ || y.size() != y_dim_) {
    throw ValidationError("perturbation arguments have the wrong dimension");
  }
  switch (kind_) {
    case PerturbationKind::constraint: {
      for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (checked(constraints_[i](x), "constraint") > y[i] + tol::feasibility) return ExtendedValue::pos_inf();
      }
      return parts_[0](x);
    }
    case PerturbationKind::fenchel: {
      const ExtendedValue gx = parts_[0](x);
      if (gx.is_pos_inf()) return gx;
      Point d(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
      return gx + parts_[1](d);
    }
    case PerturbationKind::custom: {
      Point z(x.begin(), x.end());
      z.insert(z.end(), y.begin(), y.end());
      return parts_[0](z);
    }
  }
  return ExtendedValue::pos_inf();
}

ExtendedValue PerturbationFunction::objective(std::span<const double> x) const {
  return (*this)(x, anchor_);
}

const ObjectiveFunction& PerturbationFunction::base_objective() const {
  if (kind_ != PerturbationKind::constraint) {
    throw ValidationError("base_objective is defined for constraint perturbations only");
  }
  return parts_[0];
}

const std::vector<Expression>& PerturbationFunction::constraint_functions() const {
  if (kind_ != PerturbationKind::constraint) {
    throw ValidationError("constraint_functions is defined for constraint perturbations only");
  }
  return constraints_;
}

std::vector<double> PerturbationFunction::constraint_values(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(constraint_functions().size());
  for (const auto& g : constraints_) out.push_back(checked(g(x), "constraint"));
  return out;
}

const ObjectiveFunction& PerturbationFunction::fenchel_g() const {
  if (kind_ != PerturbationKind::fenchel) throw ValidationError("not a fenchel perturbation");
  return parts_[0];
}

const ObjectiveFunction& PerturbationFunction::fenchel_h() const {
  if (kind_ != PerturbationKind::fenchel) throw ValidationError("not a fenchel perturbation");
  return parts_[1];
}

std::string_view to_string(DualClass cls) {
  return cls == DualClass::affine ? "affine" : "quad";
}

DualClass dual_class_from_string(std::string_view name) {
  if (name == "affine") return DualClass::affine;
  if (name == "quad" || name == "quad_minorant") return DualClass::quad_minorant;
  throw ValidationError("unknown dual class '" + std::string(name) + "' (expected affine|quad)");
}

ElementaryClass elementary_class(DualClass cls) {
  return cls == DualClass::affine ? ElementaryClass::affine : ElementaryClass::quad_minorant;
}

ElementaryFunction standard_psi(const DualParameter& psi) {
  if (psi.cls == DualClass::affine) return ElementaryFunction::affine(psi.v, 0.0);
  return ElementaryFunction::quad_minorant(psi.a, psi.v, 0.0);
}

ExtendedValue psi_conjugate(const PerturbationFunction& p, std::span<const double> x,
                            const ElementaryFunction& psi, const Grid& y_grid) {
  if (y_grid.dim() != p.y_dim() || psi.dim() != p.y_dim()) {
    throw ValidationError("y grid or dual function dimension differs from the perturbation");
  }
  double best = -kInf;
  if (p.kind() == PerturbationKind::constraint) {
    const ExtendedValue fx = p.base_objective()(x);
    if (fx.is_pos_inf()) return ExtendedValue::neg_inf();
    const auto G = p.constraint_values(x);
    for (std::size_t j = 0; j < y_grid.size(); ++j) {
      const auto y = y_grid.point(j);
      bool feasible = true;
      for (std::size_t i = 0; i < G.size() && feasible; ++i) feasible = G[i] <= y[i] + tol::feasibility;
      if (feasible) best = std::max(best, psi(y));
    }
    if (best == -kInf) return ExtendedValue::neg_inf();
    return ExtendedValue(best) - fx;
  }
  if (p.kind() == PerturbationKind::fenchel && p.fenchel_g()(x).is_pos_inf()) {
    return ExtendedValue::neg_inf();
  }
  for (std::size_t j = 0; j < y_grid.size(); ++j) {
    const auto y = y_grid.point(j);
    const ExtendedValue v = p(x, y);
    if (v.is_pos_inf()) continue;
    if (v.is_neg_inf()) return ExtendedValue::pos_inf();
    best = std::max(best, psi(y) - v.value());
  }
  return ExtendedValue(best);
}

Lagrangian::Lagrangian(PerturbationFunction p, DualClass cls, Grid y_grid)
    : p_(std::move(p)), cls_(cls), y_grid_(std::move(y_grid)) {
  if (y_grid_.dim() != p_.y_dim()) throw ValidationError("y grid dimension differs from Y");
}

namespace {

void validate_param(const Lagrangian& L, const DualParameter& param) {
  if (param.cls != L.dual_class()) throw ValidationError("dual parameter class mismatch");
  if (param.v.size() != L.perturbation().y_dim()) {
    throw ValidationError("dual parameter has the wrong dimension");
  }
  if (!(param.a >= 0.0) || (param.cls == DualClass::affine && param.a != 0.0)) {
    throw ValidationError("dual parameter curvature is invalid for its class");
  }
}

}  // namespace

ElementaryFunction Lagrangian::psi(const DualParameter& param) const {
  validate_param(*this, param);
  if (cls_ == DualClass::affine && p_.kind() == PerturbationKind::constraint) {
    std::vector<double> ell(param.v.size());
    for (std::size_t i = 0; i < ell.size(); ++i) ell[i] = -param.v[i];
    return ElementaryFunction::affine(std::move(ell), 0.0);
  }
  return standard_psi(param);
}

ExtendedValue psi_conjugate(const PerturbationFunction& p, std::span<const double> x,
                            const DualParameter& psi, const Grid& y_grid) {
  return psi_conjugate(p, x, standard_psi(psi), y_grid);
}

DualParameter Lagrangian::parameter(const ParameterPoint& point) const {
  return DualParameter{cls_, point.a, point.ell};
}

ExtendedValue Lagrangian::eval_grid(std::span<const double> x, const DualParameter& param) const {
  const ElementaryFunction f = psi(param);
  const ExtendedValue conj = psi_conjugate(p_, x, f, y_grid_);
  return ExtendedValue(f(p_.anchor())) - conj;
}

ExtendedValue Lagrangian::operator()(std::span<const double> x, const DualParameter& param) const {
  if (p_.kind() != PerturbationKind::constraint) return eval_grid(x, param);
  validate_param(*this, param);
  const ExtendedValue fx = p_.base_objective()(x);
  if (fx.is_pos_inf()) return fx;
  const auto G = p_.constraint_values(x);
  const auto& v = param.v;
  if (cls_ == DualClass::affine) {
    double s = fx.value();
    for (std::size_t i = 0; i < G.size(); ++i) {
      if (v[i] < 0.0) return ExtendedValue::neg_inf();
      s += v[i] * G[i];
    }
    return ExtendedValue(s);
  }
  if (param.a == 0.0) {
    double s = fx.value();
    for (std::size_t i = 0; i < G.size(); ++i) {
      if (v[i] > 0.0) return ExtendedValue::neg_inf();
      s -= v[i] * G[i];
    }
    return ExtendedValue(s);
  }
  double s = fx.value();
  const auto y = augmented_inner_minimizer(G, param.a, v);
  for (std::size_t i = 0; i < G.size(); ++i) s += -v[i] * y[i] + param.a * y[i] * y[i];
  return ExtendedValue(s);
}

std::vector<ExtendedValue> Lagrangian::surface(const Grid& x_grid,
                                               std::span<const DualParameter> params) const {
  std::vector<ExtendedValue> out(x_grid.size() * params.size());
  parallel_chunks(x_grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = 0; k < params.size(); ++k) {
        out[i * params.size() + k] = (*this)(x_grid.point(i), params[k]);
      }
    }
  });
  return out;
}

ExtendedValue lagrangian_eval(const Lagrangian& L, std::span<const double> x,
                              const DualParameter& psi) {
  return L(x, psi);
}

std::vector<double> augmented_inner_minimizer(std::span<const double> g_values, double a,
                                              std::span<const double> v) {
  if (!(a > 0.0)) throw ValidationError("augmented Lagrangian needs a > 0");
  if (g_values.size() != v.size()) throw ValidationError("constraint/multiplier size mismatch");
  std::vector<double> y(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) y[i] = std::max(g_values[i], v[i] / (2.0 * a));
  return y;
}

namespace {

std::pair<double, std::vector<double>> closed_form_inputs(const ObjectiveFunction& f,
                                                          std::span<const Expression> g,
                                                          std::span<const double> x, double a,
                                                          std::size_t m) {
  if (!(a > 0.0)) {
    throw ValidationError("closed form needs a > 0; use the affine class for a = 0");
  }
  if (g.size() != m) throw ValidationError("constraint/multiplier size mismatch");
  const ExtendedValue fx = f(x);
  if (!fx.is_finite()) throw ValidationError("closed form needs x in dom f");
  std::vector<double> G;
  for (const auto& gi : g) G.push_back(checked(gi(x), "constraint"));
  return {fx.value(), std::move(G)};
}

}  // namespace

double augmented_lagrangian_closed_form(const ObjectiveFunction& f, std::span<const Expression> g,
                                        std::span<const double> x, double a,
                                        std::span<const double> v) {
  auto [s, G] = closed_form_inputs(f, g, x, a, v.size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    const double m = std::max(G[i], v[i] / (2.0 * a));
    s += -v[i] * m + a * m * m;
  }
  return s;
}

double augmented_lagrangian_multiplier_form(const ObjectiveFunction& f,
                                            std::span<const Expression> g,
                                            std::span<const double> x, double a,
                                            std::span<const double> u) {
  auto [s, G] = closed_form_inputs(f, g, x, a, u.size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    const double m = std::max(G[i], -u[i] / (2.0 * a));
    s += u[i] * m + a * m * m;
  }
  return s;
}

double lagrangian_tolerance(const Grid& y_grid, const DualParameter& psi) {
  double r2 = 0.0;
  for (std::size_t d = 0; d < y_grid.dim(); ++d) {
    const double r = std::max(std::abs(y_grid.box().lower()[d]), std::abs(y_grid.box().upper()[d]));
    r2 += r * r;
  }
  double v2 = 0.0;
  for (double v : psi.v) v2 += v * v;
  return y_grid.max_step() * (std::sqrt(v2) + 2.0 * psi.a * std::sqrt(r2)) + 1e-9;
}

DualSupremum sup_over_dual(const Lagrangian& L, std::span<const double> x,
                           const ParameterGrid& dual_pg) {
  if (dual_pg.size() == 0) throw ValidationError("dual parameter grid is empty");
  DualSupremum out{ExtendedValue::neg_inf(), std::nullopt, false};
  for (std::size_t k = 0; k < dual_pg.size(); ++k) {
    const DualParameter param = L.parameter(dual_pg[k]);
    const ExtendedValue v = L(x, param);
    if (!out.argmax || v > out.value) {
      out.value = v;
      out.argmax = param;
    }
    if (v.is_pos_inf()) break;
  }
  out.diverging = out.value.is_pos_inf() || out.value.value() > tol::diverging_ceiling;
  return out;
}

Grid default_y_grid(const PerturbationFunction& p, const Grid& x_grid,
                    const ParameterGrid& dual_pg, double step) {
  if (!(step > 0.0)) throw ValidationError("y grid step must be positive");
  if (p.kind() == PerturbationKind::fenchel) return x_grid;
  const std::size_t m = p.y_dim();
  if (p.kind() == PerturbationKind::custom) {
    // Reuse the y block of the joint domain.
    std::vector<double> lo(m), hi(m);
    std::vector<std::size_t> counts(m);
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = p.anchor()[i] - 1.0;
      hi[i] = p.anchor()[i] + 1.0;
      counts[i] = static_cast<std::size_t>(std::llround(2.0 / step)) + 1;
    }
    return Grid(Box(lo, hi), counts);
  }
  std::vector<double> lo(m, 0.0), hi(m, 0.0);
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    const auto x = x_grid.point(j);
    if (!p.base_objective()(x).is_finite()) continue;
    const auto G = p.constraint_values(x);
    for (std::size_t i = 0; i < m; ++i) {
      lo[i] = std::min(lo[i], G[i]);
      hi[i] = std::max(hi[i], G[i]);
    }
  }
  for (const auto& pt : dual_pg.points()) {
    if (pt.a <= 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) {
      const double t = pt.ell[i] / (2.0 * pt.a);
      lo[i] = std::min(lo[i], t);
      hi[i] = std::max(hi[i], t);
    }
  }
  std::vector<double> blo(m), bhi(m);
  std::vector<std::size_t> counts(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double span = std::max(hi[i] - lo[i], 1.0);
    // Symmetric around 0 so that y0 = 0 is an exact lattice point.
    const double r = std::max(std::abs(lo[i]), std::abs(hi[i])) + 0.5 * span;
    const double k = std::ceil(r / step);
    blo[i] = -k * step;
    bhi[i] = k * step;
    counts[i] = static_cast<std::size_t>(2.0 * k) + 1;
  }
  return Grid(Box(blo, bhi), counts);
}

void write_lagrangian_surface_csv(std::ostream& os, const Lagrangian& L, const Grid& x_grid,
                                  std::span<const DualParameter> params) {
  const std::size_t n = x_grid.dim();
  const std::size_t m = L.perturbation().y_dim();
  for (std::size_t d = 0; d < n; ++d) os << 'x' << d + 1 << ',';
  os << 'a';
  for (std::size_t d = 0; d < m; ++d) os << ",v" << d + 1;
  os << ",L\n";
  const auto values = L.surface(x_grid, params);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const auto x = x_grid.point(i);
    for (std::size_t k = 0; k < params.size(); ++k) {
      for (std::size_t d = 0; d < n; ++d) os << format_number(x[d]) << ',';
      os << format_number(params[k].a);
      for (double v : params[k].v) os << ',' << format_number(v);
      os << ',' << format_number(values[i * params.size() + k]) << '\n';
    }
  }
}

}  // namespace phidual
