#include "phidual/duality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "phidual/conjugation.hpp"
#include "phidual/errors.hpp"
#include "phidual/parallel.hpp"
#include "phidual/tolerances.hpp"

namespace phidual {

namespace {

// |lhs - rhs| with equal infinities at distance 0.
double distance(ExtendedValue lhs, ExtendedValue rhs) {
  if (lhs == rhs) return 0.0;
  if (!lhs.is_finite() || !rhs.is_finite()) return std::numeric_limits<double>::infinity();
  return std::abs(lhs.value() - rhs.value());
}

double tol_gap_for(ExtendedValue primal, ExtendedValue dual) {
  const double p = primal.is_finite() ? primal.value() : 0.0;
  const double d = dual.is_finite() ? dual.value() : 0.0;
  return tol::gap(p, d);
}

}  // namespace

std::vector<DualParameter> dual_parameters(const Lagrangian& L, const ParameterGrid& dual_pg) {
  if (dual_pg.cls() != elementary_class(L.dual_class())) {
    throw ValidationError("dual parameter grid class differs from the Lagrangian's dual class");
  }
  if (dual_pg.dim() != L.perturbation().y_dim()) {
    throw ValidationError("dual parameter grid dimension differs from Y");
  }
  std::vector<DualParameter> out;
  out.reserve(dual_pg.size());
  for (const auto& p : dual_pg.points()) out.push_back(L.parameter(p));
  return out;
}

PrimalValue primal_value(const Lagrangian& L, const Grid& x_grid, const ParameterGrid& dual_pg) {
  const auto& p = L.perturbation();
  if (x_grid.dim() != p.x_dim()) throw ValidationError("x grid dimension differs from X");
  dual_parameters(L, dual_pg);
  const std::size_t n = x_grid.size();
  std::vector<ExtendedValue> direct(n), minimax(n);
  parallel_chunks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto x = x_grid.point(i);
      direct[i] = p.objective(x);
      minimax[i] = sup_over_dual(L, x, dual_pg).value;
    }
  });
  const GridFunction fd(x_grid, std::move(direct));
  const GridFunction fm(x_grid, std::move(minimax));
  const Extremum ed = grid_extremum(fd, ExtremumMode::min);
  const Extremum em = grid_extremum(fm, ExtremumMode::min);
  PrimalValue out;
  out.direct = ed.value;
  out.minimax = em.value;
  out.argpoint = ed.argpoint;
  out.all_infeasible = ed.value.is_pos_inf();
  out.agree = distance(ed.value, em.value) <= tol_gap_for(ed.value, em.value);
  return out;
}

DualValue dual_value(const Lagrangian& L, const Grid& x_grid, const ParameterGrid& dual_pg) {
  const auto params = dual_parameters(L, dual_pg);
  DualValue out;
  out.dual_function.resize(params.size());
  parallel_chunks(params.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      ExtendedValue best = ExtendedValue::pos_inf();
      for (std::size_t i = 0; i < x_grid.size(); ++i) {
        const ExtendedValue v = L(x_grid.point(i), params[k]);
        if (v < best) best = v;
        if (best.is_neg_inf()) break;
      }
      out.dual_function[k] = best;
    }
  });
  out.value = ExtendedValue::neg_inf();
  for (auto q : out.dual_function) out.value = std::max(out.value, q);
  if (out.value.is_finite()) {
    const double cut = out.value.value() - tol::argmax(out.value.value());
    for (std::size_t k = 0; k < params.size(); ++k) {
      const auto q = out.dual_function[k];
      if (q.is_finite() && q.value() >= cut) out.argmax.push_back(params[k]);
    }
  } else if (out.value.is_pos_inf()) {
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (out.dual_function[k].is_pos_inf()) out.argmax.push_back(params[k]);
    }
  }
  return out;
}

ValueFunctionTable value_function(const PerturbationFunction& p, const Grid& x_grid,
                                  const Grid& y_grid) {
  if (x_grid.dim() != p.x_dim() || y_grid.dim() != p.y_dim()) {
    throw ValidationError("grid dimensions differ from the perturbation");
  }
  std::vector<ExtendedValue> values(y_grid.size(), ExtendedValue::pos_inf());
  if (p.kind() == PerturbationKind::constraint) {
    std::vector<double> fx;
    std::vector<std::vector<double>> gx;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      const auto x = x_grid.point(i);
      const ExtendedValue f = p.base_objective()(x);
      if (!f.is_finite()) continue;
      fx.push_back(f.value());
      gx.push_back(p.constraint_values(x));
    }
    parallel_chunks(y_grid.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) {
        const auto y = y_grid.point(j);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < fx.size(); ++i) {
          bool ok = true;
          for (std::size_t c = 0; c < y.size() && ok; ++c) ok = gx[i][c] <= y[c] + tol::feasibility;
          if (ok) best = std::min(best, fx[i]);
        }
        values[j] = ExtendedValue(best);
      }
    });
  } else {
    parallel_chunks(y_grid.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) {
        const auto y = y_grid.point(j);
        ExtendedValue best = ExtendedValue::pos_inf();
        for (std::size_t i = 0; i < x_grid.size(); ++i) best = std::min(best, p(x_grid.point(i), y));
        values[j] = best;
      }
    });
  }
  ValueFunctionTable table{GridFunction(y_grid, std::move(values)), 0};
  const auto anchor = y_grid.find(p.anchor());
  if (!anchor) throw ValidationError("y grid does not contain the anchor y0");
  table.anchor_index = *anchor;
  return table;
}

ExtendedValue value_biconjugate_at_anchor(const ValueFunctionTable& table, const Lagrangian& L,
                                          const ParameterGrid& dual_pg) {
  const auto params = dual_parameters(L, dual_pg);
  const auto& V = table.values;
  V.require_no_neg_inf();
  const auto y0 = V.grid.point(table.anchor_index);
  std::vector<double> vals(params.size());
  bool all_inf = false;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const ElementaryFunction psi = L.psi(params[k]);
    const ExtendedValue conj = conjugate(V, psi);
    if (conj.is_neg_inf()) {
      all_inf = true;
      break;
    }
    vals[k] = psi(y0) - conj.value();
  }
  if (all_inf) return ExtendedValue::pos_inf();
  return ExtendedValue(*std::max_element(vals.begin(), vals.end()));
}

bool parameter_sets_match(std::span<const DualParameter> lhs, std::span<const DualParameter> rhs,
                          double tolerance) {
  auto dist = [](const DualParameter& a, const DualParameter& b) {
    if (a.v.size() != b.v.size()) return std::numeric_limits<double>::infinity();
    double s = (a.a - b.a) * (a.a - b.a);
    for (std::size_t i = 0; i < a.v.size(); ++i) s += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
    return std::sqrt(s);
  };
  auto covered = [&](std::span<const DualParameter> xs, std::span<const DualParameter> ys) {
    for (const auto& x : xs) {
      bool found = false;
      for (const auto& y : ys) {
        if (dist(x, y) <= tolerance) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  };
  return covered(lhs, rhs) && covered(rhs, lhs);
}

namespace {

// Connected finite region of V around the anchor (axis neighbours).
std::vector<bool> finite_region(const GridFunction& V, std::size_t anchor) {
  const Grid& g = V.grid;
  std::vector<bool> mask(g.size(), false);
  if (!V.at(anchor).is_finite()) return mask;
  std::deque<std::size_t> queue{anchor};
  mask[anchor] = true;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    auto idx = g.multi_index(cur);
    for (std::size_t d = 0; d < g.dim(); ++d) {
      for (int s : {-1, 1}) {
        if (s < 0 && idx[d] == 0) continue;
        if (s > 0 && idx[d] + 1 >= g.points_per_dim()[d]) continue;
        auto nb = idx;
        nb[d] = s < 0 ? idx[d] - 1 : idx[d] + 1;
        const std::size_t flat = g.flat_index(nb);
        if (!mask[flat] && V.at(flat).is_finite()) {
          mask[flat] = true;
          queue.push_back(flat);
        }
      }
    }
  }
  return mask;
}

bool interior(const Grid& g, const std::vector<bool>& mask, std::size_t at) {
  const auto idx = g.multi_index(at);
  for (std::size_t d = 0; d < g.dim(); ++d) {
    if (idx[d] == 0 || idx[d] + 1 >= g.points_per_dim()[d]) return false;
    for (int s : {-1, 1}) {
      auto nb = idx;
      nb[d] = s < 0 ? idx[d] - 1 : idx[d] + 1;
      if (!mask[g.flat_index(nb)]) return false;
    }
  }
  return true;
}

}  // namespace

DualityReport certify(const Lagrangian& L, const Grid& x_grid, const ParameterGrid& dual_pg,
                      const CertifyOptions& options) {
  DualityReport r;
  const PrimalValue pv = primal_value(L, x_grid, dual_pg);
  const DualValue dv = dual_value(L, x_grid, dual_pg);
  r.primal_value = pv.direct;
  r.primal_minimax = pv.minimax;
  r.primal_routes_agree = pv.agree;
  r.dual_value = dv.value;
  r.dual_argmax = dv.argmax;
  if (pv.direct.is_pos_inf() || dv.value.is_neg_inf()) {
    r.gap = pv.direct == dv.value ? ExtendedValue(0.0) : ExtendedValue::pos_inf();
  } else {
    r.gap = pv.direct - dv.value;
  }
  r.tol_gap = tol_gap_for(pv.direct, dv.value);
  r.certifications.weak_duality_ok =
      dv.value.is_neg_inf() || pv.direct.is_pos_inf() ||
      (dv.value.is_finite() && pv.direct.is_finite() &&
       dv.value.value() <= pv.direct.value() + tol::support);
  r.certifications.zero_gap = r.gap.is_finite() && r.gap.value() <= r.tol_gap;

  const ValueFunctionTable table = value_function(L.perturbation(), x_grid, L.y_grid());
  const GridFunction& V = table.values;
  r.v_at_anchor = V.at(table.anchor_index);
  r.v_biconj_at_anchor = value_biconjugate_at_anchor(table, L, dual_pg);
  const bool v_closed = distance(r.v_at_anchor, r.v_biconj_at_anchor) <= r.tol_gap;
  r.certifications.v_psi_convex_at_anchor = v_closed;
  r.zero_gap_matches_value_function = r.certifications.zero_gap == v_closed;
  r.dual_matches_v_biconj = distance(dv.value, r.v_biconj_at_anchor) <= r.tol_gap;

  if (r.v_at_anchor.is_finite()) {
    const auto params = dual_parameters(L, dual_pg);
    const auto y0 = V.grid.point(table.anchor_index);
    std::vector<char> accepted(params.size(), 0);
    parallel_chunks(params.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        accepted[k] = is_subgradient(V, L.psi(params[k]), y0, 0.0).accepted;
      }
    });
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (accepted[k]) r.subdifferential_at_anchor.push_back(params[k]);
    }
  }
  r.certifications.strong_duality = !r.subdifferential_at_anchor.empty();
  if (r.subdifferential_at_anchor.empty()) {
    r.argmax_matches_subdifferential = Verdict::undetermined;
  } else {
    r.argmax_matches_subdifferential =
        parameter_sets_match(r.dual_argmax, r.subdifferential_at_anchor, tol::hull)
            ? Verdict::holds
            : Verdict::fails;
  }

  const std::vector<bool> region = finite_region(V, table.anchor_index);
  r.anchor_interior = r.v_at_anchor.is_finite() && interior(V.grid, region, table.anchor_index);
  if (r.v_at_anchor.is_finite()) {
    const auto para = paraconvexity_modulus(V, options.paraconvexity_candidates, region);
    r.v_paraconvexity_modulus = para.modulus;
    r.certifications.v_paraconvex = para.modulus.has_value();
  }
  if (L.dual_class() == DualClass::quad_minorant && r.certifications.v_paraconvex &&
      r.anchor_interior) {
    r.paraconvex_consequence = r.certifications.zero_gap && !r.dual_argmax.empty()
                                   ? Verdict::holds
                                   : Verdict::fails;
  }
  return r;
}

}  // namespace phidual
