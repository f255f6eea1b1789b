#include "phidual/conjugation.hpp"

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

void require_dims(const GridFunction& f, const ElementaryFunction& phi) {
  if (phi.dim() != f.grid.dim()) {
    throw ValidationError("elementary function dimension differs from the grid");
  }
}

// max over finite points of phi(x) - f(x); -inf when f ≡ +inf.
double conjugate_raw(const GridFunction& f, const ElementaryFunction& phi) {
  double best = -kInf;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ExtendedValue v = f.values[i];
    if (!v.is_finite()) continue;
    best = std::max(best, phi(f.grid.point(i)) - v.value());
  }
  return best;
}

// c = 0 representatives of every pg member with their conjugates.
struct SupportTable {
  std::vector<ElementaryFunction> phis;
  std::vector<double> conj;
};

SupportTable support_table(const GridFunction& f, const ParameterGrid& pg) {
  if (pg.dim() != f.grid.dim()) throw ValidationError("parameter grid dimension differs from f");
  f.require_no_neg_inf();
  SupportTable t;
  t.phis.reserve(pg.size());
  for (std::size_t k = 0; k < pg.size(); ++k) t.phis.push_back(pg.function(k));
  t.conj.assign(pg.size(), 0.0);
  parallel_chunks(pg.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) t.conj[k] = conjugate_raw(f, t.phis[k]);
  });
  return t;
}

ExtendedValue biconj_at(const SupportTable& t, std::span<const double> x) {
  double best = -kInf;
  for (std::size_t k = 0; k < t.phis.size(); ++k) {
    // f* = -inf means f ≡ +inf and then f** ≡ +inf.
    if (t.conj[k] == -kInf) return ExtendedValue::pos_inf();
    best = std::max(best, t.phis[k](x) - t.conj[k]);
  }
  return ExtendedValue(best);
}

}  // namespace

ExtendedValue conjugate(const GridFunction& f, const ElementaryFunction& phi) {
  require_dims(f, phi);
  f.require_no_neg_inf();
  return ExtendedValue(conjugate_raw(f, phi));
}

ExtendedValue conjugate(const ObjectiveFunction& f, const ElementaryFunction& phi,
                        const Grid& grid) {
  return conjugate(f.sample(grid), phi);
}

SupportCertificate is_in_support(const GridFunction& f, const ElementaryFunction& phi,
                                 double tolerance) {
  require_dims(f, phi);
  SupportCertificate cert{false, phi, kInf, f.grid.point_copy(0)};
  std::size_t worst = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ExtendedValue v = f.values[i];
    if (v.is_pos_inf()) continue;
    const double slack = v.is_neg_inf() ? -kInf : v.value() - phi(f.grid.point(i));
    if (slack < cert.min_slack) {
      cert.min_slack = slack;
      worst = i;
    }
  }
  cert.point = f.grid.point_copy(worst);
  cert.accepted = cert.min_slack >= -tolerance;
  return cert;
}

SupportCertificate is_in_support(const ObjectiveFunction& f, const ElementaryFunction& phi,
                                 const Grid& grid) {
  return is_in_support(f.sample(grid), phi, tol::support);
}

ExtendedValue best_support_offset(const GridFunction& f, const ElementaryFunction& phi) {
  return -conjugate(f, phi.with_offset(0.0));
}

bool support_is_empty_beyond_box(const ObjectiveFunction& f, const ParameterGrid& pg) {
  const std::size_t n = f.dim();
  const double a = pg.a_max();
  const double l = pg.ell_norm_max();
  std::vector<Point> directions;
  for (std::size_t i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      Point d(n, 0.0);
      d[i] = s;
      directions.push_back(std::move(d));
    }
  }
  if (n > 1 && n <= 8) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Point d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = (mask >> i & 1u) ? -inv : inv;
      directions.push_back(std::move(d));
    }
  }
  for (const auto& d : directions) {
    double prev = kInf;
    bool decreasing = true;
    for (double r : {1e2, 1e3, 1e4}) {
      Point x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = r * d[i];
      double fx = kInf;
      try {
        fx = f(x).value();
      } catch (const NumericalError&) {
        decreasing = false;
        break;
      }
      const double h = fx + a * r * r + l * r;
      if (!(h < prev)) {
        decreasing = false;
        break;
      }
      prev = h;
    }
    if (decreasing && prev < -1e8) return true;
  }
  return false;
}

std::vector<ExtendedValue> biconjugate_values(const GridFunction& f, const ParameterGrid& pg) {
  const SupportTable t = support_table(f, pg);
  std::vector<ExtendedValue> out(f.size());
  parallel_chunks(f.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = biconj_at(t, f.grid.point(i));
  });
  return out;
}

ExtendedValue biconjugate(const ObjectiveFunction& f, const ParameterGrid& pg, const Grid& grid,
                          std::span<const double> x) {
  grid.require_index(x);
  if (support_is_empty_beyond_box(f, pg)) return ExtendedValue::neg_inf();
  return biconjugate(f.sample(grid), pg, x);
}

ExtendedValue biconjugate(const GridFunction& f, const ParameterGrid& pg,
                          std::span<const double> x) {
  f.grid.require_index(x);
  return biconj_at(support_table(f, pg), x);
}

namespace {

ConvexityReport build_report(const GridFunction& f, std::vector<ExtendedValue> biconj,
                             const ParameterGrid& pg) {
  ConvexityReport r{f.grid,
                    f.values,
                    std::move(biconj),
                    {},
                    ExtendedValue(0.0),
                    0,
                    tol::biconj(f.grid.max_step(), pg.a_max()),
                    false};
  r.gap.reserve(f.size());
  bool have_max = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ExtendedValue fv = r.f[i];
    const ExtendedValue bv = r.biconj[i];
    ExtendedValue g;
    if (fv.is_pos_inf()) {
      g = bv.is_pos_inf() ? ExtendedValue(0.0) : ExtendedValue::pos_inf();
    } else if (bv.is_neg_inf()) {
      g = ExtendedValue::pos_inf();
    } else {
      g = fv - bv;
    }
    r.gap.push_back(g);
    // The summary covers dom f only; off dom f a grid cannot reach +inf.
    if (fv.is_finite() && (!have_max || g > r.max_gap)) {
      r.max_gap = g;
      r.max_gap_index = i;
      have_max = true;
    }
  }
  r.phi_convex_on_grid = have_max && r.max_gap.value() <= r.tolerance;
  return r;
}

}  // namespace

ConvexityReport phi_convexity_report(const GridFunction& f, const ParameterGrid& pg) {
  return build_report(f, biconjugate_values(f, pg), pg);
}

ConvexityReport phi_convexity_report(const ObjectiveFunction& f, const ParameterGrid& pg,
                                     const Grid& grid) {
  GridFunction sampled = f.sample(grid);
  if (support_is_empty_beyond_box(f, pg)) {
    return build_report(sampled, std::vector<ExtendedValue>(grid.size(), ExtendedValue::neg_inf()),
                        pg);
  }
  auto biconj = biconjugate_values(sampled, pg);
  return build_report(sampled, std::move(biconj), pg);
}

void write_gap_table_csv(std::ostream& os, const ConvexityReport& report) {
  const std::size_t n = report.grid.dim();
  for (std::size_t d = 0; d < n; ++d) os << 'x' << d + 1 << ',';
  os << "f,f_biconj,gap\n";
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    const auto p = report.grid.point(i);
    for (std::size_t d = 0; d < n; ++d) os << format_number(p[d]) << ',';
    os << format_number(report.f[i]) << ',' << format_number(report.biconj[i]) << ','
       << format_number(report.gap[i]) << '\n';
  }
}

ExtendedValue young_residual(const GridFunction& f, const ElementaryFunction& phi,
                             std::span<const double> x) {
  const std::size_t idx = f.grid.require_index(x);
  return f.at(idx) + conjugate(f, phi) - ExtendedValue(phi(f.grid.point(idx)));
}

YoungVerdict young_equality_check(const GridFunction& f, const ElementaryFunction& phi,
                                  std::span<const double> x) {
  const std::size_t idx = f.grid.require_index(x);
  if (!f.at(idx).is_finite()) throw ValidationError("young check needs f(x) finite");
  const ExtendedValue r = young_residual(f, phi, x);
  return r.is_finite() && std::abs(r.value()) <= tol::eq ? YoungVerdict::equality_hence_subgradient
                                                          : YoungVerdict::strict_inequality;
}

YoungVerdict young_equality_check(const ObjectiveFunction& f, const ElementaryFunction& phi,
                                  std::span<const double> x, const Grid& grid) {
  return young_equality_check(f.sample(grid), phi, x);
}

}  // namespace phidual
