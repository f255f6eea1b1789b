#include "phidual/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "phidual/conjugation.hpp"
#include "phidual/errors.hpp"
#include "phidual/parallel.hpp"
#include "phidual/tolerances.hpp"

namespace phidual {

std::string_view to_string(IntersectionForm form) {
  switch (form) {
    case IntersectionForm::general_t: return "general_t";
    case IntersectionForm::lsc_sublevel: return "lsc_sublevel";
    case IntersectionForm::affine_algebraic: return "affine_algebraic";
  }
  return "?";
}

namespace {

void require_query(const IntersectionQuery& q, const Grid& grid) {
  if (q.phi1.dim() != grid.dim() || q.phi2.dim() != grid.dim()) {
    throw ValidationError("intersection query dimension differs from the grid");
  }
  if (q.t_steps < 2) throw ValidationError("t grid needs at least 2 points");
}

}  // namespace

IntersectionVerdict intersection_general(const IntersectionQuery& q, const Grid& grid) {
  require_query(q, grid);
  const std::size_t n = grid.size();
  std::vector<double> u(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = q.phi1(grid.point(i));
    w[i] = q.phi2(grid.point(i));
  }
  std::vector<double> ts;
  for (std::size_t k = 0; k < q.t_steps; ++k) {
    ts.push_back(static_cast<double>(k) / static_cast<double>(q.t_steps - 1));
  }
  std::vector<double> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] == w[i]) continue;
    const double t = (q.alpha - w[i]) / (u[i] - w[i]);
    if (t >= 0.0 && t <= 1.0) roots.push_back(t);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  ts.insert(ts.end(), roots.begin(), roots.end());
  for (std::size_t k = 0; k + 1 < roots.size(); ++k) ts.push_back(0.5 * (roots[k] + roots[k + 1]));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  IntersectionVerdict out;
  out.form_used = IntersectionForm::general_t;
  for (double t : ts) {
    std::optional<std::size_t> hit1;
    bool hit2 = false;
    for (std::size_t i = 0; i < n && !(hit1 && hit2); ++i) {
      if (!(t * u[i] + (1.0 - t) * w[i] < q.alpha)) continue;
      if (!hit1 && u[i] < q.alpha) hit1 = i;
      if (w[i] < q.alpha) hit2 = true;
    }
    if (hit1 && hit2) {
      out.holds = false;
      out.violating_t = t;
      out.violating_point = grid.point_copy(*hit1);
      return out;
    }
  }
  out.holds = true;
  return out;
}

IntersectionVerdict intersection_lsc(const IntersectionQuery& q, const Grid& grid) {
  require_query(q, grid);
  if (!q.phi1.is_lsc_class() || !q.phi2.is_lsc_class()) {
    throw ValidationError("sublevel intersection form needs Phi_lsc functions (a >= 0 minorants)");
  }
  IntersectionVerdict out;
  out.form_used = IntersectionForm::lsc_sublevel;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.point(i);
    if (q.phi1(x) < q.alpha && q.phi2(x) < q.alpha) {
      out.violating_point = grid.point_copy(i);
      return out;
    }
  }
  out.holds = true;
  return out;
}

AffineIntersectionResult intersection_affine_algebraic(std::span<const double> z1, double d1,
                                                       std::span<const double> z2, double d2,
                                                       double inf_f, double eps) {
  if (z1.size() != z2.size()) throw ValidationError("slope vectors differ in dimension");
  if (!(eps > 0.0)) throw ValidationError("epsilon must be positive");
  auto ok = [&](double t) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < z1.size(); ++i) {
      const double c = t * z1[i] + (1.0 - t) * z2[i];
      r2 += c * c;
    }
    return std::sqrt(r2) <= tol::hull && t * d1 + (1.0 - t) * d2 >= inf_f - eps;
  };
  std::vector<double> ts;
  double dd = 0.0, zd = 0.0;
  for (std::size_t i = 0; i < z1.size(); ++i) {
    const double d = z1[i] - z2[i];
    dd += d * d;
    zd += z2[i] * d;
  }
  if (dd > 0.0) ts.push_back(std::clamp(-zd / dd, 0.0, 1.0));
  for (int k = 0; k <= 256; ++k) ts.push_back(k / 256.0);
  for (double t : ts) {
    if (ok(t)) return {true, t};
  }
  return {false, std::nullopt};
}

namespace {

struct Member {
  std::size_t dual = 0;
  ElementaryFunction phi;
  double score = 0.0;
  double a = 0.0;
  double ell_norm = 0.0;
};

double vnorm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

WitnessSearchResult search_intersection_witness(const Lagrangian& L, double alpha,
                                                std::span<const DualParameter> dual_samples,
                                                const ParameterGrid& pg, const Grid& x_grid,
                                                const WitnessSearchOptions& options) {
  if (pg.dim() != x_grid.dim()) throw ValidationError("support parameter grid dimension mismatch");
  const bool lsc = pg.cls() != ElementaryClass::quad_majorant;
  const IntersectionForm form = lsc ? IntersectionForm::lsc_sublevel : IntersectionForm::general_t;

  std::vector<std::size_t> order(dual_samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto& a = dual_samples[i];
    const auto& b = dual_samples[j];
    if (a.a != b.a) return a.a < b.a;
    return vnorm(a.v) < vnorm(b.v);
  });

  const std::size_t npts = x_grid.size();
  const std::size_t words = (npts + 63) / 64;
  std::vector<ElementaryFunction> base;
  base.reserve(pg.size());
  for (std::size_t k = 0; k < pg.size(); ++k) base.push_back(pg.function(k));

  WitnessSearchResult res;
  std::vector<Member> members;
  std::vector<std::uint64_t> bits;  // words per member

  for (std::size_t di : order) {
    const DualParameter& psi = dual_samples[di];
    ++res.duals_considered;
    std::vector<ExtendedValue> lv(npts);
    parallel_chunks(npts, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) lv[i] = L(x_grid.point(i), psi);
    });
    if (std::any_of(lv.begin(), lv.end(), [](ExtendedValue v) { return v.is_neg_inf(); })) continue;
    GridFunction lf(x_grid, std::move(lv));
    const Extremum argmin = grid_extremum(lf, ExtremumMode::min);
    if (!argmin.index) continue;
    const auto xstar = x_grid.point(*argmin.index);

    std::vector<Member> fresh;
    for (std::size_t k = 0; k < base.size(); ++k) {
      const ExtendedValue c = best_support_offset(lf, base[k]);
      if (!c.is_finite()) continue;
      ElementaryFunction phi = base[k].with_offset(c.value());
      const double score = phi(xstar);
      fresh.push_back(Member{di, std::move(phi), score, pg[k].a, vnorm(pg[k].ell)});
    }
    std::stable_sort(fresh.begin(), fresh.end(), [](const Member& x, const Member& y) {
      if (x.score != y.score) return x.score > y.score;
      if (x.a != y.a) return x.a < y.a;
      return x.ell_norm < y.ell_norm;
    });
    if (fresh.size() > options.max_members_per_dual) {
      fresh.erase(fresh.begin() + static_cast<long>(options.max_members_per_dual), fresh.end());
    }

    for (auto& m : fresh) {
      const std::size_t j = members.size();
      members.push_back(std::move(m));
      ++res.members_considered;
      bits.resize(bits.size() + words, 0);
      std::uint64_t* bj = bits.data() + j * words;
      for (std::size_t i = 0; i < npts; ++i) {
        if (members[j].phi(x_grid.point(i)) < alpha) bj[i / 64] |= std::uint64_t{1} << (i % 64);
      }
      for (std::size_t i = 0; i <= j; ++i) {
        if (res.pairs_checked >= options.max_pairs) {
          res.budget_hit = true;
          return res;
        }
        ++res.pairs_checked;
        bool holds;
        if (lsc) {
          const std::uint64_t* bi = bits.data() + i * words;
          holds = true;
          for (std::size_t w = 0; w < words && holds; ++w) holds = (bi[w] & bj[w]) == 0;
        } else {
          holds = intersection_general(IntersectionQuery{members[i].phi, members[j].phi, alpha},
                                       x_grid)
                      .holds;
        }
        if (holds) {
          res.witness = IntersectionWitness{alpha,
                                            dual_samples[members[i].dual],
                                            dual_samples[members[j].dual],
                                            members[i].phi,
                                            members[j].phi,
                                            form};
          return res;
        }
      }
    }
  }
  return res;
}

}  // namespace phidual
