#include "phidual/subdifferential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "phidual/conjugation.hpp"
#include "phidual/errors.hpp"
#include "phidual/parallel.hpp"
#include "phidual/report_io.hpp"
#include "phidual/tolerances.hpp"

namespace phidual {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_base(const GridFunction& f, std::size_t idx) {
  const ExtendedValue v = f.at(idx);
  if (!v.is_finite()) throw ValidationError("subgradient base point must have f(xbar) finite");
  return v.value();
}

SubgradientCheck check_at(const GridFunction& f, const ElementaryFunction& phi, std::size_t bar,
                          double fbar, double eps) {
  const auto xbar = f.grid.point(bar);
  const double phibar = phi(xbar);
  SubgradientCheck out{false, kInf, {}};
  std::size_t worst = bar;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ExtendedValue v = f.values[i];
    if (v.is_pos_inf()) continue;
    const double s = v.is_neg_inf() ? -kInf : v.value() - fbar - (phi(f.grid.point(i)) - phibar) + eps;
    if (s < out.min_slack) {
      out.min_slack = s;
      worst = i;
    }
  }
  out.worst_point = f.grid.point_copy(worst);
  out.accepted = out.min_slack >= -tol::eq;
  return out;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

SubgradientCheck is_subgradient(const GridFunction& f, const ElementaryFunction& phi,
                                std::span<const double> xbar, double eps) {
  if (eps < 0.0) throw ValidationError("epsilon must be >= 0");
  if (phi.dim() != f.grid.dim()) throw ValidationError("elementary function dimension mismatch");
  const std::size_t bar = f.grid.require_index(xbar);
  return check_at(f, phi, bar, finite_base(f, bar), eps);
}

SubgradientCheck is_subgradient(const ObjectiveFunction& f, const ElementaryFunction& phi,
                                std::span<const double> xbar, double eps, const Grid& grid) {
  return is_subgradient(f.sample(grid), phi, xbar, eps);
}

SubdifferentialSample estimate_subdifferential(const GridFunction& f, std::span<const double> xbar,
                                               double eps, const ParameterGrid& pg) {
  if (eps < 0.0) throw ValidationError("epsilon must be >= 0");
  if (pg.dim() != f.grid.dim()) throw ValidationError("parameter grid dimension mismatch");
  const std::size_t bar = f.grid.require_index(xbar);
  const double fbar = finite_base(f, bar);

  std::vector<char> accepted(pg.size(), 0);
  std::vector<double> slack(pg.size(), 0.0);
  parallel_chunks(pg.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto c = check_at(f, pg.function(k), bar, fbar, eps);
      accepted[k] = c.accepted;
      slack[k] = c.min_slack;
    }
  });

  SubdifferentialSample s{f.grid.point_copy(bar), eps, pg.cls(), {}, {}};
  for (std::size_t k = 0; k < pg.size(); ++k) {
    if (!accepted[k]) continue;
    s.members.push_back(LscSubgradient{pg[k].a, pg[k].ell});
    s.slacks.push_back(slack[k]);
  }
  if (s.members.empty() && eps > 0.0 && phi_convexity_report(f, pg).phi_convex_on_grid) {
    throw DiscretizationError(
        "sampled epsilon-subdifferential is empty although f is Phi-convex on the grid; "
        "enlarge the parameter grid");
  }
  return s;
}

SubdifferentialSample estimate_subdifferential(const ObjectiveFunction& f,
                                               std::span<const double> xbar, double eps,
                                               const ParameterGrid& pg, const Grid& grid) {
  return estimate_subdifferential(f.sample(grid), xbar, eps, pg);
}

void write_subdifferential_csv(std::ostream& os, const SubdifferentialSample& sample) {
  const std::size_t n = sample.base_point.size();
  os << 'a';
  for (std::size_t d = 0; d < n; ++d) os << ",v" << d + 1;
  os << ",slack\n";
  for (std::size_t k = 0; k < sample.members.size(); ++k) {
    os << format_number(sample.members[k].a);
    for (double v : sample.members[k].v) os << ',' << format_number(v);
    os << ',' << format_number(sample.slacks[k]) << '\n';
  }
}

namespace {

using Vec = std::vector<double>;

Vec embed(const LscSubgradient& s) {
  Vec out;
  out.reserve(s.v.size() + 1);
  out.push_back(s.a);
  out.insert(out.end(), s.v.begin(), s.v.end());
  return out;
}

LscSubgradient unembed(const Vec& p) {
  return LscSubgradient{p[0], Vec(p.begin() + 1, p.end())};
}

double norm(const Vec& p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return std::sqrt(s);
}

// Weight mu on `p` minimizing |mu p + (1 - mu) q|, and the minimizer.
std::pair<double, Vec> project_origin(const Vec& p, const Vec& q) {
  double dd = 0.0;
  double qd = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    dd += d * d;
    qd += q[i] * d;
  }
  double mu = dd > 0.0 ? std::clamp(-qd / dd, 0.0, 1.0) : 1.0;
  Vec z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) z[i] = mu * p[i] + (1.0 - mu) * q[i];
  return {mu, std::move(z)};
}

}  // namespace

ZeroSubgradientResult zero_subgradient_condition(const GridFunction& f, const GridFunction& h,
                                                 std::span<const double> x1,
                                                 std::span<const double> x2,
                                                 const ParameterGrid& pg) {
  const auto sf = estimate_subdifferential(f, x1, 0.0, pg);
  const auto sh = estimate_subdifferential(h, x2, 0.0, pg);
  ZeroSubgradientResult r;
  r.f_members = sf.members.size();
  r.h_members = sh.members.size();
  if (sf.members.empty() || sh.members.empty()) {
    r.verdict = Verdict::undetermined;
    return r;
  }
  std::vector<Vec> P;
  std::vector<Vec> Q;
  for (const auto& m : sf.members) P.push_back(embed(m));
  for (const auto& m : sh.members) Q.push_back(embed(m));

  double best = kInf;
  auto record = [&](double res, double lambda, const Vec& p, const Vec& q) {
    if (res < best) {
      best = res;
      r.lambda = lambda;
      r.p = unembed(p);
      r.q = unembed(q);
      r.residual = res;
    }
    return res <= tol::hull;
  };

  for (const auto& p : P) {
    if (record(norm(p), 1.0, p, Q.front())) break;
  }
  if (best > tol::hull) {
    for (const auto& q : Q) {
      if (record(norm(q), 0.0, P.front(), q)) break;
    }
  }
  for (std::size_t i = 0; i < P.size() && best > tol::hull; ++i) {
    for (std::size_t j = 0; j < Q.size(); ++j) {
      auto [mu, z] = project_origin(P[i], Q[j]);
      if (record(norm(z), mu, P[i], Q[j])) break;
    }
  }
  // Combinations inside one set land in that set's hull.
  for (std::size_t i = 0; i < P.size() && best > tol::hull; ++i) {
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      auto [mu, z] = project_origin(P[i], P[j]);
      (void)mu;
      if (record(norm(z), 1.0, z, Q.front())) break;
    }
  }
  for (std::size_t i = 0; i < Q.size() && best > tol::hull; ++i) {
    for (std::size_t j = i + 1; j < Q.size(); ++j) {
      auto [mu, z] = project_origin(Q[i], Q[j]);
      (void)mu;
      if (record(norm(z), 0.0, P.front(), z)) break;
    }
  }
  r.verdict = best <= tol::hull ? Verdict::holds : Verdict::fails;
  return r;
}

ZeroSubgradientResult zero_subgradient_condition(const ObjectiveFunction& f,
                                                 const ObjectiveFunction& h,
                                                 std::span<const double> x1,
                                                 std::span<const double> x2,
                                                 const ParameterGrid& pg, const Grid& grid) {
  return zero_subgradient_condition(f.sample(grid), h.sample(grid), x1, x2, pg);
}

namespace {

struct PairScan {
  double midpoint = 0.0;
  double weighted = 0.0;
  double plain = 0.0;
  std::size_t pairs = 0;
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  bool has_worst = false;
};

}  // namespace

ParaconvexityResult paraconvexity_modulus(const GridFunction& f,
                                          std::span<const double> candidates,
                                          const std::vector<bool>& mask, std::size_t pair_budget) {
  const Grid& g = f.grid;
  const std::size_t n = g.dim();
  if (!mask.empty() && mask.size() != g.size()) {
    throw ValidationError("paraconvexity mask needs one entry per grid point");
  }
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (!(candidates[k] > 0.0) || (k > 0 && !(candidates[k] > candidates[k - 1]))) {
      throw ValidationError("paraconvexity candidates must be positive and increasing");
    }
  }
  auto selected = [&](std::size_t i) {
    return f.values[i].is_finite() && (mask.empty() || mask[i]);
  };
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (selected(i)) idx.push_back(i);
  }
  std::vector<std::vector<std::size_t>> multi(g.size());
  for (std::size_t i : idx) multi[i] = g.multi_index(i);

  // Requirement that the value at the lattice point between i and j (at
  // fraction num/den from i) imposes; +inf values make the pair a violation.
  auto value_between = [&](std::size_t i, std::size_t j, long num, long den) -> double {
    std::vector<std::size_t> m(n);
    for (std::size_t d = 0; d < n; ++d) {
      const long a = static_cast<long>(multi[i][d]);
      const long b = static_cast<long>(multi[j][d]);
      m[d] = static_cast<std::size_t>(a + (b - a) * num / den);
    }
    const ExtendedValue v = f.at(g.flat_index(m));
    return v.is_finite() ? v.value() : kInf;
  };

  const std::size_t chunks = std::max<std::size_t>(1, idx.size());
  std::vector<PairScan> scans(chunks);
  const std::size_t budget_per_row = pair_budget / std::max<std::size_t>(1, idx.size()) + 1;
  parallel_chunks(idx.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      PairScan& s = scans[r];
      const std::size_t i = idx[r];
      const double fi = f.values[i].value();
      const auto xi = g.point(i);
      for (std::size_t c = r + 1; c < idx.size() && s.pairs < budget_per_row; ++c) {
        const std::size_t j = idx[c];
        bool div2 = true, div3 = true, div4 = true;
        double d2 = 0.0;
        const auto xj = g.point(j);
        for (std::size_t d = 0; d < n; ++d) {
          const long diff = static_cast<long>(multi[j][d]) - static_cast<long>(multi[i][d]);
          div2 = div2 && diff % 2 == 0;
          div3 = div3 && diff % 3 == 0;
          div4 = div4 && diff % 4 == 0;
          d2 += (xi[d] - xj[d]) * (xi[d] - xj[d]);
        }
        if (!div2 && !div3 && !div4) continue;
        const double fj = f.values[j].value();
        ++s.pairs;
        if (div2) {
          const double need = (value_between(i, j, 1, 2) - 0.5 * (fi + fj) - tol::eq) * 4.0 / d2;
          if (need > s.midpoint || (std::isinf(need) && !s.has_worst)) {
            s.midpoint = std::max(s.midpoint, need);
            s.worst_i = i;
            s.worst_j = j;
            s.has_worst = true;
          }
        }
        auto t_form = [&](long num, long den) {
          // Point t*x_j + (1-t)*x_i with t = num/den.
          const double t = static_cast<double>(num) / static_cast<double>(den);
          const double excess = value_between(i, j, num, den) - t * fj - (1.0 - t) * fi - tol::eq;
          s.weighted = std::max(s.weighted, excess / (t * (1.0 - t) * d2));
          s.plain = std::max(s.plain, excess / d2);
        };
        if (div3) {
          t_form(1, 3);
          t_form(2, 3);
        }
        if (div4) {
          t_form(1, 4);
          t_form(3, 4);
        }
      }
    }
  });

  ParaconvexityResult out;
  bool has_worst = false;
  std::size_t wi = 0, wj = 0;
  double worst_need = 0.0;
  for (const auto& s : scans) {
    out.required_midpoint = std::max(out.required_midpoint, s.midpoint);
    out.required_t_weighted = std::max(out.required_t_weighted, s.weighted);
    out.required_t_plain = std::max(out.required_t_plain, s.plain);
    out.pairs_scanned += s.pairs;
    if (s.has_worst && (!has_worst || s.midpoint > worst_need)) {
      has_worst = true;
      worst_need = s.midpoint;
      wi = s.worst_i;
      wj = s.worst_j;
    }
  }
  if (has_worst) out.worst_pair = std::make_pair(g.point_copy(wi), g.point_copy(wj));
  for (double c : candidates) {
    if (c >= out.required_midpoint) {
      out.modulus = c;
      break;
    }
  }
  const double cmax = candidates.empty() ? 0.0 : candidates.back();
  const bool both_reject = out.required_midpoint > cmax && out.required_t_weighted > cmax;
  const bool weighted_consistent =
      out.required_t_weighted <=
      out.required_midpoint + 0.05 * std::max(1.0, out.required_midpoint);
  const bool plain_consistent =
      out.required_t_plain <= out.required_t_weighted * (2.0 / 9.0) + 1e-12 ||
      std::isinf(out.required_t_plain);
  out.cross_check_ok = (both_reject || weighted_consistent) && plain_consistent;
  return out;
}

ParaconvexityResult paraconvexity_modulus(const ObjectiveFunction& f, const Grid& grid,
                                          std::span<const double> candidates) {
  return paraconvexity_modulus(f.sample(grid), candidates);
}

}  // namespace phidual
