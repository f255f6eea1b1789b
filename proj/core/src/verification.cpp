#include "phidual/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "phidual/catalog.hpp"
#include "phidual/conjugation.hpp"
#include "phidual/duality.hpp"
#include "phidual/minimax.hpp"
#include "phidual/report_io.hpp"
#include "phidual/subdifferential.hpp"
#include "phidual/tolerances.hpp"

namespace phidual {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* cls_name(DualClass c) { return c == DualClass::affine ? "affine" : "quad"; }

// Certify results shared between criteria.
class ReportCache {
 public:
  const DualityReport& get(const std::string& name, DualClass cls) {
    const auto key = std::make_pair(name, cls);
    auto it = reports_.find(key);
    if (it != reports_.end()) return it->second;
    const CatalogEntry e = load(name);
    auto report = certify(e.lagrangian(cls), e.x_grid, e.dual_pg(cls));
    return reports_.emplace(key, std::move(report)).first->second;
  }

 private:
  std::map<std::pair<std::string, DualClass>, DualityReport> reports_;
};

const std::vector<std::string> kLagrangianEntries = {"classical-gap", "double-well", "convex-lp",
                                                     "kernel-line", "orthogonal-lines"};
const std::vector<std::string> kDualityEntries = {"classical-gap", "double-well", "convex-lp",
                                                  "kernel-line"};
constexpr DualClass kClasses[] = {DualClass::affine, DualClass::quad_minorant};

bool contains_param(const std::vector<DualParameter>& set, double a, std::vector<double> v) {
  const DualParameter target{DualClass::quad_minorant, a, std::move(v)};
  for (const auto& p : set) {
    DualParameter q = p;
    q.cls = target.cls;
    if (parameter_sets_match(std::span<const DualParameter>(&q, 1),
                             std::span<const DualParameter>(&target, 1), tol::hull)) {
      return true;
    }
  }
  return false;
}

std::string fmt(double v) { return format_number(v); }

// 1
CriterionResult biconjugate_identity() {
  CriterionResult r{1, "biconjugate identity on convex / paraconvex functions", true, "", 0.0};
  const Box box({-2.0}, {2.0});
  const Grid grid(box, {401});
  const ParameterGrid pg(ElementaryClass::quad_minorant, {0.0, 0.5, 1.0, 2.0, 4.0, 8.0},
                         Grid(Box({-64.0}, {64.0}), {513}));
  std::ostringstream detail;
  for (const char* expr : {"abs(x1)", "x1^2", "(x1^2 - 1)^2", "-x1^2"}) {
    const auto f = ObjectiveFunction::parse(expr, {}, box);
    const auto rep = phi_convexity_report(f, pg, grid);
    detail << expr << ": max gap " << fmt(rep.max_gap.value()) << " (tol " << fmt(rep.tolerance)
           << "); ";
    r.passed = r.passed && rep.phi_convex_on_grid;
  }
  r.detail = detail.str();
  return r;
}

// 2
CriterionResult curvature_truncation() {
  CriterionResult r{2, "curvature truncation law 1/(1+a_max) at the kink", true, "", 0.0};
  const CatalogEntry e = load("dc-kink");
  const Point zero{0.0};
  const Grid ell(Box({-8.0}, {8.0}), {33});
  const double f0 = e.objective(zero).value();
  double prev = std::numeric_limits<double>::infinity();
  std::ostringstream detail;
  for (const auto& as : {std::vector<double>{0.0, 1.0, 3.0, 9.0},
                         std::vector<double>{0.0, 1.0, 9.0, 33.0, 99.0}}) {
    const ParameterGrid pg(ElementaryClass::quad_minorant, as, ell);
    const double gap = f0 - biconjugate(e.objective, pg, e.x_grid, zero).value();
    const double expected = 1.0 / (1.0 + pg.a_max());
    const bool ok = std::abs(gap - expected) <= 0.1 * expected && gap < prev;
    detail << "a_max=" << fmt(pg.a_max()) << ": gap " << fmt(gap) << " vs " << fmt(expected)
           << "; ";
    r.passed = r.passed && ok;
    prev = gap;
  }
  r.detail = detail.str();
  return r;
}

// 3
CriterionResult weak_duality(ReportCache& cache) {
  CriterionResult r{3, "weak duality on every catalog Lagrangian", true, "", 0.0};
  std::ostringstream detail;
  int ok = 0, total = 0;
  for (const auto& name : kLagrangianEntries) {
    for (DualClass c : kClasses) {
      const auto& rep = cache.get(name, c);
      const bool pass = rep.certifications.weak_duality_ok;
      ok += pass;
      ++total;
      if (!pass) {
        detail << name << "/" << cls_name(c) << " dual " << fmt(rep.dual_value.value())
               << " > primal " << fmt(rep.primal_value.value()) << "; ";
      }
    }
  }
  r.passed = ok == total;
  detail << ok << "/" << total << " configurations";
  r.detail = detail.str();
  return r;
}

// 4
CriterionResult classical_vs_augmented() {
  CriterionResult r{4, "classical vs augmented gap on classical-gap", false, "", 0.0};
  const auto t0 = Clock::now();
  const CatalogEntry e = load("classical-gap");
  const auto La = e.lagrangian(DualClass::affine);
  const auto Lq = e.lagrangian(DualClass::quad_minorant);
  const auto pa = primal_value(La, e.x_grid, e.dual_pg(DualClass::affine));
  const auto da = dual_value(La, e.x_grid, e.dual_pg(DualClass::affine));
  const auto pq = primal_value(Lq, e.x_grid, e.dual_pg(DualClass::quad_minorant));
  const auto dq = dual_value(Lq, e.x_grid, e.dual_pg(DualClass::quad_minorant));
  const double gap_a = pa.direct.value() - da.value.value();
  const double gap_q = pq.direct.value() - dq.value.value();
  const bool seeded = contains_param(dq.argmax, 0.25, {-0.5});
  const double elapsed = seconds_since(t0);
  r.passed = std::abs(gap_a - 0.25) <= 0.02 && gap_q <= 1e-6 && seeded && elapsed < 10.0;
  r.detail = "affine gap " + fmt(gap_a) + ", quad gap " + fmt(gap_q) +
             ", (0.25,-0.5) in argmax: " + (seeded ? "yes" : "no");
  return r;
}

// 5
CriterionResult value_function_equivalence(ReportCache& cache) {
  CriterionResult r{5, "zero gap iff V(y0) = V**(y0)", false, "", 0.0};
  int ok = 0, total = 0;
  std::ostringstream detail;
  for (const auto& name : kDualityEntries) {
    for (DualClass c : kClasses) {
      const auto& rep = cache.get(name, c);
      ++total;
      if (rep.zero_gap_matches_value_function) {
        ++ok;
      } else {
        detail << name << "/" << cls_name(c) << " mismatch; ";
      }
    }
  }
  r.passed = ok == total;
  detail << ok << " of " << total << " configurations";
  r.detail = detail.str();
  return r;
}

// 6
CriterionResult subdifferential_argmax(ReportCache& cache) {
  CriterionResult r{6, "dual argmax equals sampled subdifferential of V", false, "", 0.0};
  const auto& q = cache.get("classical-gap", DualClass::quad_minorant);
  const auto& a = cache.get("classical-gap", DualClass::affine);
  const bool nonempty = !q.subdifferential_at_anchor.empty();
  const bool seeded = contains_param(q.subdifferential_at_anchor, 0.25, {-0.5});
  const bool match = q.argmax_matches_subdifferential == Verdict::holds;
  const bool affine_empty = a.subdifferential_at_anchor.empty();
  r.passed = nonempty && seeded && match && affine_empty;
  r.detail = "quad: |dV(0)| = " + std::to_string(q.subdifferential_at_anchor.size()) +
             ", |argmax| = " + std::to_string(q.dual_argmax.size()) + ", sets " +
             std::string(to_string(q.argmax_matches_subdifferential)) +
             "; affine: |dV(0)| = " + std::to_string(a.subdifferential_at_anchor.size()) + " (" +
             std::string(to_string(a.argmax_matches_subdifferential)) + ")";
  return r;
}

// 7
CriterionResult witness_bridge(ReportCache& cache) {
  CriterionResult r{7, "intersection witnesses track the duality gap", true, "", 0.0};
  WitnessSearchOptions opts;
  opts.max_members_per_dual = 128;
  std::ostringstream detail;
  int found = 0, tried = 0;
  for (const auto& name : kLagrangianEntries) {
    const CatalogEntry e = load(name);
    for (DualClass c : kClasses) {
      const auto& rep = cache.get(name, c);
      if (!rep.certifications.zero_gap || !rep.primal_value.is_finite()) continue;
      const auto L = e.lagrangian(c);
      const auto duals = dual_parameters(L, e.dual_pg(c));
      for (double delta : {0.1, 1.0}) {
        const double alpha = rep.primal_value.value() - delta;
        const auto res = search_intersection_witness(L, alpha, duals, e.x_pg(c), e.x_grid, opts);
        ++tried;
        if (res.witness) {
          ++found;
        } else {
          r.passed = false;
          detail << name << "/" << cls_name(c) << " alpha " << fmt(alpha) << " no witness; ";
        }
      }
    }
  }
  detail << found << "/" << tried << " witnesses found; ";
  const CatalogEntry e = load("classical-gap");
  const auto L = e.lagrangian(DualClass::affine);
  const auto res = search_intersection_witness(L, -0.35,
                                               dual_parameters(L, e.dual_pg(DualClass::affine)),
                                               e.x_pg(DualClass::affine), e.x_grid, opts);
  const bool exhausted = !res.witness && !res.budget_hit;
  r.passed = r.passed && exhausted && tried > 0;
  detail << "classical-gap/affine alpha -0.35: "
         << (exhausted ? "exhausted" : (res.witness ? "witness found" : "budget hit")) << " after "
         << res.pairs_checked << " pairs";
  r.detail = detail.str();
  return r;
}

// 8
CriterionResult constraint_zero_gap(ReportCache& cache) {
  CriterionResult r{8, "zero gap for constraint problems under the quad class", true, "", 0.0};
  std::ostringstream detail;
  for (const char* name : {"double-well", "convex-lp"}) {
    const auto& rep = cache.get(name, DualClass::quad_minorant);
    r.passed = r.passed && rep.certifications.zero_gap;
    detail << name << ": gap " << fmt(rep.gap.value()) << "; ";
  }
  r.detail = detail.str();
  return r;
}

// 9
CriterionResult subzero_property() {
  CriterionResult r{9, "zero subgradient condition yields intersecting support pairs", false, "",
                    0.0};
  const Box box({-2.0}, {2.0});
  const Grid grid(box, {65});
  const ParameterGrid pg(ElementaryClass::quad_minorant, {0.0, 0.5, 1.0, 2.0},
                         Grid(Box({-4.0}, {4.0}), {33}));
  std::mt19937 rng(20240607);
  auto dyadic = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng) / 8.0;
  };
  auto make = [&](int kind) {
    const std::string s = format_number(dyadic(-8, 8));
    const std::string k = format_number(dyadic(0, 8));
    switch (kind) {
      case 0: return "(x1 - " + s + ")^2 + " + k;
      case 1: return "abs(x1 - " + s + ") + " + k;
      default: return "((x1 - " + s + ")^2 - 1)^2 + " + k;
    }
  };
  int holds = 0, passed = 0, attempts = 0;
  while (holds < 100 && attempts < 5000) {
    ++attempts;
    const auto f = ObjectiveFunction::parse(make(attempts % 3), {}, box);
    const auto h = ObjectiveFunction::parse(make((attempts / 3) % 3), {}, box);
    const Point xbar{dyadic(-8, 8)};
    const auto fg = f.sample(grid);
    const auto hg = h.sample(grid);
    const auto z = zero_subgradient_condition(fg, hg, xbar, xbar, pg);
    if (z.verdict != Verdict::holds) continue;
    const double fx = f(xbar).value();
    const double hx = h(xbar).value();
    const double alpha = std::min(fx, hx) - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    ++holds;

    const auto support_from = [&](const LscSubgradient& s, double value) {
      double sq = 0.0, lin = 0.0;
      for (std::size_t i = 0; i < xbar.size(); ++i) {
        sq += xbar[i] * xbar[i];
        lin += s.v[i] * xbar[i];
      }
      return ElementaryFunction::quad_minorant(s.a, s.v, value - lin + s.a * sq);
    };
    ElementaryFunction phi1 = support_from(*z.p, fx);
    ElementaryFunction phi2 = support_from(*z.q, hx);
    const bool p_zero = z.p->a == 0.0 && std::all_of(z.p->v.begin(), z.p->v.end(),
                                                     [](double v) { return v == 0.0; });
    const bool q_zero = z.q->a == 0.0 && std::all_of(z.q->v.begin(), z.q->v.end(),
                                                     [](double v) { return v == 0.0; });
    if (z.lambda == 1.0 || (p_zero && z.lambda > 0.0)) {
      phi1 = ElementaryFunction::constant(1, alpha);
    } else if (z.lambda == 0.0 || q_zero) {
      phi2 = ElementaryFunction::constant(1, alpha);
    }
    const bool in_support = is_in_support(fg, phi1, tol::support).accepted &&
                            is_in_support(hg, phi2, tol::support).accepted;
    const bool inter = intersection_lsc(IntersectionQuery{phi1, phi2, alpha}, grid).holds;
    passed += in_support && inter;
  }
  r.passed = holds == 100 && passed == 100;
  r.detail = std::to_string(passed) + "/" + std::to_string(holds) + " instances (" +
             std::to_string(attempts) + " draws)";
  return r;
}

// 10
CriterionResult concavity() {
  CriterionResult r{10, "concavity of L in the dual parameter", true, "", 0.0};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::ostringstream detail;
  int violations = 0, samples = 0;
  for (const auto& name : kLagrangianEntries) {
    const CatalogEntry e = load(name);
    for (DualClass c : kClasses) {
      const auto L = e.lagrangian(c);
      const std::size_t m = L.perturbation().y_dim();
      auto draw = [&] {
        DualParameter p{c, c == DualClass::affine ? 0.0 : 4.0 * unit(rng), std::vector<double>(m)};
        for (auto& v : p.v) v = 4.0 * unit(rng) - 2.0;
        return p;
      };
      for (int k = 0; k < 1000; ++k) {
        const std::size_t xi = std::uniform_int_distribution<std::size_t>(0, e.x_grid.size() - 1)(rng);
        const auto x = e.x_grid.point(xi);
        const auto p1 = draw();
        const auto p2 = draw();
        const double t = unit(rng);
        DualParameter mid{c, t * p1.a + (1.0 - t) * p2.a, std::vector<double>(m)};
        for (std::size_t i = 0; i < m; ++i) mid.v[i] = t * p1.v[i] + (1.0 - t) * p2.v[i];
        const ExtendedValue l1 = L(x, p1);
        const ExtendedValue l2 = L(x, p2);
        const ExtendedValue lm = L(x, mid);
        ++samples;
        if (l1.is_neg_inf() || l2.is_neg_inf() || lm.is_pos_inf()) continue;
        const ExtendedValue rhs = l1.scaled(t) + l2.scaled(1.0 - t);
        const bool bad = lm.is_neg_inf() || (rhs.is_finite() && lm.value() < rhs.value() - 1e-7) ||
                         rhs.is_pos_inf();
        violations += bad;
      }
    }
  }
  r.passed = violations == 0;
  detail << violations << " violations in " << samples << " samples";
  r.detail = detail.str();
  return r;
}

// 11
CriterionResult paraconvexity_pipeline(ReportCache& cache) {
  CriterionResult r{11, "paraconvexity pipeline on double-well", false, "", 0.0};
  const Box box({-2.0}, {2.0});
  const auto f = ObjectiveFunction::parse("(x1^2 - 1)^2", {}, box);
  const std::vector<double> candidates = {0.5, 1.0, 1.5, 2.0, 4.0};
  const auto para = paraconvexity_modulus(f, Grid(box, {401}), candidates);
  const auto& rep = cache.get("double-well", DualClass::quad_minorant);
  const bool f_ok = para.modulus && *para.modulus == 2.0;
  r.passed = f_ok && rep.certifications.v_paraconvex && rep.anchor_interior &&
             rep.certifications.zero_gap && !rep.dual_argmax.empty() &&
             rep.paraconvex_consequence == Verdict::holds;
  r.detail = "f modulus " + (para.modulus ? fmt(*para.modulus) : std::string("none")) +
             " (required " + fmt(para.required_midpoint) + "), V modulus " +
             (rep.v_paraconvexity_modulus ? fmt(*rep.v_paraconvexity_modulus) : "none") +
             ", y0 interior " + (rep.anchor_interior ? "yes" : "no") + ", consequence " +
             std::string(to_string(rep.paraconvex_consequence));
  return r;
}

// 12
CriterionResult subspace_analogues() {
  CriterionResult r{12, "kernel-line and orthogonal-lines analogues", true, "", 0.0};
  std::ostringstream detail;
  for (const char* name : {"kernel-line", "orthogonal-lines"}) {
    const CatalogEntry e = load(name);
    const auto L = e.lagrangian(DualClass::affine);
    const auto pv = primal_value(L, e.x_grid, e.dual_pg(DualClass::affine));
    const bool beta_ok = pv.direct.is_finite() && std::abs(pv.direct.value()) <= 1e-9;
    const auto res = search_intersection_witness(
        L, 0.0, dual_parameters(L, e.dual_pg(DualClass::affine)), e.x_pg(DualClass::affine),
        e.x_grid);
    auto is_zero = [](const ElementaryFunction& phi) {
      if (phi.curvature() != 0.0 || std::abs(phi.offset()) > 1e-9) return false;
      return std::all_of(phi.slope().begin(), phi.slope().end(),
                         [](double v) { return v == 0.0; });
    };
    const bool witness_ok = res.witness && is_zero(res.witness->phi1) && is_zero(res.witness->phi2);
    r.passed = r.passed && beta_ok && witness_ok;
    detail << name << ": beta " << fmt(pv.direct.value()) << ", zero witness "
           << (witness_ok ? "yes" : "no") << "; ";
  }
  r.detail = detail.str();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& on_result) {
  ReportCache cache;
  std::vector<std::function<CriterionResult()>> criteria = {
      [] { return biconjugate_identity(); },
      [] { return curvature_truncation(); },
      [&] { return weak_duality(cache); },
      [] { return classical_vs_augmented(); },
      [&] { return value_function_equivalence(cache); },
      [&] { return subdifferential_argmax(cache); },
      [&] { return witness_bridge(cache); },
      [&] { return constraint_zero_gap(cache); },
      [] { return subzero_property(); },
      [] { return concavity(); },
      [&] { return paraconvexity_pipeline(cache); },
      [] { return subspace_analogues(); },
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    CriterionResult res;
    try {
      res = criteria[i]();
    } catch (const std::exception& ex) {
      res = CriterionResult{static_cast<int>(i + 1), "criterion " + std::to_string(i + 1), false,
                            std::string("error: ") + ex.what(), 0.0};
    }
    res.seconds = seconds_since(t0);
    if (i == 0 && res.seconds >= 30.0) {
      res.passed = false;
      res.detail += " runtime limit exceeded";
    }
    if (on_result) on_result(res);
    out.push_back(std::move(res));
  }
  return out;
}

std::string format_criterion(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d  ", r.passed ? "PASS" : "FAIL", r.id);
  char tail[64];
  std::snprintf(tail, sizeof tail, " (%.2f s) ", r.seconds);
  return head + r.title + tail + r.detail;
}

}  // namespace phidual
