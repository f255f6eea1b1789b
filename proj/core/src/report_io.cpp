#include "phidual/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace phidual {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (v == 0.0) return 0.0;
  return v;
}

Json number(ExtendedValue v) { return number(v.value()); }

Json param_json(const DualParameter& p) {
  Json v = Json::array();
  for (double x : p.v) v.push_back(number(x));
  return Json{{"class", std::string(to_string(p.cls))}, {"a", number(p.a)}, {"v", v}};
}

Json elementary_json(const ElementaryFunction& f) {
  Json ell = Json::array();
  for (double x : f.slope()) ell.push_back(number(x));
  return Json{{"class", std::string(to_string(f.cls()))},
              {"a", number(f.curvature())},
              {"ell", ell},
              {"c", number(f.offset())}};
}

Json params_json(const std::vector<DualParameter>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(param_json(p));
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_number(ExtendedValue v) { return format_number(v.value()); }

std::string to_json(const DualityReport& r) {
  const auto& c = r.certifications;
  Json j;
  j["primal_value"] = number(r.primal_value);
  j["primal_minimax"] = number(r.primal_minimax);
  j["dual_value"] = number(r.dual_value);
  j["gap"] = number(r.gap);
  j["tol_gap"] = number(r.tol_gap);
  j["dual_argmax"] = params_json(r.dual_argmax);
  j["V_at_anchor"] = number(r.v_at_anchor);
  j["V_biconj_at_anchor"] = number(r.v_biconj_at_anchor);
  j["certifications"] = Json{{"weak_duality_ok", c.weak_duality_ok},
                             {"zero_gap", c.zero_gap},
                             {"strong_duality", c.strong_duality},
                             {"V_psi_convex_at_anchor", c.v_psi_convex_at_anchor},
                             {"V_paraconvex", c.v_paraconvex}};
  j["checks"] = Json{
      {"primal_routes_agree", r.primal_routes_agree},
      {"dual_matches_V_biconj", r.dual_matches_v_biconj},
      {"zero_gap_matches_value_function", r.zero_gap_matches_value_function},
      {"argmax_matches_subdifferential", std::string(to_string(r.argmax_matches_subdifferential))},
      {"anchor_interior", r.anchor_interior},
      {"paraconvex_consequence", std::string(to_string(r.paraconvex_consequence))}};
  j["subdifferential_at_anchor"] = params_json(r.subdifferential_at_anchor);
  j["V_paraconvexity_modulus"] =
      r.v_paraconvexity_modulus ? number(*r.v_paraconvexity_modulus) : Json(nullptr);
  return j.dump(2);
}

std::string to_json(const WitnessSearchResult& result, double alpha) {
  Json j;
  j["alpha"] = number(alpha);
  if (result.witness) {
    const auto& w = *result.witness;
    j["found"] = true;
    j["psi1"] = param_json(w.psi1);
    j["psi2"] = param_json(w.psi2);
    j["phi1"] = elementary_json(w.phi1);
    j["phi2"] = elementary_json(w.phi2);
    j["form_used"] = std::string(to_string(w.form_used));
  } else {
    j["found"] = false;
  }
  j["coverage"] = Json{{"duals_considered", result.duals_considered},
                       {"members_considered", result.members_considered},
                       {"pairs_checked", result.pairs_checked},
                       {"budget_hit", result.budget_hit}};
  return j.dump(2);
}

void write_value_function_csv(std::ostream& os, const ValueFunctionTable& table) {
  const Grid& g = table.values.grid;
  for (std::size_t d = 0; d < g.dim(); ++d) os << 'y' << d + 1 << ',';
  os << "V\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (double y : g.point(i)) os << format_number(y) << ',';
    os << format_number(table.values.at(i)) << '\n';
  }
}

}  // namespace phidual
