// phidual: command-line front end for the Φ-duality library.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "phidual/catalog.hpp"
#include "phidual/conjugation.hpp"
#include "phidual/duality.hpp"
#include "phidual/errors.hpp"
#include "phidual/minimax.hpp"
#include "phidual/parallel.hpp"
#include "phidual/report_io.hpp"
#include "phidual/subdifferential.hpp"
#include "phidual/verification.hpp"
#include "run_config.hpp"

namespace {

using namespace phidual;
using Json = nlohmann::ordered_json;

enum ExitCode { ok = 0, validation = 1, numerical = 2, acceptance = 3 };

struct Flags {
  std::string config_path;
  std::string problem;
  std::string dual_class;
  std::size_t threads = 0;
  std::vector<double> alphas;
  std::vector<double> point;
  double epsilon = -1.0;
  std::size_t max_members = 0;
  std::string output;
  std::string csv;
  bool json_list = false;
};

cli::RunConfig effective_config(const Flags& f) {
  cli::RunConfig c = f.config_path.empty() ? cli::RunConfig{} : cli::load_config_file(f.config_path);
  if (!f.problem.empty()) {
    c.problem_name = f.problem;
    c.problem_spec.reset();
  }
  if (!f.dual_class.empty()) c.dual_class = dual_class_from_string(f.dual_class);
  if (f.threads > 0) c.threads = f.threads;
  if (!f.alphas.empty()) c.alphas = f.alphas;
  if (!f.point.empty()) c.point = f.point;
  if (f.epsilon >= 0.0) c.epsilon = f.epsilon;
  if (f.max_members > 0) c.max_members_per_dual = f.max_members;
  if (!f.output.empty()) c.output = f.output;
  if (!f.csv.empty()) c.csv = f.csv;
  // PHIDUAL_THREADS still wins inside worker_count().
  if (c.threads) set_worker_count(*c.threads);
  return c;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw ValidationError("output: cannot write " + *path);
  out << text;
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (v == 0.0) return 0.0;
  return v;
}

Json numbers(std::span<const double> xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

Json param_json(const DualParameter& p) {
  return Json{{"class", std::string(to_string(p.cls))}, {"a", number(p.a)}, {"v", numbers(p.v)}};
}

Lagrangian require_lagrangian(const CatalogEntry& e, DualClass cls, const char* command) {
  if (!e.has_lagrangian())
    throw ValidationError(std::string("problem.perturbation: required by '") + command + "'");
  return e.lagrangian(cls);
}

Point require_point(const cli::RunConfig& c, const CatalogEntry& e) {
  if (!c.point) throw ValidationError("point: required (use --point)");
  if (c.point->size() != e.x_grid.dim())
    throw ValidationError("point: expected " + std::to_string(e.x_grid.dim()) + " coordinates");
  if (!e.x_grid.find(*c.point))
    throw ValidationError("point: not a grid point of the problem's x grid");
  return e.x_grid.point_copy(*e.x_grid.find(*c.point));
}

int cmd_conjugate(const cli::RunConfig& c) {
  const auto e = cli::resolve_problem(c);
  const auto report = phi_convexity_report(e.objective, e.x_pg(c.dual_class), e.x_grid);
  std::ostringstream os;
  write_gap_table_csv(os, report);
  emit(c.csv ? c.csv : c.output, os.str());
  return ok;
}

int cmd_biconj(const cli::RunConfig& c) {
  const auto e = cli::resolve_problem(c);
  const auto& pg = e.x_pg(c.dual_class);
  const auto r = phi_convexity_report(e.objective, pg, e.x_grid);
  Json j;
  j["problem"] = e.name;
  j["class"] = std::string(to_string(pg.cls()));
  j["a_max"] = number(pg.a_max());
  j["grid_points"] = r.grid.size();
  j["max_gap"] = number(r.max_gap.value());
  j["max_gap_at"] = numbers(r.grid.point(r.max_gap_index));
  j["tolerance"] = number(r.tolerance);
  j["phi_convex_on_grid"] = r.phi_convex_on_grid;
  j["support_empty_beyond_box"] = support_is_empty_beyond_box(e.objective, pg);
  emit(c.output, j.dump(2) + "\n");
  if (c.csv) {
    std::ostringstream os;
    write_gap_table_csv(os, r);
    emit(c.csv, os.str());
  }
  return ok;
}

int cmd_subdiff(const cli::RunConfig& c) {
  const auto e = cli::resolve_problem(c);
  const Point x = require_point(c, e);
  const auto s = estimate_subdifferential(e.objective, x, c.epsilon, e.x_pg(c.dual_class), e.x_grid);
  std::ostringstream os;
  write_subdifferential_csv(os, s);
  emit(c.csv ? c.csv : c.output, os.str());
  return ok;
}

int cmd_intersect(const cli::RunConfig& c) {
  const auto e = cli::resolve_problem(c);
  const auto L = require_lagrangian(e, c.dual_class, "intersect");
  if (c.alphas.empty()) throw ValidationError("alpha: at least one level required (use --alpha)");
  const auto duals = dual_parameters(L, e.dual_pg(c.dual_class));
  WitnessSearchOptions opts;
  opts.max_members_per_dual = c.max_members_per_dual;
  Json out = Json::array();
  for (double alpha : c.alphas) {
    const auto res = search_intersection_witness(L, alpha, duals, e.x_pg(c.dual_class), e.x_grid, opts);
    out.push_back(Json::parse(to_json(res, alpha)));
  }
  emit(c.output, out.dump(2) + "\n");
  return ok;
}

int cmd_lagrangian(const cli::RunConfig& c) {
  const auto e = cli::resolve_problem(c);
  const auto L = require_lagrangian(e, c.dual_class, "lagrangian");
  const auto params = dual_parameters(L, e.dual_pg(c.dual_class));
  std::ostringstream os;
  write_lagrangian_surface_csv(os, L, e.x_grid, params);
  emit(c.csv ? c.csv : c.output, os.str());
  return ok;
}

DualityReport run_certify(const cli::RunConfig& c, const CatalogEntry& e, const char* command) {
  const auto L = require_lagrangian(e, c.dual_class, command);
  CertifyOptions opts;
  if (!c.paraconvexity_candidates.empty()) opts.paraconvexity_candidates = c.paraconvexity_candidates;
  return certify(L, e.x_grid, e.dual_pg(c.dual_class), opts);
}

int cmd_gap(const cli::RunConfig& c) {
  const auto e = cli::resolve_problem(c);
  const auto r = run_certify(c, e, "gap");
  emit(c.output, to_json(r) + "\n");
  if (c.csv) {
    const auto table = value_function(*e.perturbation, e.x_grid, *e.y_grid);
    std::ostringstream os;
    write_value_function_csv(os, table);
    emit(c.csv, os.str());
  }
  return ok;
}

int cmd_strong(const cli::RunConfig& c) {
  const auto e = cli::resolve_problem(c);
  const auto r = run_certify(c, e, "strong");
  Json sub = Json::array();
  for (const auto& p : r.subdifferential_at_anchor) sub.push_back(param_json(p));
  Json argmax = Json::array();
  for (const auto& p : r.dual_argmax) argmax.push_back(param_json(p));
  Json j;
  j["problem"] = e.name;
  j["dual_class"] = std::string(to_string(c.dual_class));
  j["subgradient_route"] = Json{
      {"subdifferential_nonempty", r.certifications.strong_duality},
      {"subdifferential_at_anchor", sub},
      {"dual_argmax", argmax},
      {"argmax_matches_subdifferential", std::string(to_string(r.argmax_matches_subdifferential))}};
  j["paraconvex_route"] = Json{
      {"v_paraconvex", r.certifications.v_paraconvex},
      {"v_paraconvexity_modulus",
       r.v_paraconvexity_modulus ? number(*r.v_paraconvexity_modulus) : Json(nullptr)},
      {"anchor_interior", r.anchor_interior},
      {"consequence", std::string(to_string(r.paraconvex_consequence))}};
  j["zero_gap"] = r.certifications.zero_gap;
  j["gap"] = number(r.gap.value());
  emit(c.output, j.dump(2) + "\n");
  return ok;
}

int cmd_catalog(const Flags& f) {
  if (f.json_list) {
    Json out = Json::array();
    for (const auto& name : catalog_names()) {
      const auto e = load(name);
      out.push_back(Json{{"name", e.name},
                         {"description", e.description},
                         {"dimension", e.x_grid.dim()},
                         {"has_lagrangian", e.has_lagrangian()}});
    }
    emit(f.output.empty() ? std::nullopt : std::optional(f.output), out.dump(2) + "\n");
    return ok;
  }
  std::ostringstream os;
  for (const auto& name : catalog_names()) {
    const auto e = load(name);
    os << name << std::string(name.size() < 18 ? 18 - name.size() : 1, ' ') << e.description << "\n";
  }
  emit(f.output.empty() ? std::nullopt : std::optional(f.output), os.str());
  return ok;
}

int cmd_verify_all(const Flags& f) {
  if (f.threads > 0) set_worker_count(f.threads);
  int failed = 0;
  run_acceptance_suite([&](const CriterionResult& r) {
    std::cout << format_criterion(r) << std::endl;
    if (!r.passed) ++failed;
  });
  std::cout << (failed ? "FAIL: " : "PASS: ") << failed << " of 12 criteria failed\n";
  return failed ? acceptance : ok;
}

void add_problem_options(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON run config")->check(CLI::ExistingFile);
  sub->add_option("--problem", f.problem, "catalog entry name");
  sub->add_option("--dual-class", f.dual_class, "affine or quad (default quad)")
      ->check(CLI::IsMember({"affine", "quad", "quad_minorant"}));
  sub->add_option("--threads", f.threads, "worker threads (PHIDUAL_THREADS overrides)");
  sub->add_option("-o,--output", f.output, "write the primary output here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phidual: abstract convexity duality on box domains"};
  app.require_subcommand(1);
  Flags f;

  auto* conj = app.add_subcommand("conjugate", "f - f** gap table (CSV)");
  add_problem_options(conj, f);
  conj->add_option("--csv", f.csv, "CSV output path");

  auto* bic = app.add_subcommand("biconj", "Φ-convexity report (JSON)");
  add_problem_options(bic, f);
  bic->add_option("--csv", f.csv, "also write the gap table here");

  auto* sub = app.add_subcommand("subdiff", "sampled ε-subdifferential at a grid point (CSV)");
  add_problem_options(sub, f);
  sub->add_option("--point", f.point, "base point x1 .. xn")->expected(1, -1);
  sub->add_option("--epsilon", f.epsilon, "ε >= 0 (default 0)")->check(CLI::NonNegativeNumber);
  sub->add_option("--csv", f.csv, "CSV output path");

  auto* inter = app.add_subcommand("intersect", "intersection witnesses over α levels (JSON)");
  add_problem_options(inter, f);
  inter->add_option("--alpha", f.alphas, "levels α")->expected(1, -1);
  inter->add_option("--max-members", f.max_members, "support members kept per dual parameter");

  auto* lag = app.add_subcommand("lagrangian", "Lagrangian surface over x grid and dual sample (CSV)");
  add_problem_options(lag, f);
  lag->add_option("--csv", f.csv, "CSV output path");

  auto* gap = app.add_subcommand("gap", "duality report (JSON)");
  add_problem_options(gap, f);
  gap->add_option("--csv", f.csv, "also write the value function V here");

  auto* strong = app.add_subcommand("strong", "strong duality checks (JSON)");
  add_problem_options(strong, f);

  auto* cat = app.add_subcommand("catalog", "list catalog problems");
  cat->add_flag("--json", f.json_list, "JSON listing");
  cat->add_option("-o,--output", f.output, "output path");

  auto* verify = app.add_subcommand("verify-all", "run every acceptance criterion");
  verify->add_option("--threads", f.threads, "worker threads (PHIDUAL_THREADS overrides)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : validation;
  }

  try {
    if (cat->parsed()) return cmd_catalog(f);
    if (verify->parsed()) return cmd_verify_all(f);
    const auto config = effective_config(f);
    if (conj->parsed()) return cmd_conjugate(config);
    if (bic->parsed()) return cmd_biconj(config);
    if (sub->parsed()) return cmd_subdiff(config);
    if (inter->parsed()) return cmd_intersect(config);
    if (lag->parsed()) return cmd_lagrangian(config);
    if (gap->parsed()) return cmd_gap(config);
    if (strong->parsed()) return cmd_strong(config);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical;
  }
  return validation;
}
