#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "phidual/errors.hpp"

namespace phidual::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> as_strings(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  const json* j = find(obj, key);
  if (!j) fail(path + "." + key, "missing");
  return *j;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

template <typename F>
auto guarded(const std::string& path, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ValidationError& e) {
    if (std::string(e.what()).rfind(path, 0) == 0) throw;
    fail(path, e.what());
  }
}

Box box_from(const json& j, const std::string& path) {
  require_object(j, path);
  auto lo = as_numbers(require(j, "lower", path), path + ".lower");
  auto hi = as_numbers(require(j, "upper", path), path + ".upper");
  if (lo.empty()) fail(path + ".lower", "must not be empty");
  if (lo.size() != hi.size()) fail(path + ".upper", "length differs from lower");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) fail(path + ".upper[" + std::to_string(i) + "]", "below lower bound");
  return guarded(path, [&] { return Box(lo, hi); });
}

std::vector<std::size_t> counts_from(const json& j, std::size_t dim, const std::string& path) {
  std::vector<std::size_t> out;
  if (j.is_array()) {
    if (j.size() != dim) fail(path, "expected " + std::to_string(dim) + " entries");
    for (std::size_t i = 0; i < dim; ++i)
      out.push_back(as_count(j[i], path + "[" + std::to_string(i) + "]"));
  } else {
    out.assign(dim, as_count(j, path));
  }
  for (std::size_t i = 0; i < dim; ++i)
    if (out[i] < 2) fail(path, "every dimension needs at least 2 points");
  return out;
}

Grid grid_from(const json& j, const std::string& path) {
  Box box = box_from(j, path);
  const json* pts = find(j, "points");
  auto counts = pts ? counts_from(*pts, box.dim(), path + ".points")
                    : std::vector<std::size_t>(box.dim(), 101);
  return Grid(std::move(box), std::move(counts));
}

ParameterGrid pg_from(const json* j, ElementaryClass cls, std::size_t dim, double range,
                      std::size_t points, std::vector<double> a_values, const std::string& path) {
  std::vector<ParameterPoint> seeds;
  if (j) {
    require_object(*j, path);
    if (const json* r = find(*j, "range")) range = as_number(*r, path + ".range");
    if (range <= 0.0) fail(path + ".range", "must be positive");
    if (const json* p = find(*j, "points")) points = as_count(*p, path + ".points");
    if (points < 2) fail(path + ".points", "at least 2 required");
    if (const json* a = find(*j, "a")) {
      if (cls == ElementaryClass::affine) fail(path + ".a", "not allowed for the affine class");
      a_values = as_numbers(*a, path + ".a");
      if (a_values.empty()) fail(path + ".a", "must not be empty");
      for (std::size_t i = 0; i < a_values.size(); ++i) {
        if (a_values[i] < 0.0) fail(path + ".a[" + std::to_string(i) + "]", "must be >= 0");
        if (i > 0 && a_values[i] <= a_values[i - 1])
          fail(path + ".a[" + std::to_string(i) + "]", "must be strictly increasing");
      }
    }
    if (const json* s = find(*j, "seeds")) {
      if (!s->is_array()) fail(path + ".seeds", "expected an array");
      for (std::size_t i = 0; i < s->size(); ++i) {
        const std::string sp = path + ".seeds[" + std::to_string(i) + "]";
        require_object((*s)[i], sp);
        ParameterPoint p;
        if (const json* a = find((*s)[i], "a")) p.a = as_number(*a, sp + ".a");
        p.ell = as_numbers(require((*s)[i], "v", sp), sp + ".v");
        if (p.ell.size() != dim) fail(sp + ".v", "expected " + std::to_string(dim) + " entries");
        seeds.push_back(std::move(p));
      }
    }
  }
  Grid ell = Grid::uniform(Box::cube(dim, -range, range), points);
  if (cls == ElementaryClass::affine) return ParameterGrid::affine(std::move(ell), std::move(seeds));
  return guarded(path, [&] {
    return ParameterGrid(cls, std::move(a_values), std::move(ell), std::move(seeds));
  });
}

ObjectiveFunction objective_from(const json& j, const Box& box, const std::string& path) {
  if (j.is_string())
    return guarded(path, [&] { return ObjectiveFunction::parse(j.get<std::string>(), {}, box); });
  require_object(j, path);
  const auto expr = as_string(require(j, "expression", path), path + ".expression");
  std::vector<std::string> cons;
  if (const json* c = find(j, "constraints")) cons = as_strings(*c, path + ".constraints");
  return guarded(path, [&] { return ObjectiveFunction::parse(expr, cons, box); });
}

}  // namespace

CatalogEntry entry_from_spec(const json& spec, const std::string& path) {
  require_object(spec, path);
  const Box box = box_from(require(spec, "box", path), path + ".box");
  const std::size_t n = box.dim();
  const json* pts = find(spec, "points");
  Grid x_grid(box, pts ? counts_from(*pts, n, path + ".points")
                       : std::vector<std::size_t>(n, n == 1 ? 401 : 21));

  std::vector<std::string> f_cons;
  if (const json* c = find(spec, "constraints")) f_cons = as_strings(*c, path + ".constraints");
  const json* obj = find(spec, "objective");

  std::optional<PerturbationFunction> p;
  std::optional<ObjectiveFunction> objective;
  std::size_t y_dim = 0;
  const json* pj = find(spec, "perturbation");
  const std::string pp = path + ".perturbation";
  if (pj) {
    require_object(*pj, pp);
    const auto kind = as_string(require(*pj, "kind", pp), pp + ".kind");
    if (kind == "constraint") {
      if (!obj) fail(path + ".objective", "missing");
      const auto f = as_string(*obj, path + ".objective");
      const auto g = as_strings(require(*pj, "g", pp), pp + ".g");
      if (g.empty()) fail(pp + ".g", "must not be empty");
      std::vector<Expression> ge;
      for (std::size_t i = 0; i < g.size(); ++i)
        ge.push_back(guarded(pp + ".g[" + std::to_string(i) + "]",
                             [&] { return Expression::parse(g[i], n); }));
      auto base = guarded(path + ".objective", [&] { return ObjectiveFunction::parse(f, f_cons, box); });
      std::vector<std::string> all = f_cons;
      all.insert(all.end(), g.begin(), g.end());
      objective = ObjectiveFunction::parse(f, all, box);
      p = PerturbationFunction::constraint(std::move(base), std::move(ge));
      y_dim = g.size();
    } else if (kind == "fenchel") {
      auto g = objective_from(require(*pj, "g", pp), box, pp + ".g");
      auto h = objective_from(require(*pj, "h", pp), box, pp + ".h");
      if (obj) {
        objective = guarded(path + ".objective", [&] {
          return ObjectiveFunction::parse(as_string(*obj, path + ".objective"), f_cons, box);
        });
      } else {
        std::vector<Expression> cons = g.constraints();
        cons.insert(cons.end(), h.constraints().begin(), h.constraints().end());
        const auto sum = "(" + g.expression().to_string() + ") + (" + h.expression().to_string() + ")";
        objective = ObjectiveFunction(Expression::parse(sum, n), std::move(cons), box);
      }
      p = PerturbationFunction::fenchel(std::move(g), std::move(h));
      y_dim = n;
    } else if (kind == "custom") {
      if (!obj) fail(path + ".objective", "missing");
      const Box y_box = box_from(require(*pj, "y_box", pp), pp + ".y_box");
      std::vector<double> lo = box.lower(), hi = box.upper();
      lo.insert(lo.end(), y_box.lower().begin(), y_box.lower().end());
      hi.insert(hi.end(), y_box.upper().begin(), y_box.upper().end());
      auto joint = objective_from(require(*pj, "joint", pp), Box(lo, hi), pp + ".joint");
      auto anchor = as_numbers(require(*pj, "anchor", pp), pp + ".anchor");
      if (anchor.size() != y_box.dim())
        fail(pp + ".anchor", "expected " + std::to_string(y_box.dim()) + " entries");
      objective = guarded(path + ".objective", [&] {
        return ObjectiveFunction::parse(as_string(*obj, path + ".objective"), f_cons, box);
      });
      p = PerturbationFunction::custom(std::move(joint), n, std::move(anchor));
      y_dim = y_box.dim();
    } else {
      fail(pp + ".kind", "expected constraint, fenchel or custom");
    }
  } else {
    if (!obj) fail(path + ".objective", "missing");
    objective = guarded(path + ".objective", [&] {
      return ObjectiveFunction::parse(as_string(*obj, path + ".objective"), f_cons, box);
    });
  }

  const json* dual = find(spec, "dual_pg");
  const json* xpg = find(spec, "x_pg");
  if (dual) require_object(*dual, path + ".dual_pg");
  if (xpg) require_object(*xpg, path + ".x_pg");
  auto sub = [](const json* j, const char* key) { return j ? find(*j, key) : nullptr; };

  ParameterGrid x_aff = pg_from(sub(xpg, "affine"), ElementaryClass::affine, n, 4.0, n == 1 ? 33 : 9,
                                {0.0}, path + ".x_pg.affine");
  ParameterGrid x_quad = pg_from(sub(xpg, "quad"), ElementaryClass::quad_minorant, n, 4.0,
                                 n == 1 ? 33 : 9, {0.0, 1.0, 4.0}, path + ".x_pg.quad");

  CatalogEntry e{"inline",
                 "inline problem",
                 std::move(*objective),
                 x_grid,
                 std::nullopt,
                 std::nullopt,
                 std::nullopt,
                 std::nullopt,
                 std::move(x_aff),
                 std::move(x_quad),
                 {},
                 {}};
  if (!p) return e;

  const std::size_t per = y_dim == 1 ? 41 : 9;
  e.dual_pg_affine = pg_from(sub(dual, "affine"), ElementaryClass::affine, y_dim, 2.0, per, {0.0},
                             path + ".dual_pg.affine");
  e.dual_pg_quad = pg_from(sub(dual, "quad"), ElementaryClass::quad_minorant, y_dim, 2.0, per,
                           {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}, path + ".dual_pg.quad");
  if (const json* yg = find(spec, "y_grid")) {
    Grid g = grid_from(*yg, path + ".y_grid");
    if (g.dim() != y_dim) fail(path + ".y_grid", "expected " + std::to_string(y_dim) + " dimensions");
    e.y_grid = std::move(g);
  } else {
    e.y_grid = guarded(path + ".y_grid", [&] {
      return default_y_grid(*p, x_grid, *e.dual_pg_quad, x_grid.max_step());
    });
  }
  e.perturbation = std::move(p);
  return e;
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "config");
  RunConfig c;
  for (const auto& [key, _] : doc.items()) {
    static const std::vector<std::string> known = {
        "problem", "dual_class", "threads", "alpha", "point", "epsilon", "max_members_per_dual",
        "paraconvexity_candidates", "output", "csv"};
    if (std::find(known.begin(), known.end(), key) == known.end()) fail(key, "unknown field");
  }
  if (const json* p = find(doc, "problem")) {
    if (p->is_string()) {
      c.problem_name = p->get<std::string>();
    } else {
      require_object(*p, "problem");
      c.problem_spec = *p;
    }
  }
  if (const json* d = find(doc, "dual_class")) {
    const auto s = as_string(*d, "dual_class");
    c.dual_class = guarded("dual_class", [&] { return dual_class_from_string(s); });
  }
  if (const json* t = find(doc, "threads")) {
    c.threads = as_count(*t, "threads");
    if (*c.threads == 0) fail("threads", "must be positive");
  }
  if (const json* a = find(doc, "alpha")) c.alphas = as_numbers(*a, "alpha");
  if (const json* x = find(doc, "point")) c.point = as_numbers(*x, "point");
  if (const json* e = find(doc, "epsilon")) {
    c.epsilon = as_number(*e, "epsilon");
    if (c.epsilon < 0.0) fail("epsilon", "must be >= 0");
  }
  if (const json* m = find(doc, "max_members_per_dual")) {
    c.max_members_per_dual = as_count(*m, "max_members_per_dual");
    if (c.max_members_per_dual == 0) fail("max_members_per_dual", "must be positive");
  }
  if (const json* pc = find(doc, "paraconvexity_candidates"))
    c.paraconvexity_candidates = as_numbers(*pc, "paraconvexity_candidates");
  if (const json* o = find(doc, "output")) c.output = as_string(*o, "output");
  if (const json* o = find(doc, "csv")) c.csv = as_string(*o, "csv");
  if (c.problem_spec) (void)entry_from_spec(*c.problem_spec);
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config: " + std::string(e.what()));
  }
  return parse_config(doc);
}

CatalogEntry resolve_problem(const RunConfig& config) {
  if (config.problem_spec) return entry_from_spec(*config.problem_spec);
  if (config.problem_name) return load(*config.problem_name);
  throw ValidationError("problem: missing (use --problem or a config file)");
}

}  // namespace phidual::cli
