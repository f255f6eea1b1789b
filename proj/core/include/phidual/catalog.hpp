#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phidual/elementary.hpp"
#include "phidual/lagrangian.hpp"

namespace phidual {

// Values an entry is expected to reproduce under its recommended settings.
struct ExpectedResults {
  std::optional<double> primal;
  std::optional<double> dual_affine;
  std::optional<double> dual_quad;
  std::optional<bool> zero_gap_affine;
  std::optional<bool> zero_gap_quad;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  ObjectiveFunction objective;
  Grid x_grid;
  // Absent for pure biconjugate studies.
  std::optional<PerturbationFunction> perturbation;
  std::optional<Grid> y_grid;
  std::optional<ParameterGrid> dual_pg_affine;
  std::optional<ParameterGrid> dual_pg_quad;
  // Elementary classes on X for support sets and biconjugates.
  ParameterGrid x_pg_affine;
  ParameterGrid x_pg_quad;
  ExpectedResults expected;
  std::string notes;

  const ParameterGrid& dual_pg(DualClass cls) const;
  const ParameterGrid& x_pg(DualClass cls) const;
  Lagrangian lagrangian(DualClass cls) const;
  bool has_lagrangian() const noexcept { return perturbation.has_value(); }
};

const std::vector<std::string>& catalog_names();
// Throws ValidationError for unknown names.
CatalogEntry load(std::string_view name);

}  // namespace phidual
