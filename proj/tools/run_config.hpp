#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "phidual/catalog.hpp"

namespace phidual::cli {

// Settings for one CLI run. Fields left empty fall back to the defaults
// documented in the README; command-line flags override config values.
struct RunConfig {
  // Catalog name, or an inline problem object from the config file.
  std::optional<std::string> problem_name;
  std::optional<nlohmann::json> problem_spec;

  DualClass dual_class = DualClass::quad_minorant;
  std::optional<std::size_t> threads;
  std::vector<double> alphas;
  std::optional<std::vector<double>> point;
  double epsilon = 0.0;
  std::size_t max_members_per_dual = 4096;
  std::vector<double> paraconvexity_candidates;
  std::optional<std::string> output;
  std::optional<std::string> csv;
};

// Reads a config JSON document. Throws ValidationError naming the offending
// field path (e.g. "problem.box.lower[1]").
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);

// Builds the catalog entry for the configured problem.
CatalogEntry resolve_problem(const RunConfig& config);

// Inline problem object to a catalog entry; `path` prefixes error messages.
CatalogEntry entry_from_spec(const nlohmann::json& spec, const std::string& path = "problem");

}  // namespace phidual::cli
