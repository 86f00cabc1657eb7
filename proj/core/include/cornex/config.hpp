#pragma once

#include <string>
#include <vector>

#include "cornex/defaults.hpp"
#include "cornex/geometry.hpp"
#include "cornex/matcher.hpp"

namespace cornex {

/// One run of the pipeline and the oracle. Loaded from INI sections
/// [scenario] [domain] [data] [grid] [expansion] [cutoff] [oracle] [output].
struct ScenarioConfig {
  std::string name = "flat";
  std::vector<std::string> factors{"flat", "flat"};
  std::vector<int> dims{1, 1};
  std::vector<double> base_point;  // empty: origin
  double local_radius = defaults::local_radius;
  std::string data = "one";
  int corner_nodes = defaults::corner_nodes;
  int tangential_nodes = defaults::tangential_nodes;
  int depth = 1;
  bool certify = false;
  bool profiles = false;
  double cutoff_r0 = 0, cutoff_r1 = 0;
  std::string oracle_domain = "square";
  int mode_cap = defaults::mode_cap;
  double fit_lo = defaults::fit_window_lo, fit_hi = defaults::fit_window_hi;
  int fit_degree = 3;
  std::string out = "out";

  ProductDomainSpec domain() const;
  AssembleOptions assemble_options() const;
};

/// Built-in scenarios: flat, paraboloid, disk, disks, square.
ScenarioConfig builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenarios();

/// Reads an INI file over the named built-in scenario (or the file's
/// scenario.name). Throws ConfigError naming the offending key.
ScenarioConfig load_config(const std::string& path, const std::string& scenario = "");
ScenarioConfig parse_config(const std::string& text, const std::string& scenario = "");

/// Throws ConfigError on resolutions that are not powers of two, negative
/// depth, unknown presets or radii out of order.
void validate(const ScenarioConfig& c);

}  // namespace cornex
