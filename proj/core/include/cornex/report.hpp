#pragma once

#include <string>
#include <vector>

#include "cornex/acceptance.hpp"
#include "cornex/config.hpp"
#include "cornex/matcher.hpp"
#include "cornex/oracle.hpp"

namespace cornex {

/// JSON documents use two-space indentation, keys in insertion order and
/// shortest round-trip doubles, so equal inputs give equal bytes.

/// {"scenario": ..., "terms": [{p, l, k, c_real, c_imag, provenance, ...}], "remainder": ...}
std::string expansion_json(const ScenarioConfig& cfg, const ExpansionResult& r);
std::string acceptance_json(const std::vector<CriterionResult>& results);
std::string regularity_json(const RegularityReport& r);
std::string fit_json(const ScenarioConfig& cfg, const std::vector<SingularFunction>& basis, const SingularFit& fit);

/// Table r, theta, y1, y2, re, im of Phi on a polar grid of the quarter plane.
std::string basis_csv(const SingularFunction& phi, double r_max, int radii, int angles);
/// Table y1, y2, u of a transverse-plane profile on a uniform grid over [0, extent]^2.
std::string profile_csv(const PlaneFunction& u, double extent, int nodes);

/// One CSV row per term or criterion found in the given report files.
std::string merge_reports(const std::vector<std::string>& paths);

/// "1.2345678901234567e-03"; the pinned format of CSV numbers.
std::string format_number(double v);

}  // namespace cornex
