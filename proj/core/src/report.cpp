#include "cornex/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "cornex/error.hpp"

namespace cornex {

using nlohmann::ordered_json;

namespace {

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v == 0 ? 0.0 : v) : ordered_json(nullptr); }

std::vector<int> one_based(const std::vector<int>& p) {
  std::vector<int> out;
  for (int i : p) out.push_back(i + 1);
  return out;
}

ordered_json growth_json(const OrderGrowth& g) {
  return {{"order", g.order},
          {"slope", number(g.slope)},
          {"log_coeff", number(g.log_coeff)},
          {"log_stderr", number(g.log_stderr)},
          {"fit_r2", number(g.fit_r2)},
          {"signature", to_string(g.signature)}};
}

ordered_json regularity(const RegularityReport& r) {
  ordered_json orders = ordered_json::array();
  for (const auto& g : r.orders) orders.push_back(growth_json(g));
  return {{"id", r.id},
          {"tail_exponent", number(r.tail_exponent)},
          {"tail_fit_r2", number(r.tail_fit_r2)},
          {"tail_capped", r.tail_capped},
          {"sobolev_index", number(r.sobolev_index)},
          {"sobolev_index_full", number(r.sobolev_index_full)},
          {"proxy", r.proxy},
          {"orders", orders},
          {"note", r.note}};
}

ordered_json measure_json(const SmoothRemainderMeasure& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.orders.size(); ++i)
    rows.push_back({{"order", m.orders[i]},
                    {"coarse", number(m.coarse[i])},
                    {"fine", number(m.fine[i])},
                    {"certified", i < m.certified.size() && m.certified[i]}});
  return rows;
}

ordered_json scenario_json(const ScenarioConfig& c) {
  return {{"name", c.name},
          {"factors", c.factors},
          {"dims", c.dims},
          {"radius", c.local_radius},
          {"data", c.data},
          {"corner_nodes", c.corner_nodes},
          {"tangential_nodes", c.tangential_nodes},
          {"depth", c.depth}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string expansion_json(const ScenarioConfig& cfg, const ExpansionResult& r) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : r.terms) {
    ordered_json term = {{"p", one_based(t.basis.p)},
                         {"l", t.basis.l},
                         {"k", t.basis.k},
                         {"c_real", number(t.c.real())},
                         {"c_imag", number(t.c.imag())},
                         {"provenance", t.provenance},
                         {"id", t.id()},
                         {"strength", t.strength()}};
    if (t.basis.times_coordinate >= 0) term["times_coordinate"] = t.basis.p[t.basis.times_coordinate] + 1;
    if (!t.profile.empty()) term["profile"] = t.profile;
    terms.push_back(term);
  }
  ordered_json cutoff = ordered_json::array();
  for (const auto& c : r.cutoff_checks)
    cutoff.push_back({{"index", c.index},
                      {"discarded_ratio", number(c.discarded_ratio)},
                      {"certified", c.certified},
                      {"measure", measure_json(c.measure)}});
  ordered_json split = ordered_json::array();
  for (const auto& s : r.split_checks)
    split.push_back({{"axis", s.m_axis + 1},
                     {"N", s.N},
                     {"terms", s.terms},
                     {"certified", s.certified},
                     {"measure", measure_json(s.measure)}});
  ordered_json doc = {{"scenario", scenario_json(cfg)},
                      {"N", r.N},
                      {"base_point", r.base_point},
                      {"terms", terms},
                      {"numeric_leading", {{"c_real", number(r.numeric_leading.real())},
                                           {"c_imag", number(r.numeric_leading.imag())}}},
                      {"imaginary_ratio", number(r.imaginary_ratio)},
                      {"remainder", regularity(r.remainder)},
                      {"cutoff_checks", cutoff},
                      {"split_checks", split},
                      {"errors", r.errors}};
  return dump(doc);
}

std::string acceptance_json(const std::vector<CriterionResult>& results) {
  ordered_json rows = ordered_json::array();
  bool all = true;
  for (const auto& r : results) {
    ordered_json metrics = ordered_json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
    rows.push_back({{"id", r.id},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"budget_seconds", r.budget},
                    {"metrics", metrics},
                    {"detail", r.detail}});
    all = all && r.passed;
  }
  return dump({{"passed", all}, {"criteria", rows}});
}

std::string regularity_json(const RegularityReport& r) { return dump(regularity(r)); }

std::string fit_json(const ScenarioConfig& cfg, const std::vector<SingularFunction>& basis, const SingularFit& fit) {
  ordered_json coeffs = ordered_json::array();
  for (std::size_t i = 0; i < basis.size(); ++i)
    coeffs.push_back({{"id", basis[i].id()},
                      {"c_real", number(fit.coefficients[i].real())},
                      {"c_imag", number(fit.coefficients[i].imag())}});
  return dump({{"oracle_domain", cfg.oracle_domain},
               {"data", cfg.data},
               {"mode_cap", cfg.mode_cap},
               {"window", {cfg.fit_lo, cfg.fit_hi}},
               {"degree", fit.degree},
               {"coefficients", coeffs},
               {"relative_residual", number(fit.relative_residual)},
               {"condition", number(fit.condition)},
               {"samples", fit.samples}});
}

std::string basis_csv(const SingularFunction& phi, double r_max, int radii, int angles) {
  std::ostringstream os;
  os << "r,theta,y1,y2,re,im\n";
  for (int i = 1; i <= radii; ++i) {
    double r = r_max * i / radii;
    for (int j = 0; j <= angles; ++j) {
      double th = 0.5 * std::numbers::pi * j / angles;
      double y[2] = {r * std::cos(th), r * std::sin(th)};
      cplx v = phi(y);
      os << format_number(r) << ',' << format_number(th) << ',' << format_number(y[0]) << ','
         << format_number(y[1]) << ',' << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
    }
  }
  return os.str();
}

std::string profile_csv(const PlaneFunction& u, double extent, int nodes) {
  std::ostringstream os;
  os << "y1,y2,u\n";
  for (int i = 0; i <= nodes; ++i)
    for (int j = 0; j <= nodes; ++j) {
      double y1 = extent * i / nodes, y2 = extent * j / nodes;
      os << format_number(y1) << ',' << format_number(y2) << ',' << format_number(u(y1, y2)) << '\n';
    }
  return os.str();
}

std::string merge_reports(const std::vector<std::string>& paths) {
  std::ostringstream os;
  os << "file,kind,scenario,id,passed,c_real,c_imag,detail\n";
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open report");
    ordered_json j;
    try {
      j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path, e.what());
    }
    auto num = [](const ordered_json& v) { return v.is_number() ? format_number(v.get<double>()) : std::string(); };
    if (j.contains("terms")) {
      std::string sc = j["scenario"].value("name", "");
      for (const auto& t : j["terms"])
        os << csv_field(path) << ",term," << csv_field(sc) << ',' << csv_field(t.value("id", "")) << ",,"
           << num(t["c_real"]) << ',' << num(t["c_imag"]) << ",\n";
      for (const auto& e : j["errors"])
        os << csv_field(path) << ",error," << csv_field(sc) << ",,,,," << csv_field(e.get<std::string>()) << '\n';
    } else if (j.contains("criteria")) {
      for (const auto& c : j["criteria"])
        os << csv_field(path) << ",criterion,," << c["id"].get<int>() << ' ' << csv_field(c.value("name", "")) << ','
           << (c.value("passed", false) ? "true" : "false") << ",,," << csv_field(c.value("detail", "")) << '\n';
    } else if (j.contains("coefficients")) {
      for (const auto& c : j["coefficients"])
        os << csv_field(path) << ",fit," << csv_field(j.value("oracle_domain", "")) << ','
           << csv_field(c.value("id", "")) << ",," << num(c["c_real"]) << ',' << num(c["c_imag"]) << ",\n";
    } else {
      throw ConfigError(path, "not an expansion, acceptance or fit report");
    }
  }
  return os.str();
}

}  // namespace cornex
