#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cornex/acceptance.hpp"
#include "cornex/config.hpp"
#include "cornex/data.hpp"
#include "cornex/error.hpp"
#include "cornex/grid_io.hpp"
#include "cornex/oracle.hpp"
#include "cornex/parallel.hpp"
#include "cornex/report.hpp"

namespace fs = std::filesystem;
using namespace cornex;

namespace {

struct Common {
  std::string config, out, scenario;
  int grid = 0, depth = -1, threads = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "INI scenario file")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output directory (overrides output.dir)");
  app->add_option("--grid", c.grid, "corner nodes per axis");
  app->add_option("--depth", c.depth, "truncation order N");
  app->add_option("--scenario", c.scenario, "built-in scenario: flat, paraboloid, disk, disks, square");
  app->add_option("--threads", c.threads, "worker threads (capped by CORNEX_MAX_THREADS)");
}

ScenarioConfig resolve(const Common& c) {
  ScenarioConfig cfg = c.config.empty() ? builtin_scenario(c.scenario.empty() ? "flat" : c.scenario)
                                        : load_config(c.config, c.scenario);
  if (c.grid > 0) cfg.corner_nodes = c.grid;
  if (c.grid < 0) throw ConfigError("--grid", "must be positive");
  if (c.depth >= 0) cfg.depth = c.depth;
  if (!c.out.empty()) cfg.out = c.out;
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    if (c.grid > 0 && e.key() == "grid.corner_nodes") throw ConfigError("--grid", "must be a power of two");
    throw;
  }
  if (c.threads > 0) set_worker_count(c.threads);
  fs::create_directories(cfg.out);
  return cfg;
}

void write(const ScenarioConfig& cfg, const std::string& name, const std::string& text) {
  auto path = fs::path(cfg.out) / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
  std::printf("wrote %s\n", path.string().c_str());
}

SingularFunction leading_phi() { return phi_antiderivative(phi_base({0, 1}, 1, {1, 1}), {1, 1}); }

OracleData oracle_data(const ScenarioConfig& cfg, const OracleDomain& od) {
  if (cfg.data == "one") return OracleData::uniform(1);
  if (cfg.data == "zero") return OracleData::uniform(0);
  if (od.dim() != 2) throw ConfigError("data.preset", "only uniform data is supported on " + od.id());
  auto f = make_data(cfg.data, builtin_scenario("square").domain());
  return OracleData::function(f.value);
}

int run_expand(const Common& c, bool dump) {
  auto cfg = resolve(c);
  auto domain = cfg.domain();
  auto f = make_data(cfg.data, domain);
  auto r = assemble_expansion(f, domain, cfg.depth, cfg.assemble_options());
  write(cfg, "expansion.json", expansion_json(cfg, r));
  if (dump && !f.is_zero()) {
    auto v0 = corner_slice_v0(domain, f, 128, defaults::box_factor * cfg.local_radius);
    write_binary((fs::path(cfg.out) / "v0.cxgf").string(), v0);
    std::printf("wrote %s\n", (fs::path(cfg.out) / "v0.cxgf").string().c_str());
  }
  for (const auto& t : r.terms) std::printf("%-24s c = %+.6e %+.6ei\n", t.id().c_str(), t.c.real(), t.c.imag());
  for (const auto& e : r.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  return r.errors.empty() ? 0 : 1;
}

int run_basis(const Common& c, int l, std::vector<int> k, double r_max) {
  auto cfg = resolve(c);
  if (k.size() != 2) throw ConfigError("--k", "needs two entries");
  auto phi = phi_antiderivative(phi_base({0, 1}, l, {1, 1}), k);
  write(cfg, "basis.csv", basis_csv(phi, r_max, 20, 16));
  std::printf("%s strength %d\n", phi.id().c_str(), phi.strength());
  return 0;
}

int run_oracle(const Common& c, const std::string& action) {
  auto cfg = resolve(c);
  auto od = OracleDomain::parse(cfg.oracle_domain);
  auto sol = tensor_solve(od, oracle_data(cfg, od), cfg.mode_cap);
  auto u = sol.transverse();
  if (action == "solve") {
    write(cfg, "oracle_profile.csv", profile_csv(u, 0.1, 40));
    return 0;
  }
  if (action == "fit") {
    std::vector<SingularFunction> basis{leading_phi()};
    auto fit = fit_singular_coefficients(u, basis, FitWindow{cfg.fit_lo, cfg.fit_hi}, cfg.fit_degree);
    write(cfg, "oracle_fit.json", fit_json(cfg, basis, fit));
    std::printf("%s c = %+.6e %+.6ei residual %.3e\n", basis[0].id().c_str(), fit.coefficients[0].real(),
                fit.coefficients[0].imag(), fit.relative_residual);
    return 0;
  }
  auto rep = regularity_meter(u, MeterSpec::corner());
  rep.id = od.id() + " corner";
  write(cfg, "oracle_meter.json", regularity_json(rep));
  for (const auto& g : rep.orders)
    std::printf("order %d: %s (slope %.3f)\n", g.order, to_string(g.signature).c_str(), g.slope);
  return 0;
}

int run_verify(const Common& c, const std::vector<int>& only) {
  auto cfg = resolve(c);
  std::vector<CriterionResult> results;
  for (int id = 1; id <= 9; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    results.push_back(run_criterion(id));
    std::printf("%s\n", summary_line(results.back()).c_str());
    std::fflush(stdout);
  }
  write(cfg, "acceptance.json", acceptance_json(results));
  for (const auto& r : results)
    if (!r.passed) return 1;
  return 0;
}

int run_report(const Common& c, const std::vector<std::string>& files) {
  auto cfg = resolve(c);
  write(cfg, "summary.csv", merge_reports(files));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corner expansions on product domains"};
  app.require_subcommand(1);
  Common common;
  bool dump = false;
  int l = 1;
  std::vector<int> k{1, 1}, only;
  double r_max = 0.1;
  std::string action;
  std::vector<std::string> files;

  auto* expand = app.add_subcommand("expand", "assemble the corner expansion and write expansion.json");
  add_common(expand, common);
  expand->add_flag("--dump-grids", dump, "also write v0.cxgf, the binary corner slice of v0");

  auto* basis = app.add_subcommand("basis", "tabulate a singular function on the quarter plane");
  add_common(basis, common);
  basis->add_option("--l", l, "order l")->check(CLI::PositiveNumber);
  basis->add_option("--k", k, "antiderivative orders, two entries")->delimiter(',');
  basis->add_option("--r-max", r_max, "outer radius of the table");

  auto* oracle = app.add_subcommand("oracle", "reference solves, fits and regularity meters");
  add_common(oracle, common);
  oracle->add_option("action", action, "solve, fit or meter")->required()->check(CLI::IsMember({"solve", "fit", "meter"}));

  auto* verify = app.add_subcommand("verify", "run the acceptance suite and write acceptance.json");
  add_common(verify, common);
  verify->add_option("--only", only, "criterion ids")->delimiter(',');

  auto* report = app.add_subcommand("report", "merge JSON reports into summary.csv");
  add_common(report, common);
  report->add_option("files", files, "report files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*expand) return run_expand(common, dump);
    if (*basis) return run_basis(common, l, k, r_max);
    if (*oracle) return run_oracle(common, action);
    if (*verify) return run_verify(common, only);
    return run_report(common, files);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
