#include "cornex/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <set>
#include <sstream>

#include "cornex/data.hpp"
#include "cornex/error.hpp"
#include "cornex/oracle.hpp"

namespace cornex {

namespace pt = boost::property_tree;

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v;
  if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError(key, "cannot parse '" + text + "'");
  return v;
}

template <>
bool parse_value<bool>(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + text + "'");
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& s : split(text)) out.push_back(parse_value<T>(key, s));
  return out;
}

void apply(ScenarioConfig& c, const pt::ptree& tree) {
  static const std::set<std::string> known{
      "scenario.name",         "domain.factors",       "domain.dims",        "domain.base_point",
      "domain.radius",         "data.preset",          "grid.corner_nodes",  "grid.tangential_nodes",
      "expansion.depth",       "expansion.certify",    "expansion.profiles", "cutoff.r0",
      "cutoff.r1",             "oracle.domain",        "oracle.mode_cap",    "oracle.fit_lo",
      "oracle.fit_hi",         "oracle.fit_degree",    "output.dir"};
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError(section, "key outside a section");
    for (const auto& [key, node] : body) {
      std::string full = section + "." + key;
      if (!known.count(full)) throw ConfigError(full, "unknown key");
      const std::string& v = node.data();
      if (full == "scenario.name") c.name = v;
      else if (full == "domain.factors") c.factors = split(v);
      else if (full == "domain.dims") c.dims = parse_list<int>(full, v);
      else if (full == "domain.base_point") c.base_point = parse_list<double>(full, v);
      else if (full == "domain.radius") c.local_radius = parse_value<double>(full, v);
      else if (full == "data.preset") c.data = v;
      else if (full == "grid.corner_nodes") c.corner_nodes = parse_value<int>(full, v);
      else if (full == "grid.tangential_nodes") c.tangential_nodes = parse_value<int>(full, v);
      else if (full == "expansion.depth") c.depth = parse_value<int>(full, v);
      else if (full == "expansion.certify") c.certify = parse_value<bool>(full, v);
      else if (full == "expansion.profiles") c.profiles = parse_value<bool>(full, v);
      else if (full == "cutoff.r0") c.cutoff_r0 = parse_value<double>(full, v);
      else if (full == "cutoff.r1") c.cutoff_r1 = parse_value<double>(full, v);
      else if (full == "oracle.domain") c.oracle_domain = v;
      else if (full == "oracle.mode_cap") c.mode_cap = parse_value<int>(full, v);
      else if (full == "oracle.fit_lo") c.fit_lo = parse_value<double>(full, v);
      else if (full == "oracle.fit_hi") c.fit_hi = parse_value<double>(full, v);
      else if (full == "oracle.fit_degree") c.fit_degree = parse_value<int>(full, v);
      else if (full == "output.dir") c.out = v;
    }
  }
}

ScenarioConfig from_tree(const pt::ptree& tree, const std::string& scenario) {
  std::string name = scenario;
  if (name.empty()) name = tree.get<std::string>("scenario.name", "flat");
  ScenarioConfig c;
  auto names = builtin_scenarios();
  if (std::find(names.begin(), names.end(), name) != names.end()) c = builtin_scenario(name);
  apply(c, tree);
  c.name = name;
  validate(c);
  return c;
}

}  // namespace

ProductDomainSpec ScenarioConfig::domain() const {
  auto d = make_domain(factors, dims, local_radius);
  if (!base_point.empty()) d.base_point = base_point;
  return d;
}

AssembleOptions ScenarioConfig::assemble_options() const {
  AssembleOptions o;
  o.grid.corner_nodes = corner_nodes;
  o.grid.tangential_nodes = tangential_nodes;
  o.certify = certify;
  o.profiles = profiles;
  o.cutoff_r0 = cutoff_r0;
  o.cutoff_r1 = cutoff_r1;
  return o;
}

std::vector<std::string> builtin_scenarios() { return {"flat", "paraboloid", "disk", "disks", "square"}; }

ScenarioConfig builtin_scenario(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "flat" || name == "square") return c;
  if (name == "paraboloid") {
    c.factors = {"paraboloid:1", "flat"};
    c.dims = {2, 1};
    c.oracle_domain = "disk:1,interval:1";
    return c;
  }
  if (name == "disk") {
    c.factors = {"disk:1", "flat"};
    c.dims = {2, 1};
    c.oracle_domain = "disk:1,interval:1";
    return c;
  }
  if (name == "disks") {
    c.factors = {"disk:1", "disk:1"};
    c.dims = {2, 2};
    c.oracle_domain = "disks";
    return c;
  }
  throw ConfigError("scenario.name", "unknown scenario '" + name + "'");
}

void validate(const ScenarioConfig& c) {
  if (!power_of_two(c.corner_nodes)) throw ConfigError("grid.corner_nodes", "must be a power of two");
  if (!power_of_two(c.tangential_nodes)) throw ConfigError("grid.tangential_nodes", "must be a power of two");
  if (c.depth < 0) throw ConfigError("expansion.depth", "must be nonnegative");
  if (c.local_radius <= 0) throw ConfigError("domain.radius", "must be positive");
  if (c.factors.size() != c.dims.size()) throw ConfigError("domain.dims", "needs one entry per factor");
  if (c.cutoff_r0 < 0 || (c.cutoff_r1 > 0 && c.cutoff_r1 <= c.cutoff_r0))
    throw ConfigError("cutoff.r1", "radii must satisfy 0 <= r0 < r1");
  if (c.mode_cap <= 0) throw ConfigError("oracle.mode_cap", "must be positive");
  if (!(c.fit_lo > 0 && c.fit_lo < c.fit_hi)) throw ConfigError("oracle.fit_hi", "window must satisfy 0 < lo < hi");
  if (c.fit_degree < 0) throw ConfigError("oracle.fit_degree", "must be nonnegative");
  ProductDomainSpec d;
  try {
    d = make_domain(c.factors, c.dims, c.local_radius);
  } catch (const Error& e) {
    throw ConfigError("domain.factors", e.what());
  }
  if (!c.base_point.empty() && static_cast<int>(c.base_point.size()) != d.n())
    throw ConfigError("domain.base_point", "needs " + std::to_string(d.n()) + " coordinates");
  try {
    d = c.domain();
    validate(d);
  } catch (const Error& e) {
    throw ConfigError(c.base_point.empty() ? "domain.factors" : "domain.base_point", e.what());
  }
  try {
    make_data(c.data, d);
  } catch (const Error& e) {
    throw ConfigError("data.preset", e.what());
  }
  try {
    OracleDomain::parse(c.oracle_domain);
  } catch (const Error& e) {
    throw ConfigError("oracle.domain", e.what());
  }
}

ScenarioConfig parse_config(const std::string& text, const std::string& scenario) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }
  return from_tree(tree, scenario);
}

ScenarioConfig load_config(const std::string& path, const std::string& scenario) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), scenario);
}

}  // namespace cornex
