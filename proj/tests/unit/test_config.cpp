#include <gtest/gtest.h>

#include <json.hpp>

#include "cornex/config.hpp"
#include "cornex/error.hpp"
#include "cornex/report.hpp"

using namespace cornex;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsFollowTheScenario) {
  auto c = parse_config("[scenario]\nname = paraboloid\n[grid]\ncorner_nodes = 128\n");
  EXPECT_EQ(c.factors, (std::vector<std::string>{"paraboloid:1", "flat"}));
  EXPECT_EQ(c.corner_nodes, 128);
  EXPECT_EQ(c.tangential_nodes, defaults::tangential_nodes);
  EXPECT_EQ(c.domain().n(), 3);
}

TEST(Config, ScenarioArgumentWins) {
  auto c = parse_config("[scenario]\nname = paraboloid\n", "disks");
  EXPECT_EQ(c.oracle_domain, "disks");
  EXPECT_EQ(c.domain().n(), 4);
}

TEST(Config, FullFileRoundsTrip) {
  auto c = parse_config(
      "[domain]\nfactors = flat, quartic:0.5\ndims = 1,2\nradius = 0.4\n"
      "[data]\npreset = corner_bump:0.2\n[expansion]\ndepth = 2\ncertify = yes\n"
      "[cutoff]\nr0 = 3\nr1 = 5\n[oracle]\nmode_cap = 200\n[output]\ndir = runs/a\n");
  EXPECT_EQ(c.dims, (std::vector<int>{1, 2}));
  EXPECT_DOUBLE_EQ(c.local_radius, 0.4);
  EXPECT_TRUE(c.certify);
  auto o = c.assemble_options();
  EXPECT_DOUBLE_EQ(o.cutoff_r0, 3);
  EXPECT_DOUBLE_EQ(o.cutoff_r1, 5);
  EXPECT_EQ(c.out, "runs/a");
}

TEST(Config, MalformedValuesNameTheKey) {
  EXPECT_EQ(key_of("[grid]\ncorner_nodes = 96\n"), "grid.corner_nodes");
  EXPECT_EQ(key_of("[grid]\ncorner_nodes = many\n"), "grid.corner_nodes");
  EXPECT_EQ(key_of("[expansion]\ndepth = -1\n"), "expansion.depth");
  EXPECT_EQ(key_of("[expansion]\ncertify = maybe\n"), "expansion.certify");
  EXPECT_EQ(key_of("[grid]\nnodes = 64\n"), "grid.nodes");
  EXPECT_EQ(key_of("[domain]\nfactors = flat,torus\n"), "domain.factors");
  EXPECT_EQ(key_of("[domain]\ndims = 1\n"), "domain.dims");
  EXPECT_EQ(key_of("[domain]\nbase_point = 0\n"), "domain.base_point");
  EXPECT_EQ(key_of("[data]\npreset = ramp\n"), "data.preset");
  EXPECT_EQ(key_of("[cutoff]\nr0 = 4\nr1 = 2\n"), "cutoff.r1");
  EXPECT_EQ(key_of("[oracle]\ndomain = sphere:1\n"), "oracle.domain");
  EXPECT_EQ(key_of("[scenario]\nname = moebius\n"), "");
  EXPECT_THROW(load_config("/nonexistent/cornex.ini"), ConfigError);
}

TEST(Report, ExpansionJsonHasStableFields) {
  ScenarioConfig cfg;
  ExpansionResult r;
  MatchedTerm t;
  t.c = cplx(0, 0.5);
  t.basis = phi_antiderivative(phi_base({0, 1}, 1, {1, 1}), {1, 1});
  t.provenance = {"v0"};
  r.terms.push_back(t);
  auto j = nlohmann::json::parse(expansion_json(cfg, r));
  const auto& term = j["terms"][0];
  EXPECT_EQ(term["p"], (std::vector<int>{1, 2}));
  EXPECT_EQ(term["l"], 1);
  EXPECT_EQ(term["k"], (std::vector<int>{1, 1}));
  EXPECT_EQ(term["c_real"], 0.0);
  EXPECT_EQ(term["c_imag"], 0.5);
  EXPECT_EQ(term["provenance"][0], "v0");
  EXPECT_TRUE(j.contains("remainder"));
  EXPECT_EQ(expansion_json(cfg, r), expansion_json(cfg, r));
}

TEST(Report, NumbersArePinned) {
  EXPECT_EQ(format_number(0.1), "1.0000000000000001e-01");
  EXPECT_EQ(format_number(-2.5), "-2.5000000000000000e+00");
}
