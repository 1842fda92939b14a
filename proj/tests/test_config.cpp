#include "rlap/config.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rlap;

namespace {

std::string failing_field(const RunConfig& c) {
  try {
    c.validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(RunConfig, DefaultsValidate) {
  EXPECT_NO_THROW(RunConfig{}.validate());
  EXPECT_EQ(RunConfig{}.to_json()["command"], "spectrum");
}

TEST(RunConfig, RoundTripIsFixedPoint) {
  std::mt19937_64 rng(71);
  const std::vector<std::string> commands{"spectrum", "radial", "symmetrize", "verify"};
  const std::vector<std::string> quads{"auto", "product", "mc"};
  for (int t = 0; t < 200; ++t) {
    RunConfig c;
    c.command = commands[rng() % 4];
    c.n = 2 + static_cast<int>(rng() % 5);
    c.k = 0.1 + (rng() % 1000) / 97.0;
    c.degree = 1 + static_cast<int>(rng() % 6);
    c.quad = quads[rng() % 3];
    c.res = static_cast<int>(rng() % 40);
    c.count = 1000 + static_cast<int>(rng() % 100000);
    c.seed = rng();
    c.restrict_to = rng() % 2 ? "hopf" : "";
    c.profile = "perturbed:k=1,eps=0.0" + std::to_string(rng() % 10);
    c.grid = 64 + static_cast<int>(rng() % 5000);
    c.eigs = 1 + static_cast<int>(rng() % 10);
    c.field = "proj:1,2,3";
    c.group = "rot:1,2:16";
    c.samples = 1 + static_cast<int>(rng() % 1000);
    c.criteria = {1 + static_cast<int>(rng() % 11)};
    c.output = "out.json";
    const json once = c.to_json();
    const json twice = RunConfig::from_json(json::parse(once.dump())).to_json();
    EXPECT_EQ(once, twice);
    EXPECT_EQ(once.dump(), twice.dump());
  }
}

TEST(RunConfig, ValidationNamesField) {
  RunConfig c;
  c.n = 1;
  EXPECT_EQ(failing_field(c), "n");
  c = {};
  c.k = -1;
  EXPECT_EQ(failing_field(c), "k");
  c = {};
  c.degree = 7;
  EXPECT_EQ(failing_field(c), "degree");
  c = {};
  c.quad = "simpson";
  EXPECT_EQ(failing_field(c), "quad");
  c = {};
  c.n = 4;
  c.quad = "product";
  EXPECT_EQ(failing_field(c), "quad");
  c = {};
  c.quad = "product";
  c.res = 4;
  EXPECT_EQ(failing_field(c), "res");
  c = {};
  c.quad = "mc";
  c.count = 10;
  EXPECT_EQ(failing_field(c), "count");
  c = {};
  c.grid = 10;
  EXPECT_EQ(failing_field(c), "grid");
  c = {};
  c.eigs = 11;
  EXPECT_EQ(failing_field(c), "eigs");
  c = {};
  c.restrict_to = "hopf";
  EXPECT_EQ(failing_field(c), "restrict");
  c = {};
  c.restrict_to = "bogus";
  EXPECT_EQ(failing_field(c), "restrict");
  c = {};
  c.command = "symmetrize";
  EXPECT_EQ(failing_field(c), "field");
  c = {};
  c.command = "verify";
  c.criteria = {12};
  EXPECT_EQ(failing_field(c), "criteria");
  c = {};
  c.command = "plot";
  EXPECT_EQ(failing_field(c), "command");
}

TEST(RunConfig, FromJsonTypeErrors) {
  try {
    RunConfig::from_json(json{{"n", "three"}});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "n");
  }
  const RunConfig c = RunConfig::from_json(json{{"n", 3}, {"restrict", "hopf"}});
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.restrict_to, "hopf");
  EXPECT_EQ(c.degree, 3);
}

TEST(Parse, Profiles) {
  EXPECT_TRUE(parse_profile("round:k=2", 3).is_round(2.0));
  EXPECT_EQ(parse_profile("perturbed:k=1,eps=0.05", 2).describe(), "perturbed:k=1,eps=0.05");
  EXPECT_THROW(parse_profile("round", 2), ConfigError);
  EXPECT_THROW(parse_profile("round:q=1", 2), ConfigError);
  EXPECT_THROW(parse_profile("perturbed:k=1", 2), ConfigError);
  EXPECT_THROW(parse_profile("round:k=-1", 2), ConfigError);
  EXPECT_THROW(parse_profile("cone:k=1", 2), ConfigError);
  EXPECT_THROW(parse_profile("file:/nonexistent.csv", 2), ConfigError);
}

TEST(Parse, Fields) {
  const SphereModel m(3, 1.0);
  Vec p(4);
  p << 1, 0, 0, 0;
  EXPECT_LT((parse_field("killing:xy", m).eval(p) - Vec::Unit(4, 1)).norm(), 1e-15);
  EXPECT_LT((parse_field("killing:1,2", m).eval(p) - Vec::Unit(4, 1)).norm(), 1e-15);
  EXPECT_LT((parse_field("hopf:i", m).eval(p) - Vec::Unit(4, 1)).norm(), 1e-15);
  p << 0, 0, 0, 1;
  EXPECT_LT((parse_field("proj:1,0,0,0", m).eval(p) - Vec::Unit(4, 0)).norm(), 1e-15);
  for (const char* bad : {"proj:1,2", "proj:a,b,c,d", "killing:xx", "killing:x", "killing:1,9", "hopf:q",
                          "hopf:ij", "spin:1", "poly:/nonexistent.csv", "proj"}) {
    try {
      parse_field(bad, m);
      ADD_FAILURE() << bad;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), "field") << bad;
    }
  }
  EXPECT_THROW(parse_field("hopf:i", SphereModel(2, 1.0)), ConfigError);
}

TEST(Parse, Groups) {
  const SphereModel m(2, 2.0);
  EXPECT_EQ(parse_group("finite:reflect:3", m).describe(), "finite:reflect:3");
  EXPECT_EQ(parse_group("rot:1,2:16", m).describe(), "rot:1,2:16");
  const GroupSpec iso = parse_group("isotropy:0,0,1:100:seed=7", m);
  const auto& v = std::get<IsotropyAt>(iso.variant()).v;
  EXPECT_NEAR(v.norm(), 0.5, 1e-15);  // rescaled onto the sphere
  EXPECT_EQ(std::get<IsotropyAt>(iso.variant()).seed, 7u);
  EXPECT_EQ(std::get<IsotropyAt>(parse_group("isotropy:0,0,1:100", m).variant()).seed, 1u);
  EXPECT_EQ(parse_group("haar:50:seed=3", m).elements().size(), 50u);
  EXPECT_TRUE(parse_group("design:0,0,1:3", m).exact());
  for (const char* bad : {"finite:reflect:4", "finite:swap:1", "rot:1:16", "rot:1,2:0", "rot:1,1:8",
                          "isotropy:0,0:10", "isotropy:0,0,0:10", "isotropy:0,0,1:10:sd=3",
                          "haar:x", "haar:10:seed=-1", "design:0,0,1", "dihedral:4", ""}) {
    try {
      parse_group(bad, m);
      ADD_FAILURE() << bad;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), "group") << bad;
    }
  }
}

TEST(Parse, RuleSelection) {
  RunConfig c;
  const SphereModel m2(2, 1.0);
  EXPECT_EQ(make_rule(c, m2, 1).kind, RuleKind::Product);
  EXPECT_EQ(make_rule(c, m2, 1).resolution, 8);
  EXPECT_EQ(make_rule(c, m2, 4).resolution, 12);
  c.quad = "product";
  c.res = 9;
  EXPECT_EQ(make_rule(c, m2, 4).resolution, 9);
  c.quad = "mc";
  c.count = 2000;
  c.seed = 4;
  const QuadratureRule mc = make_rule(c, m2, 1);
  EXPECT_EQ(mc.kind, RuleKind::MonteCarlo);
  EXPECT_EQ(mc.size(), 2000);
  EXPECT_EQ(mc.seed, 4u);
  c = {};
  EXPECT_EQ(make_rule(c, SphereModel(4, 1.0), 1).kind, RuleKind::MonteCarlo);
}

TEST(Parse, Vectors) {
  EXPECT_EQ(parse_vector("1, 2.5,-3", "x").size(), 3);
  EXPECT_THROW(parse_vector("", "x"), ConfigError);
  EXPECT_THROW(parse_vector("1,,2", "x"), ConfigError);
  EXPECT_THROW(parse_vector("1,2e", "x"), ConfigError);
}
