#include <gtest/gtest.h>

#include "rdsym/catalog/verify.hpp"

using namespace rdsym;

namespace {

const Catalog& cat() {
  static const Catalog c = load_catalog();
  return c;
}

ParamPoint point(std::initializer_list<std::pair<const char*, Rational>> ps) {
  ParamPoint p;
  for (const auto& [k, v] : ps) p[k] = v;
  return p;
}

VerifyOptions quick(std::vector<int> dims = {1, 2}) {
  VerifyOptions o;
  o.dims = std::move(dims);
  o.samples = 2;
  return o;
}

std::string failures(const EntryReport& r) {
  std::string out;
  for (const auto& c : r.records) {
    if (!c.passed) out += to_json(c).dump() + "\n";
  }
  return out;
}

}  // namespace

TEST(Catalog, LoadsAllEntriesAndViews) {
  EXPECT_EQ(cat().entries.size(), 16u);
  EXPECT_EQ(cat().views.size(), 4u);
  EXPECT_EQ(cat().families.size(), 2u);
  EXPECT_EQ(cat().entry(2, 7).id, "T2.7");
  EXPECT_THROW(cat().entry("T9.9"), CatalogError);
  EXPECT_THROW(cat().entry(4, 1), CatalogError);
}

TEST(Catalog, SourceStrings) {
  const auto& t12 = cat().entry("T1.2");
  EXPECT_EQ(t12.f1, "exp(nu*z)*R^sigma*(lambda*u - mu*v)");
  EXPECT_EQ(t12.f2, "exp(nu*z)*R^sigma*(lambda*v + mu*u)");
  const auto& t27 = cat().entry("T2.7");
  EXPECT_EQ(t27.f1, "kappa*exp(v)");
  EXPECT_EQ(t27.f2, "beta*exp(v)");
}

TEST(Catalog, RejectsMalformedJson) {
  nlohmann::json j = nlohmann::json::parse(R"({"entries":[{"id":"X","table":1,"item":1,
      "params":{"p":"complex"},"f1":"u","f2":"v","main":[]}]})");
  EXPECT_THROW(catalog_from_json(j), CatalogError);
  EXPECT_THROW(load_catalog("/nonexistent/catalog.json"), CatalogError);
}

TEST(Catalog, InstantiateChecksParameters) {
  const auto& e = cat().entry("T1.2");
  EXPECT_THROW(instantiate(cat(), e, point({{"a", 1}}), 1), CatalogError);
  const auto p = point({{"a", 1}, {"nu", 2}, {"sigma", 2}, {"lambda", -1}, {"mu", 3}});
  EXPECT_NO_THROW(instantiate(cat(), e, p, 2));
  EXPECT_THROW(instantiate(cat(), e, p, 2, "no-such-choice"), CatalogError);
}

TEST(Catalog, GalileiFlagIsSharpOnTableOneItemTwo) {
  const auto& e = cat().entry("T1.2");
  auto on = instantiate(cat(), e, point({{"a", 1}, {"nu", 2}, {"sigma", 2}, {"lambda", -1}, {"mu", 3}}), 2);
  EXPECT_TRUE(extension_conditions(on.sys).galilei);
  auto off = instantiate(cat(), e, point({{"a", 1}, {"nu", 3}, {"sigma", 2}, {"lambda", -1}, {"mu", 3}}), 2);
  EXPECT_FALSE(extension_conditions(off.sys).galilei);
  auto conf = instantiate(cat(), e, point({{"a", Rational(1, 3)}, {"nu", Rational(2, 3)}, {"sigma", 2},
                                           {"lambda", -1}, {"mu", 3}}),
                          2);
  EXPECT_TRUE(extension_conditions(conf.sys).conformal);
}

// Points where the verified guards differ from the tabulated ones.
TEST(Catalog, GuardsHoldAtWitnessPoints) {
  {
    const auto in = instantiate(cat(), cat().entry("T3.2"),
                                point({{"a", 0}, {"mu", 0}, {"nu", -6}, {"sigma", 9}, {"lambda", 0}}), 1);
    const auto fl = extension_conditions(in.sys);
    ASSERT_TRUE(fl.gamma.has_value());
    EXPECT_TRUE(proven_zero(*fl.gamma - Expr(-6)));
  }
  {
    const auto in = instantiate(cat(), cat().entry("T3.2"),
                                point({{"a", 0}, {"mu", 2}, {"nu", 0}, {"sigma", Rational(7, 4)}, {"lambda", 0}}), 1);
    EXPECT_TRUE(extension_conditions(in.sys).galilei);
  }
}

TEST(Catalog, EntriesVerifyInLowDimension) {
  for (const char* id : {"T1.2", "T2.2", "T2.8", "T3.3"}) {
    const auto rep = verify_entry(cat(), cat().entry(id), quick({1, 2}));
    EXPECT_TRUE(rep.ok()) << failures(rep);
    EXPECT_GT(rep.count("main", true), 0u);
  }
}

TEST(Catalog, GuardViolationsAreWitnessed) {
  const auto rep = verify_entry(cat(), cat().entry("T3.1"), quick({1}));
  EXPECT_TRUE(rep.ok()) << failures(rep);
  EXPECT_GT(rep.count("guard-", true), 0u);
  EXPECT_GT(rep.count("perturb", true), 0u);
}

TEST(Catalog, ViewsShowExpectedFlags) {
  for (const auto& v : cat().views) {
    const auto rep = verify_view(cat(), v, quick({1, 2}));
    EXPECT_TRUE(rep.ok()) << v.name << "\n" << failures(rep);
    EXPECT_FALSE(rep.records.empty()) << v.name;
  }
}

TEST(Catalog, FamiliesKeepMainSymmetries) {
  for (const auto& v : cat().families) {
    const auto rep = verify_view(cat(), v, quick({1, 2, 3}));
    EXPECT_TRUE(rep.ok()) << v.name << "\n" << failures(rep);
  }
}
