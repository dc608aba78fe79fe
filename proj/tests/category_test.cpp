#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "corpus.hpp"

using namespace sitekit;
using sitekit::testing::corpus;
using sitekit::testing::corpus_category;

TEST_CASE("corpus builds and stays within the advertised size") {
  auto cats = corpus();
  CHECK(cats.size() >= 12);
  for (const FinCategory& cat : cats) {
    CHECK(cat.num_objects() <= 5);
    CHECK(cat.num_arrows() <= 12);
  }
}

TEST_CASE("identities are synthesized and obey the laws") {
  for (const FinCategory& cat : corpus()) {
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      ArrId id = cat.identity(c);
      CHECK(cat.source(id) == c);
      CHECK(cat.target(id) == c);
      CHECK(cat.is_identity(id));
      CHECK(cat.arrow_name(id) == "id_" + cat.object_name(c));
    }
    for (ArrId f = 0; f < cat.num_arrows(); ++f) {
      CHECK(cat.compose(cat.identity(cat.target(f)), f) == f);
      CHECK(cat.compose(f, cat.identity(cat.source(f))) == f);
    }
  }
}

TEST_CASE("composition is total and associative") {
  for (const FinCategory& cat : corpus()) {
    for (ArrId g = 0; g < cat.num_arrows(); ++g) {
      for (ArrId f = 0; f < cat.num_arrows(); ++f) {
        if (!cat.composable(g, f)) continue;
        ArrId gf = cat.compose(g, f);
        CHECK(cat.source(gf) == cat.source(f));
        CHECK(cat.target(gf) == cat.target(g));
        for (ArrId h = 0; h < cat.num_arrows(); ++h) {
          if (!cat.composable(h, g)) continue;
          CHECK(cat.compose(cat.compose(h, g), f) ==
                cat.compose(h, cat.compose(g, f)));
        }
      }
    }
  }
}

TEST_CASE("invalid specs are rejected") {
  CategorySpec missing{"m",
                       {"a", "b", "c"},
                       {{"f", "a", "b"}, {"g", "b", "c"}},
                       {}};
  CHECK_THROWS_AS(FinCategory::build(missing), Error);
  try {
    FinCategory::build(missing);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingComposite);
  }

  // g(fh) = g while (gf)h = f under this table; not associative.
  CategorySpec assoc{"bad",
                     {"x"},
                     {{"f", "x", "x"}, {"g", "x", "x"}, {"h", "x", "x"}},
                     {{"f", "f", "f"}, {"f", "g", "h"}, {"f", "h", "f"},
                      {"g", "f", "f"}, {"g", "g", "g"}, {"g", "h", "g"},
                      {"h", "f", "g"}, {"h", "g", "h"}, {"h", "h", "h"}}};
  try {
    FinCategory::build(assoc);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AssociativityViolation);
  }

  CategorySpec dup{"d", {"a"}, {{"f", "a", "a"}, {"f", "a", "a"}}, {}};
  CHECK_THROWS_AS(FinCategory::build(dup), Error);
}

TEST_CASE("opposite is an involution that swaps sources and targets") {
  for (const FinCategory& cat : corpus()) {
    FinCategory op = cat.opposite();
    CHECK(op.num_objects() == cat.num_objects());
    CHECK(op.num_arrows() == cat.num_arrows());
    for (ArrId f = 0; f < cat.num_arrows(); ++f) {
      CHECK(op.source(f) == cat.target(f));
      CHECK(op.target(f) == cat.source(f));
    }
    CHECK(op.opposite() == cat);
  }
}

TEST_CASE("to_spec round-trips") {
  for (const FinCategory& cat : corpus()) {
    CHECK(FinCategory::build(cat.to_spec()) == cat);
  }
}

TEST_CASE("property checks match the hand-derived table") {
  // name -> (right Ore, amalgamation, joint embedding)
  std::map<std::string, std::array<bool, 3>> expected{
      {"terminal", {true, true, true}},
      {"arrow", {true, true, true}},
      {"discrete2", {true, true, false}},
      {"discrete3", {true, true, false}},
      {"span", {true, false, false}},
      {"cospan", {false, true, true}},
      {"parallel", {false, false, true}},
      {"chain3", {true, true, true}},
      {"z2", {true, true, true}},
      {"z3", {true, true, true}},
      {"idem", {true, true, true}},
      {"leftzero", {false, true, true}},
      {"square", {true, true, true}},
      {"chain4", {true, true, true}},
  };
  for (const FinCategory& cat : corpus()) {
    auto it = expected.find(cat.name());
    REQUIRE(it != expected.end());
    CHECK_MESSAGE(check_right_ore(cat).holds == it->second[0], cat.name());
    CHECK_MESSAGE(check_amalgamation(cat).holds == it->second[1], cat.name());
    CHECK_MESSAGE(check_joint_embedding(cat).holds == it->second[2],
                  cat.name());
  }
}

TEST_CASE("amalgamation is right Ore on the opposite") {
  for (const FinCategory& cat : corpus()) {
    CHECK(check_amalgamation(cat).holds ==
          check_right_ore(cat.opposite()).holds);
  }
}

TEST_CASE("completions replay against the category") {
  for (const FinCategory& cat : corpus()) {
    PropertyReport ore = check_right_ore(cat);
    if (!ore.holds) {
      CHECK(ore.failure.size() == 2);
      continue;
    }
    for (const auto& [cospan, completion] : ore.completions) {
      ArrId f = cospan[0], g = cospan[1];
      ArrId u = completion[0], v = completion[1];
      CHECK(cat.compose(f, u) == cat.compose(g, v));
    }
  }
}

TEST_CASE("budget guards reject oversized specs") {
  CategorySpec big{"big", {}, {}, {}};
  for (int i = 0; i < 20; ++i) big.objects.push_back("o" + std::to_string(i));
  try {
    FinCategory::build(big);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SizeGuard);
  }
}
