#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "corpus.hpp"
#include "sitekit/model.hpp"

using namespace sitekit;
using sitekit::testing::corpus;
using sitekit::testing::corpus_category;

namespace {

// Every covariant functor with all fibers of size <= max_card, by direct
// table enumeration.  Independent of the library's own enumerator.
std::vector<SetValuedFunctor> brute_functors(const FinCategory& cat,
                                             int max_card) {
  std::vector<SetValuedFunctor> out;
  std::vector<int> sizes(cat.num_objects(), 0);
  std::function<void(int)> pick_sizes = [&](int c) {
    if (c == cat.num_objects()) {
      SetValuedFunctor f{"brute", sizes, {}};
      f.action.assign(cat.num_arrows(), {});
      std::function<void(ArrId)> pick_actions = [&](ArrId a) {
        if (a == cat.num_arrows()) {
          if (validate_functor(cat, f).valid) out.push_back(f);
          return;
        }
        int dom = sizes[cat.source(a)], cod = sizes[cat.target(a)];
        if (dom == 0) {
          pick_actions(a + 1);
          return;
        }
        if (cod == 0) return;  // no map out of a nonempty set
        std::vector<int> table(dom, 0);
        while (true) {
          f.action[a] = table;
          pick_actions(a + 1);
          int i = 0;
          while (i < dom && ++table[i] == cod) table[i++] = 0;
          if (i == dom) break;
        }
      };
      pick_actions(0);
      return;
    }
    for (int n = 0; n <= max_card; ++n) {
      sizes[c] = n;
      pick_sizes(c + 1);
    }
  };
  pick_sizes(0);
  return out;
}

}  // namespace

TEST_CASE("corepresentables validate and are flat") {
  for (const FinCategory& cat : corpus()) {
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      SetValuedFunctor f = corepresentable_functor(cat, c);
      CHECK(validate_functor(cat, f).valid);
      CHECK(check_flatness(cat, f).flat());
      CHECK(check_flatness_via_elements(cat, f).flat());
    }
  }
}

TEST_CASE("the empty functor fails the nonemptiness axiom") {
  for (const FinCategory& cat : corpus()) {
    SetValuedFunctor empty{"empty", std::vector<int>(cat.num_objects(), 0),
                           std::vector<std::vector<int>>(cat.num_arrows())};
    CHECK(validate_functor(cat, empty).valid);
    FlatnessReport r = check_flatness(cat, empty);
    CHECK_FALSE(r.nonempty);
    CHECK_FALSE(r.flat());
  }
}

TEST_CASE("direct flatness agrees with the category-of-elements oracle") {
  for (const std::string& name :
       {"terminal", "arrow", "span", "parallel", "z2", "idem"}) {
    FinCategory cat = corpus_category(name);
    for (const SetValuedFunctor& f : brute_functors(cat, 2)) {
      FlatnessReport direct = check_flatness(cat, f);
      FlatnessReport oracle = check_flatness_via_elements(cat, f);
      CHECK_MESSAGE(direct.flat() == oracle.flat(), name);
    }
  }
}

TEST_CASE("z2 at cardinality two has exactly the regular action") {
  FinCategory cat = corpus_category("z2");
  GrothendieckTopology triv = canonical_topology(cat, CanonicalKind::Trivial);
  std::vector<SetValuedFunctor> models = enumerate_models({cat, triv}, 2);
  REQUIRE(models.size() == 1);
  ArrId s = *cat.arrow_id("s");
  CHECK(models[0].sizes == std::vector<int>{2});
  CHECK(models[0].action[s] == std::vector<int>{1, 0});
}

TEST_CASE("continuity filters by joint surjectivity of covers") {
  FinCategory cat = corpus_category("arrow");
  ObjId a = *cat.object_id("a"), b = *cat.object_id("b");
  ArrId f = *cat.arrow_id("f");
  GrothendieckTopology j = generate_topology(cat, {{b, ArrowSet{1} << f}});
  Site site{cat, j};
  SetValuedFunctor skip{"skip", {0, 1}, {}};
  skip.action.assign(cat.num_arrows(), {});
  skip.action[cat.identity(b)] = {0};
  CHECK(validate_functor(cat, skip).valid);
  ContinuityReport r = check_continuity(site, skip);
  CHECK_FALSE(r.continuous);
  CHECK(r.object == b);

  SetValuedFunctor both{"both", {1, 1}, {}};
  both.action.assign(cat.num_arrows(), {});
  both.action[cat.identity(a)] = {0};
  both.action[cat.identity(b)] = {0};
  both.action[f] = {0};
  CHECK(check_continuity(site, both).continuous);
}

TEST_CASE("Yoneda: maps out of a corepresentable count points") {
  for (const std::string& name : {"arrow", "chain3", "z2", "z3", "square"}) {
    FinCategory cat = corpus_category(name);
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      SetValuedFunctor yc = corepresentable_functor(cat, c);
      for (ObjId d = 0; d < cat.num_objects(); ++d) {
        SetValuedFunctor g = corepresentable_functor(cat, d);
        std::size_t homs = natural_transformations(cat, yc, g).size();
        CHECK(homs == static_cast<std::size_t>(g.sizes[c]));
      }
    }
  }
}

TEST_CASE("iso_check finds renamings and rejects non-isomorphic functors") {
  FinCategory cat = corpus_category("z2");
  ArrId s = *cat.arrow_id("s");
  SetValuedFunctor regular{"regular", {2}, {}};
  regular.action.assign(cat.num_arrows(), {});
  regular.action[cat.identity(0)] = {0, 1};
  regular.action[s] = {1, 0};
  SetValuedFunctor renamed = regular;
  renamed.action[s] = {1, 0};  // same up to swapping element labels
  CHECK(iso_check(cat, regular, renamed).has_value());

  SetValuedFunctor fixed{"fixed", {2}, {}};
  fixed.action.assign(cat.num_arrows(), {});
  fixed.action[cat.identity(0)] = {0, 1};
  fixed.action[s] = {0, 1};
  CHECK_FALSE(iso_check(cat, regular, fixed).has_value());
}

TEST_CASE("canonical_form is invariant under element renaming") {
  FinCategory cat = corpus_category("z3");
  ArrId r = *cat.arrow_id("r"), r2 = *cat.arrow_id("r2");
  SetValuedFunctor a{"a", {3}, {}};
  a.action.assign(cat.num_arrows(), {});
  a.action[cat.identity(0)] = {0, 1, 2};
  a.action[r] = {1, 2, 0};
  a.action[r2] = {2, 0, 1};
  // Rename elements by the cycle 0->2->1->0.
  std::vector<int> perm{2, 0, 1};
  SetValuedFunctor b = a;
  for (ArrId f = 0; f < cat.num_arrows(); ++f) {
    for (int x = 0; x < 3; ++x) b.action[f][perm[x]] = perm[a.action[f][x]];
  }
  CHECK(canonical_form(cat, a) == canonical_form(cat, b));
  CHECK(iso_check(cat, a, b).has_value());
}

TEST_CASE("model enumeration is oracle-checked at small cardinality") {
  for (const std::string& name : {"terminal", "arrow", "z2", "idem"}) {
    FinCategory cat = corpus_category(name);
    GrothendieckTopology triv =
        canonical_topology(cat, CanonicalKind::Trivial);
    std::vector<SetValuedFunctor> fast = enumerate_models({cat, triv}, 2);
    // Oracle: brute tables, flatness via the elements criterion, dedup by
    // pairwise isomorphism.  Continuity is vacuous for trivial topologies.
    std::vector<SetValuedFunctor> slow;
    for (const SetValuedFunctor& f : brute_functors(cat, 2)) {
      if (!check_flatness_via_elements(cat, f).flat()) continue;
      bool fresh = true;
      for (const SetValuedFunctor& seen : slow) {
        if (iso_check(cat, seen, f)) fresh = false;
      }
      if (fresh) slow.push_back(f);
    }
    CHECK_MESSAGE(fast.size() == slow.size(), name);
  }
}

TEST_CASE("homogeneity holds trivially for the terminal category") {
  FinCategory cat = corpus_category("terminal");
  SetValuedFunctor one{"one", {1}, {}};
  one.action.assign(cat.num_arrows(), {});
  one.action[cat.identity(0)] = {0};
  HomogeneityReport r = check_homogeneous(cat, one, {one});
  CHECK(r.homogeneous);
}

TEST_CASE("a non-surjective inclusion breaks homogeneity") {
  FinCategory cat = corpus_category("terminal");
  SetValuedFunctor one{"one", {1}, {}};
  one.action.assign(cat.num_arrows(), {});
  one.action[cat.identity(0)] = {0};
  SetValuedFunctor two{"two", {2}, {}};
  two.action.assign(cat.num_arrows(), {});
  two.action[cat.identity(0)] = {0, 1};
  // The identity chi: two -> two cannot lift along the collapse j: two -> one.
  HomogeneityReport r = check_homogeneous(cat, two, {one, two});
  CHECK_FALSE(r.homogeneous);
}
