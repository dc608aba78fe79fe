#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "sitekit/sieve.hpp"

using namespace sitekit;
using sitekit::testing::corpus;
using sitekit::testing::corpus_category;

TEST_CASE("sieve counts on the arrow category") {
  FinCategory cat = corpus_category("arrow");
  SieveTable table = enumerate_sieves(cat);
  CHECK(table.by_object[*cat.object_id("a")].size() == 2);
  CHECK(table.by_object[*cat.object_id("b")].size() == 3);
  CHECK(table.universe.size() == 5);
}

TEST_CASE("every enumerated sieve is a sieve and the list is exhaustive") {
  for (const FinCategory& cat : corpus()) {
    SieveTable table = enumerate_sieves(cat);
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      ArrowSet all = cat.maximal_sieve(c);
      // Walk every subset of the arrows into c and cross-check membership.
      std::vector<ArrId> arrows = cat.arrows_into(c);
      REQUIRE(arrows.size() <= 12);
      int found = 0;
      for (std::uint64_t pick = 0; pick < (1u << arrows.size()); ++pick) {
        ArrowSet bits = 0;
        for (std::size_t i = 0; i < arrows.size(); ++i) {
          if ((pick >> i) & 1) bits |= ArrowSet{1} << arrows[i];
        }
        bool listed = std::find(table.by_object[c].begin(),
                                table.by_object[c].end(),
                                bits) != table.by_object[c].end();
        CHECK(listed == is_sieve(cat, c, bits));
        if (listed) ++found;
      }
      CHECK(found == static_cast<int>(table.by_object[c].size()));
      CHECK((all & ~all) == 0);
    }
  }
}

TEST_CASE("closure is a closure operator") {
  for (const FinCategory& cat : corpus()) {
    SieveTable table = enumerate_sieves(cat);
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      ArrowSet all = cat.maximal_sieve(c);
      for (ArrowSet gen = 0; gen <= all; ++gen) {
        if ((gen & ~all) != 0) continue;
        Sieve s = close_to_sieve(cat, c, gen);
        CHECK(is_sieve(cat, c, s.members));
        CHECK((s.members & gen) == gen);
        // Idempotent.
        CHECK(close_to_sieve(cat, c, s.members).members == s.members);
        // Least: no smaller sieve contains the generators.
        for (ArrowSet t : table.by_object[c]) {
          if ((t & gen) == gen) CHECK((t & s.members) == s.members);
        }
      }
    }
  }
}

TEST_CASE("pullback along a composite factors") {
  for (const FinCategory& cat : corpus()) {
    SieveTable table = enumerate_sieves(cat);
    for (ArrId g = 0; g < cat.num_arrows(); ++g) {
      for (ArrId f = 0; f < cat.num_arrows(); ++f) {
        if (!cat.composable(g, f)) continue;
        ArrId gf = cat.compose(g, f);
        for (ArrowSet r : table.by_object[cat.target(g)]) {
          ArrowSet lhs = pullback_bits(cat, gf, r);
          ArrowSet rhs = pullback_bits(cat, f, pullback_bits(cat, g, r));
          CHECK(lhs == rhs);
        }
      }
    }
  }
}

TEST_CASE("pullback along an identity is the identity") {
  for (const FinCategory& cat : corpus()) {
    SieveTable table = enumerate_sieves(cat);
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      for (ArrowSet r : table.by_object[c]) {
        CHECK(pullback_bits(cat, cat.identity(c), r) == r);
      }
    }
  }
}

TEST_CASE("base mismatch is rejected") {
  FinCategory cat = corpus_category("arrow");
  Sieve on_a = maximal_sieve(cat, *cat.object_id("a"));
  ArrId f = *cat.arrow_id("f");
  CHECK_THROWS_AS(pullback_sieve(cat, f, on_a), Error);
  CHECK_THROWS_AS(
      close_to_sieve(cat, *cat.object_id("a"), ArrowSet{1} << f), Error);
}

TEST_CASE("the sieves on an object form a Heyting algebra") {
  for (const FinCategory& cat : corpus()) {
    SieveTable table = enumerate_sieves(cat);
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      const auto& sieves = table.by_object[c];
      for (ArrowSet r : sieves) {
        for (ArrowSet s : sieves) {
          Sieve sr{c, r}, ss{c, s};
          Sieve meet = sieve_meet(cat, sr, ss);
          Sieve join = sieve_join(cat, sr, ss);
          Sieve impl = sieve_implication(cat, sr, ss);
          CHECK(meet.members == (r & s));
          CHECK(is_sieve(cat, c, join.members));
          CHECK((join.members & (r | s)) == (r | s));
          CHECK(is_sieve(cat, c, impl.members));
          // Adjunction: t ∧ r <= s  iff  t <= (r ⇒ s).
          for (ArrowSet t : sieves) {
            bool lhs = (t & r & ~s) == 0;
            bool rhs = (t & ~impl.members) == 0;
            CHECK(lhs == rhs);
          }
        }
      }
    }
  }
}

TEST_CASE("negation relative to the empty sieve behaves classically enough") {
  FinCategory cat = corpus_category("arrow");
  ObjId b = *cat.object_id("b");
  ArrId f = *cat.arrow_id("f");
  Sieve just_f{b, ArrowSet{1} << f};
  Sieve nothing = empty_sieve(b);
  Sieve neg = sieve_negation(cat, just_f, nothing);
  CHECK((neg.members & just_f.members) == 0);
}
