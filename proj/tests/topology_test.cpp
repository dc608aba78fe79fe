#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "sitekit/topology.hpp"

using namespace sitekit;
using sitekit::testing::corpus;
using sitekit::testing::corpus_category;

TEST_CASE("canonical trivial and dense topologies validate everywhere") {
  for (const FinCategory& cat : corpus()) {
    for (CanonicalKind kind : {CanonicalKind::Trivial, CanonicalKind::Dense}) {
      GrothendieckTopology t = canonical_topology(cat, kind);
      CHECK(validate_topology(cat, t).valid);
      CHECK_FALSE(t.degenerate());
    }
  }
}

TEST_CASE("atomic succeeds exactly on right Ore categories") {
  for (const FinCategory& cat : corpus()) {
    bool ore = check_right_ore(cat).holds;
    if (ore) {
      GrothendieckTopology t = canonical_topology(cat, CanonicalKind::Atomic);
      CHECK(validate_topology(cat, t).valid);
    } else {
      try {
        canonical_topology(cat, CanonicalKind::Atomic);
        CHECK_MESSAGE(false, cat.name());
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotRightOre);
      }
    }
  }
}

TEST_CASE("generated topology on the arrow category is as computed by hand") {
  FinCategory cat = corpus_category("arrow");
  ObjId a = *cat.object_id("a"), b = *cat.object_id("b");
  ArrId f = *cat.arrow_id("f");
  Sieve seed{b, ArrowSet{1} << f};
  GrothendieckTopology t = generate_topology(cat, {seed});
  CHECK(t.covers[a] == std::set<ArrowSet>{cat.maximal_sieve(a)});
  CHECK(t.covers[b] ==
        std::set<ArrowSet>{ArrowSet{1} << f, cat.maximal_sieve(b)});
}

TEST_CASE("generation is a closure operator over seed sets") {
  for (const FinCategory& cat : corpus()) {
    SieveTable table = enumerate_sieves(cat);
    std::mt19937 rng(7);
    for (int round = 0; round < 12; ++round) {
      std::vector<Sieve> seeds;
      for (int i = 0; i < 2; ++i) {
        const auto& [c, bits] =
            table.universe[rng() % table.universe.size()];
        seeds.push_back({c, bits});
      }
      GrothendieckTopology t = generate_topology(cat, seeds);
      CHECK(validate_topology(cat, t).valid);
      for (const Sieve& s : seeds) CHECK(t.is_covering(s.base, s.members));
      // Idempotent: regenerating from all covers changes nothing.
      std::vector<Sieve> all;
      for (ObjId c = 0; c < cat.num_objects(); ++c) {
        for (ArrowSet s : t.covers[c]) all.push_back({c, s});
      }
      CHECK(generate_topology(cat, all) == t);
    }
  }
}

TEST_CASE("lectic enumeration agrees with the direct axiom filter") {
  for (const FinCategory& cat : corpus()) {
    TopologyLattice fast = enumerate_topologies(cat);
    TopologyLattice direct = enumerate_topologies_direct(cat);
    CHECK_MESSAGE(fast.elements == direct.elements, cat.name());
    for (const GrothendieckTopology& t : fast.elements) {
      CHECK(validate_topology(cat, t).valid);
    }
    CHECK(fast.bottom() == canonical_topology(cat, CanonicalKind::Trivial));
    CHECK(topology_leq(fast.bottom(), fast.top()));
    CHECK(fast.top().degenerate());
  }
}

TEST_CASE("topology counts stay frozen") {
  std::map<std::string, std::size_t> expected{
      {"terminal", 2}, {"arrow", 4}, {"z2", 2}, {"z3", 2}, {"idem", 3},
  };
  for (const auto& [name, count] : expected) {
    CHECK_MESSAGE(
        enumerate_topologies(corpus_category(name)).elements.size() == count,
        name);
  }
}

TEST_CASE("meet and join are the lattice operations they claim to be") {
  for (const FinCategory& cat : corpus()) {
    TopologyLattice lattice = enumerate_topologies(cat);
    for (const GrothendieckTopology& j : lattice.elements) {
      for (const GrothendieckTopology& k : lattice.elements) {
        GrothendieckTopology meet = lattice_ops(cat, j, k, LatticeOp::Meet);
        GrothendieckTopology join = lattice_ops(cat, j, k, LatticeOp::Join);
        CHECK(topology_leq(meet, j));
        CHECK(topology_leq(meet, k));
        CHECK(topology_leq(j, join));
        CHECK(topology_leq(k, join));
        for (const GrothendieckTopology& l : lattice.elements) {
          if (topology_leq(l, j) && topology_leq(l, k)) {
            CHECK(topology_leq(l, meet));
          }
          if (topology_leq(j, l) && topology_leq(k, l)) {
            CHECK(topology_leq(join, l));
          }
        }
      }
    }
  }
}

TEST_CASE("implication satisfies the Heyting adjunction on the arrow lattice") {
  FinCategory cat = corpus_category("arrow");
  TopologyLattice lattice = enumerate_topologies(cat);
  for (const GrothendieckTopology& j : lattice.elements) {
    for (const GrothendieckTopology& k : lattice.elements) {
      GrothendieckTopology impl =
          lattice_ops(cat, j, k, LatticeOp::Implication);
      for (const GrothendieckTopology& l : lattice.elements) {
        bool lhs =
            topology_leq(lattice_ops(cat, l, j, LatticeOp::Meet), k);
        bool rhs = topology_leq(l, impl);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("subtoposes of the generated arrow site") {
  FinCategory cat = corpus_category("arrow");
  ObjId b = *cat.object_id("b");
  ArrId f = *cat.arrow_id("f");
  GrothendieckTopology j = generate_topology(cat, {{b, ArrowSet{1} << f}});
  std::vector<GrothendieckTopology> above = enumerate_subtoposes(cat, j);
  CHECK(above.size() == 2);
  for (const GrothendieckTopology& t : above) CHECK(topology_leq(j, t));
}

TEST_CASE("validation reports one witness per broken axiom") {
  FinCategory cat = corpus_category("arrow");
  ObjId b = *cat.object_id("b");
  ArrId f = *cat.arrow_id("f");
  GrothendieckTopology bad;
  bad.covers.assign(cat.num_objects(), {});
  bad.covers[b] = {ArrowSet{1} << f};  // missing the maximal sieves
  TopologyReport report = validate_topology(cat, bad);
  CHECK_FALSE(report.valid);
  bool saw_maximality = false;
  for (const TopologyViolation& v : report.violations) {
    if (v.axiom == TopologyAxiom::Maximality) saw_maximality = true;
    CHECK_FALSE(v.describe(cat).empty());
  }
  CHECK(saw_maximality);
}
