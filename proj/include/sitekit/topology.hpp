#ifndef SITEKIT_TOPOLOGY_HPP_
#define SITEKIT_TOPOLOGY_HPP_

#include <set>
#include <string>
#include <vector>

#include "sitekit/sieve.hpp"

namespace sitekit {

// Per-object covering families.  Values are ordered sets of sieve bitsets so
// topologies compare and sort deterministically.
struct GrothendieckTopology {
  std::vector<std::set<ArrowSet>> covers;  // indexed by object id

  bool is_covering(ObjId c, ArrowSet sieve) const {
    return covers[c].count(sieve) > 0;
  }
  // The degenerate topology has the empty sieve covering somewhere; it is
  // the top of the lattice and a legal value everywhere.
  bool degenerate() const;

  bool operator==(const GrothendieckTopology&) const = default;
  auto operator<=>(const GrothendieckTopology&) const = default;
};

// Objectwise containment of covering families: every J-cover is a K-cover.
bool topology_leq(const GrothendieckTopology& j, const GrothendieckTopology& k);

enum class TopologyAxiom { Maximality, Stability, Transitivity };

struct TopologyViolation {
  TopologyAxiom axiom;
  ObjId object;
  ArrowSet sieve;
  ArrId arrow;  // -1 when not applicable
  std::string describe(const FinCategory& cat) const;
};

struct TopologyReport {
  bool valid = true;
  std::vector<TopologyViolation> violations;  // one minimal witness per axiom
};

TopologyReport validate_topology(const FinCategory& cat,
                                 const GrothendieckTopology& j);

// Least Grothendieck topology containing the seeds, computed as the fixpoint
// of the stability and transitivity rules over maximal sieves plus seeds.
GrothendieckTopology generate_topology(const FinCategory& cat,
                                       const std::vector<Sieve>& seeds,
                                       const Budget& budget = global_budget());

enum class CanonicalKind { Trivial, Atomic, Dense };

// Trivial: only maximal sieves.  Atomic: all nonempty sieves; requires the
// right Ore condition (throws NotRightOre with the failing cospan).  Dense:
// sieves every arrow's precompositions meet (the ¬¬-topology).
GrothendieckTopology canonical_topology(const FinCategory& cat,
                                        CanonicalKind kind);

struct TopologyLattice {
  std::vector<GrothendieckTopology> elements;  // canonically sorted

  const GrothendieckTopology& bottom() const;  // trivial topology
  const GrothendieckTopology& top() const;     // every sieve covers
  int index_of(const GrothendieckTopology& j) const;
};

// The complete duplicate-free list of topologies on cat, enumerated with a
// lectic closure sweep driven by generate_topology.
TopologyLattice enumerate_topologies(const FinCategory& cat,
                                     const Budget& budget = global_budget());

// Independent oracle: filter every subset of the sieve universe by the
// topology axioms directly.  Exponential; only for tiny categories.
TopologyLattice enumerate_topologies_direct(
    const FinCategory& cat, const Budget& budget = global_budget());

enum class LatticeOp { Meet, Join, Implication };

// Meet: objectwise intersection.  Join: generated by the union.
// Implication J⇒K: largest L with meet(L, J) ⊆ K, via lattice enumeration.
GrothendieckTopology lattice_ops(const FinCategory& cat,
                                 const GrothendieckTopology& j,
                                 const GrothendieckTopology& k, LatticeOp op,
                                 const Budget& budget = global_budget());

// All topologies containing J, each standing for one subtopos of Sh(C,J).
std::vector<GrothendieckTopology> enumerate_subtoposes(
    const FinCategory& cat, const GrothendieckTopology& j,
    const Budget& budget = global_budget());

}  // namespace sitekit

#endif  // SITEKIT_TOPOLOGY_HPP_
