#ifndef SITEKIT_SHEAF_HPP_
#define SITEKIT_SHEAF_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sitekit/topology.hpp"

namespace sitekit {

struct Site {
  const FinCategory& cat;
  const GrothendieckTopology& topology;
};

// Finite-set-valued presheaf: sets(c) = {0..sizes[c]-1}; for an arrow
// f: d→c the restriction acts sets(c) → sets(d).
struct Presheaf {
  std::string name;
  std::vector<int> sizes;                    // per object
  std::vector<std::vector<int>> restrict_;   // per arrow: sets(tgt) -> sets(src)

  int size(ObjId c) const { return sizes[c]; }
  int act(ArrId f, int x) const { return restrict_[f][x]; }
  bool zero() const;
};

// Representable presheaf Hom(−, c).
Presheaf representable_presheaf(const FinCategory& cat, ObjId c);
Presheaf constant_presheaf(const FinCategory& cat, int n);

struct FunctorialityReport {
  bool valid = true;
  // Violating pair (g, f) with act(f∘g) != act(g)∘act(f), or a single
  // identity arrow when an identity action is wrong.
  std::vector<ArrId> witness;
  std::string message;
};

FunctorialityReport validate_presheaf(const FinCategory& cat,
                                      const Presheaf& p);

struct MatchingFamily {
  Sieve sieve;
  std::map<ArrId, int> choice;  // member arrow f -> element of sets(dom f)
};

struct SheafReport {
  bool is_sheaf = true;
  // First violation: the matching family and how many amalgamations it has.
  std::optional<MatchingFamily> family;
  int amalgamations = 1;
  std::string message;
};

// Unique-amalgamation check over every covering sieve and matching family.
SheafReport check_sheaf(const Site& site, const Presheaf& p,
                        const Budget& budget = global_budget());

struct SubterminalReport {
  // Each subterminal is a 0/1 assignment per object.
  std::vector<std::vector<char>> subterminals;
  int count() const { return static_cast<int>(subterminals.size()); }
  bool two_valued() const { return count() == 2; }
};

SubterminalReport enumerate_subterminal_sheaves(const Site& site);

// J-closure of a sieve at c: arrows whose pullback is covering.
ArrowSet closure_bits(const Site& site, ObjId c, ArrowSet r);

// The Heyting algebra of J-closed sieves at one object.
struct ClosedSieveLattice {
  ObjId object;
  std::vector<ArrowSet> closed;  // ascending
  ArrowSet bottom;               // cl(∅)
  ArrowSet top;                  // maximal sieve
};

ClosedSieveLattice closed_sieve_lattice(const Site& site, ObjId c,
                                        const Budget& budget = global_budget());

struct SiteInvariantReport {
  bool atomic = false;
  std::string atomic_reason;
  bool two_valued = false;
  int subterminal_count = 0;
  bool boolean_site = false;
  bool de_morgan_site = false;
  bool degenerate = false;
  // For a Boolean failure: the object and non-complemented closed sieve.
  std::optional<std::pair<ObjId, ArrowSet>> boolean_witness;
  std::optional<std::pair<ObjId, ArrowSet>> de_morgan_witness;
};

SiteInvariantReport site_invariants(const Site& site,
                                    const Budget& budget = global_budget());

// Subpresheaf as per-object element bitmasks.
using SubPresheaf = std::vector<std::uint64_t>;

// All subpresheaves of p (objectwise subsets closed under restriction).
std::vector<SubPresheaf> enumerate_subpresheaves(
    const FinCategory& cat, const Presheaf& p,
    const Budget& budget = global_budget());

// All J-closed subobjects of p.
std::vector<SubPresheaf> enumerate_closed_subobjects(
    const Site& site, const Presheaf& p,
    const Budget& budget = global_budget());

struct ObjectInvariantReport {
  bool is_atom = false;
  bool is_indecomposable = false;
  bool is_compact = false;
  int closed_subobject_count = 0;
  std::string note;
};

// Object-level invariants of a J-sheaf; throws NotASheaf otherwise.
ObjectInvariantReport object_invariants(const Site& site, const Presheaf& p,
                                        const Budget& budget = global_budget());

}  // namespace sitekit

#endif  // SITEKIT_SHEAF_HPP_
