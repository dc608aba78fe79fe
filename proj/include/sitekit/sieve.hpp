#ifndef SITEKIT_SIEVE_HPP_
#define SITEKIT_SIEVE_HPP_

#include <vector>

#include "sitekit/category.hpp"

namespace sitekit {

// A sieve on `base`: a set of arrows with codomain `base`, closed under
// precomposition.  Members are a bitset over the global arrow index.
struct Sieve {
  ObjId base = -1;
  ArrowSet members = 0;

  bool contains(ArrId f) const { return (members >> f) & 1; }
  bool operator==(const Sieve&) const = default;
};

bool is_sieve(const FinCategory& cat, ObjId base, ArrowSet members);

Sieve maximal_sieve(const FinCategory& cat, ObjId c);
Sieve empty_sieve(ObjId c);

// Smallest sieve on c containing the generators: every f∘g with f a
// generator.  Throws WrongCodomain if a generator does not target c.
Sieve close_to_sieve(const FinCategory& cat, ObjId c, ArrowSet generators);

// f*(R) = { g with target source(f) | f∘g ∈ R }.  Throws BaseMismatch if R
// is not based at target(f).
Sieve pullback_sieve(const FinCategory& cat, ArrId f, const Sieve& r);

// Bitset pullback without constructing Sieve values; r is a sieve on
// target(f), the result is a sieve on source(f).
ArrowSet pullback_bits(const FinCategory& cat, ArrId f, ArrowSet r);

Sieve sieve_meet(const FinCategory& cat, const Sieve& r, const Sieve& s);
Sieve sieve_join(const FinCategory& cat, const Sieve& r, const Sieve& s);
// R⇒S = { f into base | f*(R) ⊆ f*(S) }, the Heyting implication.
Sieve sieve_implication(const FinCategory& cat, const Sieve& r,
                        const Sieve& s);
// Negation relative to Z: R⇒Z.
Sieve sieve_negation(const FinCategory& cat, const Sieve& r, const Sieve& z);

ArrowSet implication_bits(const FinCategory& cat, ObjId base, ArrowSet r,
                          ArrowSet s);

// All sieves on each object, each list sorted ascending by bitset value.
// Guarded by the per-object arrow budget (2^k subsets are scanned).
struct SieveTable {
  std::vector<std::vector<ArrowSet>> by_object;
  // Global universe of (object, sieve) pairs in canonical order.
  std::vector<std::pair<ObjId, ArrowSet>> universe;
};

SieveTable enumerate_sieves(const FinCategory& cat,
                            const Budget& budget = global_budget());

}  // namespace sitekit

#endif  // SITEKIT_SIEVE_HPP_
