#include "sitekit/sieve.hpp"

#include <string>

namespace sitekit {

bool is_sieve(const FinCategory& cat, ObjId base, ArrowSet members) {
  if (members & ~cat.maximal_sieve(base)) return false;
  for (ArrId f : cat.arrows_into(base)) {
    if (!((members >> f) & 1)) continue;
    for (ArrId g = 0; g < cat.num_arrows(); ++g) {
      if (!cat.composable(f, g)) continue;
      if (!((members >> cat.compose(f, g)) & 1)) return false;
    }
  }
  return true;
}

Sieve maximal_sieve(const FinCategory& cat, ObjId c) {
  return {c, cat.maximal_sieve(c)};
}

Sieve empty_sieve(ObjId c) { return {c, 0}; }

Sieve close_to_sieve(const FinCategory& cat, ObjId c, ArrowSet generators) {
  if (generators & ~cat.maximal_sieve(c)) {
    throw Error(ErrorKind::WrongCodomain,
                "generator does not target object " + cat.object_name(c));
  }
  ArrowSet members = 0;
  for (ArrId f : cat.arrows_into(c)) {
    if (!((generators >> f) & 1)) continue;
    // { f∘g | g composable }; g ranges over identities too, so f itself
    // lands in the closure.
    for (ArrId g = 0; g < cat.num_arrows(); ++g) {
      if (cat.composable(f, g)) members |= ArrowSet{1} << cat.compose(f, g);
    }
  }
  return {c, members};
}

ArrowSet pullback_bits(const FinCategory& cat, ArrId f, ArrowSet r) {
  ArrowSet out = 0;
  for (ArrId g : cat.arrows_into(cat.source(f))) {
    if ((r >> cat.compose(f, g)) & 1) out |= ArrowSet{1} << g;
  }
  return out;
}

Sieve pullback_sieve(const FinCategory& cat, ArrId f, const Sieve& r) {
  if (r.base != cat.target(f)) {
    throw Error(ErrorKind::BaseMismatch,
                "sieve based at " + cat.object_name(r.base) +
                    ", arrow targets " + cat.object_name(cat.target(f)));
  }
  return {cat.source(f), pullback_bits(cat, f, r.members)};
}

namespace {

void require_same_base(const Sieve& r, const Sieve& s) {
  if (r.base != s.base) {
    throw Error(ErrorKind::BaseMismatch, "sieves have different bases");
  }
}

}  // namespace

Sieve sieve_meet(const FinCategory& cat, const Sieve& r, const Sieve& s) {
  (void)cat;
  require_same_base(r, s);
  return {r.base, r.members & s.members};
}

Sieve sieve_join(const FinCategory& cat, const Sieve& r, const Sieve& s) {
  (void)cat;
  require_same_base(r, s);
  return {r.base, r.members | s.members};
}

ArrowSet implication_bits(const FinCategory& cat, ObjId base, ArrowSet r,
                          ArrowSet s) {
  ArrowSet out = 0;
  for (ArrId f : cat.arrows_into(base)) {
    ArrowSet fr = pullback_bits(cat, f, r);
    ArrowSet fs = pullback_bits(cat, f, s);
    if ((fr & ~fs) == 0) out |= ArrowSet{1} << f;
  }
  return out;
}

Sieve sieve_implication(const FinCategory& cat, const Sieve& r,
                        const Sieve& s) {
  require_same_base(r, s);
  return {r.base, implication_bits(cat, r.base, r.members, s.members)};
}

Sieve sieve_negation(const FinCategory& cat, const Sieve& r, const Sieve& z) {
  return sieve_implication(cat, r, z);
}

SieveTable enumerate_sieves(const FinCategory& cat, const Budget& budget) {
  SieveTable table;
  table.by_object.resize(cat.num_objects());
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    const auto& into = cat.arrows_into(c);
    const int k = static_cast<int>(into.size());
    if (k > budget.max_arrows_per_object) {
      throw Error(ErrorKind::SizeGuard,
                  "object " + cat.object_name(c) + " has " +
                      std::to_string(k) + " incoming arrows, budget allows " +
                      std::to_string(budget.max_arrows_per_object));
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      ArrowSet members = 0;
      for (int i = 0; i < k; ++i) {
        if ((mask >> i) & 1) members |= ArrowSet{1} << into[i];
      }
      if (is_sieve(cat, c, members)) table.by_object[c].push_back(members);
    }
    // Subset order already gives ascending bitset values per object.
    for (ArrowSet s : table.by_object[c]) table.universe.emplace_back(c, s);
  }
  return table;
}

}  // namespace sitekit
