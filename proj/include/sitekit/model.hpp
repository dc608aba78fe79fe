#ifndef SITEKIT_MODEL_HPP_
#define SITEKIT_MODEL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "sitekit/sheaf.hpp"

namespace sitekit {

// Finite-set-valued covariant functor: for f: A→B the action maps
// sets(A) → sets(B).
struct SetValuedFunctor {
  std::string name;
  std::vector<int> sizes;                // per object
  std::vector<std::vector<int>> action;  // per arrow: sets(src) -> sets(tgt)

  int size(ObjId c) const { return sizes[c]; }
  int act(ArrId f, int x) const { return action[f][x]; }
  bool operator==(const SetValuedFunctor&) const = default;
};

// Co-representable functor Hom(c, −).
SetValuedFunctor corepresentable_functor(const FinCategory& cat, ObjId c);

FunctorialityReport validate_functor(const FinCategory& cat,
                                     const SetValuedFunctor& f);

struct FlatnessReport {
  bool nonempty = false;
  bool span_completion = true;
  // Failing pair for span completion: (object A, x), (object B, y).
  std::vector<int> span_witness;
  bool equalizing = true;
  // Failing triple (f, g, x) for the equalizing condition.
  std::vector<int> equalizing_witness;
  bool flat() const { return nonempty && span_completion && equalizing; }
};

// Direct quantifier evaluation of the three flatness conditions.
FlatnessReport check_flatness(const FinCategory& cat,
                              const SetValuedFunctor& f);

// Cross-check oracle: cofilteredness of the category of elements.
FlatnessReport check_flatness_via_elements(const FinCategory& cat,
                                           const SetValuedFunctor& f);

struct ContinuityReport {
  bool continuous = true;
  bool flat_input = true;  // informational
  // First failure: (object A, covering sieve, element x).
  ObjId object = -1;
  ArrowSet sieve = 0;
  int element = -1;
};

// Covering sieves must act jointly surjectively.
ContinuityReport check_continuity(const Site& site,
                                  const SetValuedFunctor& f);

using NaturalMap = std::vector<std::vector<int>>;  // per object component

std::vector<NaturalMap> natural_transformations(const FinCategory& cat,
                                                const SetValuedFunctor& f,
                                                const SetValuedFunctor& g);

// Natural isomorphism between functors, if any.
std::optional<NaturalMap> iso_check(const FinCategory& cat,
                                    const SetValuedFunctor& f,
                                    const SetValuedFunctor& g);

// Canonical representative under per-object renamings: lexicographically
// least (sizes, action tables).
SetValuedFunctor canonical_form(const FinCategory& cat,
                                const SetValuedFunctor& f);

// All flat J-continuous functors with |F(A)| <= max_card, one per natural
// isomorphism class, in canonical order.
std::vector<SetValuedFunctor> enumerate_models(
    const Site& site, int max_card, const Budget& budget = global_budget());

// Variant used as an oracle: skip the continuity filter.
std::vector<SetValuedFunctor> enumerate_flat_functors(
    const FinCategory& cat, int max_card,
    const Budget& budget = global_budget());

struct HomogeneityReport {
  bool homogeneous = true;
  // First failing triple: indices (a, b) into fp, then j and χ as flat
  // natural-transformation tables.
  int a = -1, b = -1;
  NaturalMap j, chi;
};

// Def-style homogeneity at finite scale: every χ: a→M lifts along every
// j: a→b within the listed finitely presentable models.
HomogeneityReport check_homogeneous(const FinCategory& cat,
                                    const SetValuedFunctor& m,
                                    const std::vector<SetValuedFunctor>& fp);

}  // namespace sitekit

#endif  // SITEKIT_MODEL_HPP_
