#ifndef SITEKIT_CATEGORY_HPP_
#define SITEKIT_CATEGORY_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sitekit/error.hpp"

namespace sitekit {

// Object and arrow ids are dense integers assigned in declaration order so
// sets of them fit in bitsets (arrows are capped at 64 by the budget).
using ObjId = int;
using ArrId = int;
using ArrowSet = std::uint64_t;

struct ArrowDecl {
  std::string name;
  std::string source;
  std::string target;
};

struct ComposeDecl {
  std::string outer;   // g in g∘f
  std::string inner;   // f
  std::string result;  // g∘f
};

// Textual description of a category prior to validation.  Identities are
// implicit: build_category synthesizes one per object, named id_<object>.
struct CategorySpec {
  std::string name;
  std::vector<std::string> objects;
  std::vector<ArrowDecl> arrows;
  std::vector<ComposeDecl> equations;
};

// A finite category with a total, validated composition table.  Immutable
// after construction; safe to share across threads.
class FinCategory {
 public:
  static FinCategory build(const CategorySpec& spec,
                           const Budget& budget = global_budget());

  int num_objects() const { return static_cast<int>(object_names_.size()); }
  int num_arrows() const { return static_cast<int>(arrow_src_.size()); }

  ObjId source(ArrId f) const { return arrow_src_[f]; }
  ObjId target(ArrId f) const { return arrow_tgt_[f]; }
  ArrId identity(ObjId c) const { return identity_[c]; }
  bool is_identity(ArrId f) const { return identity_[arrow_src_[f]] == f; }

  bool composable(ArrId g, ArrId f) const {
    return arrow_tgt_[f] == arrow_src_[g];
  }
  // g∘f; only defined when composable(g, f).
  ArrId compose(ArrId g, ArrId f) const {
    return compose_[static_cast<std::size_t>(g) * arrow_src_.size() + f];
  }

  const std::string& object_name(ObjId c) const { return object_names_[c]; }
  const std::string& arrow_name(ArrId f) const { return arrow_names_[f]; }
  std::optional<ObjId> object_id(const std::string& name) const;
  std::optional<ArrId> arrow_id(const std::string& name) const;

  const std::vector<ArrId>& arrows_into(ObjId c) const { return into_[c]; }
  const std::vector<ArrId>& arrows_from(ObjId c) const { return from_[c]; }
  ArrowSet maximal_sieve(ObjId c) const { return max_sieve_[c]; }

  FinCategory opposite() const;

  // Round-trip support: a spec that rebuilds this category verbatim.
  CategorySpec to_spec() const;

  const std::string& name() const { return name_; }

  bool operator==(const FinCategory& other) const;

 private:
  FinCategory() = default;

  std::string name_;
  std::vector<std::string> object_names_;
  std::vector<std::string> arrow_names_;
  std::vector<ObjId> arrow_src_;
  std::vector<ObjId> arrow_tgt_;
  std::vector<ArrId> identity_;
  std::vector<ArrId> compose_;  // row-major [g * n + f], -1 if not composable
  std::vector<std::vector<ArrId>> into_;
  std::vector<std::vector<ArrId>> from_;
  std::vector<ArrowSet> max_sieve_;
};

// Result of a combinatorial property check.  On success the completion table
// maps each input configuration to its completing cocone; on failure the
// witness is the configuration with no completion.  Either way the content
// can be replayed against the category.
struct PropertyReport {
  bool holds = false;
  // Failure: ids of the configuration (two arrows for Ore/amalgamation, two
  // objects for joint embedding).
  std::vector<int> failure;
  // Success: input configuration -> completing data.
  std::map<std::vector<int>, std::vector<int>> completions;
  std::string describe(const FinCategory& cat) const;
};

// Right Ore: every cospan f: b→a, g: c→a completes to f∘u = g∘v.
PropertyReport check_right_ore(const FinCategory& cat);
// Amalgamation: every span f: a→b, g: a→c completes to f'∘f = g'∘g.
// Definitionally dual to right Ore on the opposite category; the duality is
// enforced as an internal cross-check.
PropertyReport check_amalgamation(const FinCategory& cat);
// Joint embedding: every pair of objects admits a cocone.
PropertyReport check_joint_embedding(const FinCategory& cat);

}  // namespace sitekit

#endif  // SITEKIT_CATEGORY_HPP_
