#ifndef SITEKIT_DSL_HPP_
#define SITEKIT_DSL_HPP_

#include <map>
#include <string>
#include <vector>

#include "sitekit/model.hpp"

namespace sitekit {

struct NamedTopology {
  std::string name;
  std::string category;
  GrothendieckTopology topology;
  bool operator==(const NamedTopology&) const = default;
};

struct NamedSite {
  std::string name;
  std::string category;
  std::string topology;
  bool operator==(const NamedSite&) const = default;
};

struct NamedFunctor {
  std::string name;
  std::string category;
  SetValuedFunctor functor;
  bool operator==(const NamedFunctor&) const = default;
};

struct NamedPresheaf {
  std::string name;
  std::string category;
  Presheaf presheaf;
};

// A parsed workspace file: named categories, topologies, sites, functors
// and presheaves, with the line each definition started on.
struct Workspace {
  std::vector<FinCategory> categories;
  std::vector<NamedTopology> topologies;
  std::vector<NamedSite> sites;
  std::vector<NamedFunctor> functors;
  std::vector<NamedPresheaf> presheaves;
  // "category:NAME" (etc.) -> 1-based source line.
  std::map<std::string, int> defined_at;

  const FinCategory& category(const std::string& name) const;
  const NamedTopology& topology(const std::string& name) const;
  const NamedSite& site(const std::string& name) const;
  const NamedFunctor& functor(const std::string& name) const;
  const NamedPresheaf& presheaf(const std::string& name) const;
};

// Line-oriented parse with positioned diagnostics ('#' starts a comment).
// Blocks: category, topology, functor, presheaf, each closed by `end`;
// sites are one-liners.  Cover generators are closed to sieves and the
// least containing topology is generated.
Workspace parse_workspace(const std::string& text,
                          const Budget& budget = global_budget());

// Emits a file that parses back to the same abstract workspace.  Covers
// are written in full, elements under canonical names e0, e1, ...
std::string serialize_workspace(const Workspace& ws);

}  // namespace sitekit

#endif  // SITEKIT_DSL_HPP_
