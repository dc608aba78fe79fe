#include "sitekit/topology.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sitekit {

bool GrothendieckTopology::degenerate() const {
  for (const auto& family : covers) {
    if (family.count(0)) return true;
  }
  return false;
}

bool topology_leq(const GrothendieckTopology& j,
                  const GrothendieckTopology& k) {
  for (std::size_t c = 0; c < j.covers.size(); ++c) {
    if (!std::includes(k.covers[c].begin(), k.covers[c].end(),
                       j.covers[c].begin(), j.covers[c].end())) {
      return false;
    }
  }
  return true;
}

std::string TopologyViolation::describe(const FinCategory& cat) const {
  std::ostringstream out;
  switch (axiom) {
    case TopologyAxiom::Maximality:
      out << "maximal sieve on " << cat.object_name(object)
          << " is not covering";
      break;
    case TopologyAxiom::Stability:
      out << "pullback of covering sieve " << sieve << " on "
          << cat.object_name(object) << " along " << cat.arrow_name(arrow)
          << " is not covering";
      break;
    case TopologyAxiom::Transitivity:
      out << "sieve " << sieve << " on " << cat.object_name(object)
          << " is locally covering but not covering";
      break;
  }
  return out.str();
}

TopologyReport validate_topology(const FinCategory& cat,
                                 const GrothendieckTopology& j) {
  if (static_cast<int>(j.covers.size()) != cat.num_objects()) {
    throw Error(ErrorKind::BadRequest,
                "topology indexes a different object set");
  }
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    for (ArrowSet s : j.covers[c]) {
      if (!is_sieve(cat, c, s)) {
        throw Error(ErrorKind::BadRequest,
                    "covering family on " + cat.object_name(c) +
                        " contains a non-sieve");
      }
    }
  }

  TopologyReport report;
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    if (!j.is_covering(c, cat.maximal_sieve(c))) {
      report.valid = false;
      report.violations.push_back(
          {TopologyAxiom::Maximality, c, cat.maximal_sieve(c), -1});
      break;
    }
  }
  [&] {
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      for (ArrowSet r : j.covers[c]) {
        for (ArrId f : cat.arrows_into(c)) {
          if (!j.is_covering(cat.source(f), pullback_bits(cat, f, r))) {
            report.valid = false;
            report.violations.push_back({TopologyAxiom::Stability, c, r, f});
            return;
          }
        }
      }
    }
  }();
  [&] {
    SieveTable table = enumerate_sieves(cat);
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      for (ArrowSet r : table.by_object[c]) {
        if (j.is_covering(c, r)) continue;
        for (ArrowSet z : j.covers[c]) {
          bool locally = true;
          for (ArrId f : cat.arrows_into(c)) {
            if (!((z >> f) & 1)) continue;
            if (!j.is_covering(cat.source(f), pullback_bits(cat, f, r))) {
              locally = false;
              break;
            }
          }
          if (locally) {
            report.valid = false;
            report.violations.push_back({TopologyAxiom::Transitivity, c, r,
                                         -1});
            return;
          }
        }
      }
    }
  }();
  return report;
}

GrothendieckTopology generate_topology(const FinCategory& cat,
                                       const std::vector<Sieve>& seeds,
                                       const Budget& budget) {
  SieveTable table = enumerate_sieves(cat, budget);

  GrothendieckTopology j;
  j.covers.resize(cat.num_objects());
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    j.covers[c].insert(cat.maximal_sieve(c));
  }
  for (const Sieve& s : seeds) {
    if (s.base < 0 || s.base >= cat.num_objects() ||
        !is_sieve(cat, s.base, s.members)) {
      throw Error(ErrorKind::BadRequest, "seed is not a sieve on its object");
    }
    j.covers[s.base].insert(s.members);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    // Stability rule: derive f*(R) for every derived R and arrow f into its
    // base.
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      std::vector<ArrowSet> snapshot(j.covers[c].begin(), j.covers[c].end());
      for (ArrowSet r : snapshot) {
        for (ArrId f : cat.arrows_into(c)) {
          if (j.covers[cat.source(f)].insert(pullback_bits(cat, f, r)).second) {
            changed = true;
          }
        }
      }
    }
    // Transitivity rule: any sieve whose pullbacks along some derived sieve
    // are all derived is itself derived.  The candidate scan covers every
    // sieve on the object, which leastness requires.
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      for (ArrowSet r : table.by_object[c]) {
        if (j.is_covering(c, r)) continue;
        for (ArrowSet z : j.covers[c]) {
          bool locally = true;
          for (ArrId f : cat.arrows_into(c)) {
            if (!((z >> f) & 1)) continue;
            if (!j.is_covering(cat.source(f), pullback_bits(cat, f, r))) {
              locally = false;
              break;
            }
          }
          if (locally) {
            j.covers[c].insert(r);
            changed = true;
            break;
          }
        }
      }
    }
  }
  return j;
}

GrothendieckTopology canonical_topology(const FinCategory& cat,
                                        CanonicalKind kind) {
  GrothendieckTopology j;
  j.covers.resize(cat.num_objects());
  switch (kind) {
    case CanonicalKind::Trivial:
      for (ObjId c = 0; c < cat.num_objects(); ++c) {
        j.covers[c].insert(cat.maximal_sieve(c));
      }
      break;
    case CanonicalKind::Atomic: {
      PropertyReport ore = check_right_ore(cat);
      if (!ore.holds) {
        throw Error(ErrorKind::NotRightOre,
                    "atomic topology needs the right Ore condition; cospan (" +
                        cat.arrow_name(ore.failure[0]) + ", " +
                        cat.arrow_name(ore.failure[1]) +
                        ") has no completion");
      }
      SieveTable table = enumerate_sieves(cat);
      for (ObjId c = 0; c < cat.num_objects(); ++c) {
        for (ArrowSet s : table.by_object[c]) {
          if (s != 0) j.covers[c].insert(s);
        }
      }
      break;
    }
    case CanonicalKind::Dense: {
      // R covers iff every arrow into the object admits a precomposition
      // landing in R.
      SieveTable table = enumerate_sieves(cat);
      for (ObjId c = 0; c < cat.num_objects(); ++c) {
        for (ArrowSet s : table.by_object[c]) {
          bool dense = true;
          for (ArrId f : cat.arrows_into(c)) {
            if (pullback_bits(cat, f, s) == 0) {
              dense = false;
              break;
            }
          }
          if (dense) j.covers[c].insert(s);
        }
      }
      break;
    }
  }
  return j;
}

const GrothendieckTopology& TopologyLattice::bottom() const {
  const GrothendieckTopology* best = &elements.front();
  for (const auto& j : elements) {
    if (topology_leq(j, *best)) best = &j;
  }
  return *best;
}

const GrothendieckTopology& TopologyLattice::top() const {
  const GrothendieckTopology* best = &elements.front();
  for (const auto& j : elements) {
    if (topology_leq(*best, j)) best = &j;
  }
  return *best;
}

int TopologyLattice::index_of(const GrothendieckTopology& j) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), j);
  if (it == elements.end() || !(*it == j)) return -1;
  return static_cast<int>(it - elements.begin());
}

namespace {

using IndexSet = std::vector<char>;

struct ClosureContext {
  const FinCategory& cat;
  const SieveTable& table;
  const Budget& budget;
  std::map<std::pair<ObjId, ArrowSet>, int> index;

  explicit ClosureContext(const FinCategory& c, const SieveTable& t,
                          const Budget& b)
      : cat(c), table(t), budget(b) {
    for (std::size_t i = 0; i < t.universe.size(); ++i) {
      index[t.universe[i]] = static_cast<int>(i);
    }
  }

  IndexSet close(const IndexSet& s) const {
    std::vector<Sieve> seeds;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i]) seeds.push_back({table.universe[i].first,
                                 table.universe[i].second});
    }
    GrothendieckTopology j = generate_topology(cat, seeds, budget);
    IndexSet out(table.universe.size(), 0);
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      for (ArrowSet r : j.covers[c]) {
        out[index.at({c, r})] = 1;
      }
    }
    return out;
  }

  GrothendieckTopology to_topology(const IndexSet& s) const {
    GrothendieckTopology j;
    j.covers.resize(cat.num_objects());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i]) j.covers[table.universe[i].first].insert(
          table.universe[i].second);
    }
    return j;
  }
};

}  // namespace

TopologyLattice enumerate_topologies(const FinCategory& cat,
                                     const Budget& budget) {
  SieveTable table = enumerate_sieves(cat, budget);
  const int m = static_cast<int>(table.universe.size());
  if (m > budget.max_sieve_universe) {
    throw Error(ErrorKind::SizeGuard,
                "sieve universe has " + std::to_string(m) +
                    " elements, budget allows " +
                    std::to_string(budget.max_sieve_universe));
  }
  ClosureContext ctx(cat, table, budget);

  // Lectic (next-closure) sweep over the closure operator induced by
  // generate_topology: visits each topology exactly once.
  TopologyLattice lattice;
  IndexSet current = ctx.close(IndexSet(m, 0));
  lattice.elements.push_back(ctx.to_topology(current));
  while (true) {
    bool advanced = false;
    for (int i = m - 1; i >= 0; --i) {
      if (current[i]) {
        current[i] = 0;
        continue;
      }
      IndexSet candidate = current;
      candidate[i] = 1;
      IndexSet closed = ctx.close(candidate);
      bool lectic = true;
      for (int k = 0; k < i; ++k) {
        if (closed[k] && !current[k]) {
          lectic = false;
          break;
        }
      }
      if (lectic) {
        current = closed;
        lattice.elements.push_back(ctx.to_topology(current));
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  std::sort(lattice.elements.begin(), lattice.elements.end());
  return lattice;
}

TopologyLattice enumerate_topologies_direct(const FinCategory& cat,
                                            const Budget& budget) {
  SieveTable table = enumerate_sieves(cat, budget);
  const int m = static_cast<int>(table.universe.size());
  if (m > 24 || (std::int64_t{1} << m) > budget.max_search) {
    throw Error(ErrorKind::SizeGuard,
                "direct topology filter over 2^" + std::to_string(m) +
                    " subsets exceeds the search budget");
  }
  TopologyLattice lattice;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    GrothendieckTopology j;
    j.covers.resize(cat.num_objects());
    for (int i = 0; i < m; ++i) {
      if ((mask >> i) & 1) {
        j.covers[table.universe[i].first].insert(table.universe[i].second);
      }
    }
    if (validate_topology(cat, j).valid) lattice.elements.push_back(j);
  }
  std::sort(lattice.elements.begin(), lattice.elements.end());
  return lattice;
}

GrothendieckTopology lattice_ops(const FinCategory& cat,
                                 const GrothendieckTopology& j,
                                 const GrothendieckTopology& k, LatticeOp op,
                                 const Budget& budget) {
  if (j.covers.size() != k.covers.size()) {
    throw Error(ErrorKind::BadRequest, "topologies live on different categories");
  }
  switch (op) {
    case LatticeOp::Meet: {
      GrothendieckTopology out;
      out.covers.resize(j.covers.size());
      for (std::size_t c = 0; c < j.covers.size(); ++c) {
        std::set_intersection(
            j.covers[c].begin(), j.covers[c].end(), k.covers[c].begin(),
            k.covers[c].end(),
            std::inserter(out.covers[c], out.covers[c].begin()));
      }
      return out;
    }
    case LatticeOp::Join: {
      std::vector<Sieve> seeds;
      for (ObjId c = 0; c < cat.num_objects(); ++c) {
        for (ArrowSet s : j.covers[c]) seeds.push_back({c, s});
        for (ArrowSet s : k.covers[c]) seeds.push_back({c, s});
      }
      return generate_topology(cat, seeds, budget);
    }
    case LatticeOp::Implication: {
      TopologyLattice lattice = enumerate_topologies(cat, budget);
      GrothendieckTopology result =
          canonical_topology(cat, CanonicalKind::Trivial);
      for (const auto& l : lattice.elements) {
        if (topology_leq(lattice_ops(cat, l, j, LatticeOp::Meet, budget), k)) {
          result = lattice_ops(cat, result, l, LatticeOp::Join, budget);
        }
      }
      return result;
    }
  }
  throw Error(ErrorKind::BadRequest, "unknown lattice operation");
}

std::vector<GrothendieckTopology> enumerate_subtoposes(
    const FinCategory& cat, const GrothendieckTopology& j,
    const Budget& budget) {
  TopologyLattice lattice = enumerate_topologies(cat, budget);
  std::vector<GrothendieckTopology> out;
  for (const auto& k : lattice.elements) {
    if (topology_leq(j, k)) out.push_back(k);
  }
  return out;
}

}  // namespace sitekit
