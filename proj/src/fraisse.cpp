#include "sitekit/fraisse.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include <json.hpp>

namespace sitekit {

namespace {

Structure permuted(const Structure& s, const std::vector<int>& perm) {
  Structure out = Structure::of_size(s.size);
  for (int i = 0; i < s.size; ++i) {
    for (int j = 0; j < s.size; ++j) {
      if (s.related(i, j)) out.set_related(perm[i], perm[j], true);
    }
  }
  return out;
}

Structure canonical(const Structure& s) {
  std::vector<int> perm(s.size);
  std::iota(perm.begin(), perm.end(), 0);
  Structure best = permuted(s, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    Structure candidate = permuted(s, perm);
    if (candidate < best) best = candidate;
  }
  return best;
}

}  // namespace

std::vector<Structure> AmalgamationClass::structures_up_to(int n) const {
  // Labeled sweep over all relation matrices, canonicalized and filtered.
  std::vector<Structure> out;
  std::set<Structure> seen;
  for (int size = 0; size <= n; ++size) {
    const int bits = size * size;
    if (bits > 24) {
      throw Error(ErrorKind::SizeGuard,
                  "generic structure enumeration is limited to 4 elements");
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      Structure s = Structure::of_size(size);
      for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
          if ((mask >> (i * size + j)) & 1) s.set_related(i, j, true);
        }
      }
      if (!valid(s)) continue;
      Structure c = canonical(s);
      if (seen.insert(c).second) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool AmalgamationClass::is_embedding(const Structure& a, const Structure& b,
                                     const Embedding& map) const {
  if (static_cast<int>(map.size()) != a.size) return false;
  for (int i = 0; i < a.size; ++i) {
    if (map[i] < 0 || map[i] >= b.size) return false;
    for (int j = 0; j < a.size; ++j) {
      if (i != j && map[i] == map[j]) return false;
      if (a.related(i, j) != b.related(map[i], map[j])) return false;
    }
  }
  return true;
}

std::vector<Embedding> AmalgamationClass::embeddings(
    const Structure& a, const Structure& b) const {
  std::vector<Embedding> out;
  Embedding map(a.size, -1);
  std::vector<char> used(b.size, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == a.size) {
      if (is_embedding(a, b, map)) out.push_back(map);
      return;
    }
    for (int y = 0; y < b.size; ++y) {
      if (used[y]) continue;
      bool ok = true;
      for (int p = 0; p < i && ok; ++p) {
        if (a.related(i, p) != b.related(y, map[p]) ||
            a.related(p, i) != b.related(map[p], y)) {
          ok = false;
        }
      }
      if (!ok) continue;
      map[i] = y;
      used[y] = 1;
      rec(i + 1);
      used[y] = 0;
      map[i] = -1;
    }
  };
  rec(0);
  return out;
}

std::optional<Embedding> AmalgamationClass::find_extension(
    const Structure& a, const Structure& b, const Embedding& j,
    const Structure& m, const Embedding& chi) const {
  Embedding map(b.size, -1);
  std::vector<char> used(m.size, 0);
  for (int i = 0; i < a.size; ++i) {
    if (map[j[i]] != -1 && map[j[i]] != chi[i]) return std::nullopt;
    map[j[i]] = chi[i];
    used[chi[i]] = 1;
  }
  std::vector<int> free_slots;
  for (int i = 0; i < b.size; ++i) {
    if (map[i] == -1) free_slots.push_back(i);
  }
  std::optional<Embedding> found;
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == free_slots.size()) {
      if (is_embedding(b, m, map)) {
        found = map;
        return true;
      }
      return false;
    }
    int i = free_slots[k];
    for (int y = 0; y < m.size; ++y) {
      if (used[y]) continue;
      bool ok = true;
      for (int p = 0; p < b.size && ok; ++p) {
        if (map[p] == -1) continue;
        if (b.related(i, p) != m.related(y, map[p]) ||
            b.related(p, i) != m.related(map[p], y)) {
          ok = false;
        }
      }
      if (!ok) continue;
      map[i] = y;
      used[y] = 1;
      if (rec(k + 1)) return true;
      used[y] = 0;
      map[i] = -1;
    }
    return false;
  };
  rec(0);
  return found;
}

// ---------------------------------------------------------------------------
// Built-in classes
// ---------------------------------------------------------------------------

namespace {

// Finite linear orders under order embeddings; rel(i, j) means i < j.
class LinOrderClass : public AmalgamationClass {
 public:
  std::string name() const override { return "linord"; }

  bool valid(const Structure& s) const override {
    for (int i = 0; i < s.size; ++i) {
      if (s.related(i, i)) return false;
      for (int j = 0; j < s.size; ++j) {
        if (i == j) continue;
        if (s.related(i, j) == s.related(j, i)) return false;
        for (int k = 0; k < s.size; ++k) {
          if (s.related(i, j) && s.related(j, k) && !s.related(i, k)) {
            return false;
          }
        }
      }
    }
    return true;
  }

  std::vector<Structure> structures_up_to(int n) const override {
    std::vector<Structure> out;
    for (int size = 0; size <= n; ++size) {
      Structure s = Structure::of_size(size);
      for (int i = 0; i < size; ++i) {
        for (int j = i + 1; j < size; ++j) s.set_related(i, j, true);
      }
      out.push_back(s);
    }
    return out;
  }

  std::optional<std::pair<Structure, Embedding>> extend_chain(
      const Structure& m, const Structure& a, const Structure& b,
      const Embedding& j, const Embedding& chi) const override {
    // Ranks of the current carrier, 0 = least.
    std::vector<int> rank(m.size);
    for (int i = 0; i < m.size; ++i) {
      for (int k = 0; k < m.size; ++k) {
        if (m.related(k, i)) ++rank[i];
      }
    }
    Embedding map(b.size, -1);
    for (int i = 0; i < a.size; ++i) map[j[i]] = chi[i];
    // Place the new elements in b-order, each as low as the constraints
    // allow.
    std::vector<int> fresh;
    for (int i = 0; i < b.size; ++i) {
      if (map[i] == -1) fresh.push_back(i);
    }
    std::sort(fresh.begin(), fresh.end(), [&](int x, int y) {
      return b.related(x, y);
    });
    int carrier = m.size;
    rank.resize(m.size + fresh.size());
    for (int u : fresh) {
      int new_rank = 0;
      for (int w = 0; w < b.size; ++w) {
        if (map[w] != -1 && b.related(w, u)) {
          new_rank = std::max(new_rank, rank[map[w]] + 1);
        }
      }
      for (int e = 0; e < carrier; ++e) {
        if (rank[e] >= new_rank) ++rank[e];
      }
      rank[carrier] = new_rank;
      map[u] = carrier++;
    }
    Structure out = Structure::of_size(carrier);
    for (int i = 0; i < carrier; ++i) {
      for (int k = 0; k < carrier; ++k) {
        if (rank[i] < rank[k]) out.set_related(i, k, true);
      }
    }
    return std::make_pair(out, map);
  }

  int default_verify_bound() const override { return 6; }
};

// Finite simple graphs under induced embeddings; rel is symmetric adjacency.
class GraphClass : public AmalgamationClass {
 public:
  std::string name() const override { return "graph"; }

  bool valid(const Structure& s) const override {
    for (int i = 0; i < s.size; ++i) {
      if (s.related(i, i)) return false;
      for (int j = 0; j < s.size; ++j) {
        if (s.related(i, j) != s.related(j, i)) return false;
      }
    }
    return true;
  }

  std::vector<Structure> structures_up_to(int n) const override {
    std::vector<Structure> out;
    for (int size = 0; size <= n; ++size) {
      const int bits = size * (size - 1) / 2;
      if (bits > 24) {
        throw Error(ErrorKind::SizeGuard, "graph enumeration bound exceeded");
      }
      std::set<Structure> seen;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits);
           ++mask) {
        Structure s = Structure::of_size(size);
        int bit = 0;
        for (int i = 0; i < size; ++i) {
          for (int j = i + 1; j < size; ++j, ++bit) {
            if ((mask >> bit) & 1) {
              s.set_related(i, j, true);
              s.set_related(j, i, true);
            }
          }
        }
        if (!valid(s)) continue;
        Structure c = canonical(s);
        seen.insert(c);
      }
      for (const Structure& s : seen) out.push_back(s);
    }
    return out;
  }

  std::optional<std::pair<Structure, Embedding>> extend_chain(
      const Structure& m, const Structure& a, const Structure& b,
      const Embedding& j, const Embedding& chi) const override {
    // Free amalgam: fresh vertices keep exactly the adjacencies b dictates.
    Embedding map(b.size, -1);
    for (int i = 0; i < a.size; ++i) map[j[i]] = chi[i];
    int carrier = m.size;
    for (int i = 0; i < b.size; ++i) {
      if (map[i] == -1) map[i] = carrier++;
    }
    Structure out = Structure::of_size(carrier);
    for (int i = 0; i < m.size; ++i) {
      for (int k = 0; k < m.size; ++k) {
        if (m.related(i, k)) out.set_related(i, k, true);
      }
    }
    for (int i = 0; i < b.size; ++i) {
      for (int k = 0; k < b.size; ++k) {
        if (b.related(i, k)) {
          out.set_related(map[i], map[k], true);
          out.set_related(map[k], map[i], true);
        }
      }
    }
    if (!valid(out)) return std::nullopt;
    return std::make_pair(out, map);
  }
};

// Test fixture: graphs with maximum degree 2.  Hereditary, but fails the
// amalgamation property (a degree-2 vertex cannot carry both an adjacent
// and a non-adjacent pair of neighbours).
class DegreeTwoGraphClass : public GraphClass {
 public:
  std::string name() const override { return "degmax2"; }

  bool valid(const Structure& s) const override {
    if (!GraphClass::valid(s)) return false;
    for (int i = 0; i < s.size; ++i) {
      int degree = 0;
      for (int j = 0; j < s.size; ++j) {
        if (s.related(i, j)) ++degree;
      }
      if (degree > 2) return false;
    }
    return true;
  }

  std::optional<std::pair<Structure, Embedding>> extend_chain(
      const Structure& m, const Structure& a, const Structure& b,
      const Embedding& j, const Embedding& chi) const override {
    auto out = GraphClass::extend_chain(m, a, b, j, chi);
    if (out && !valid(out->first)) return std::nullopt;
    return out;
  }

  int default_verify_bound() const override { return 3; }
};

// Test fixture: linear orders where embeddings are initial segments.
class InitialSegmentOrderClass : public LinOrderClass {
 public:
  std::string name() const override { return "initialseg"; }

  bool is_embedding(const Structure& a, const Structure& b,
                    const Embedding& map) const override {
    if (!LinOrderClass::is_embedding(a, b, map)) return false;
    // The image must be downward closed in b.
    for (int i = 0; i < a.size; ++i) {
      for (int y = 0; y < b.size; ++y) {
        bool in_image = false;
        for (int k = 0; k < a.size; ++k) {
          if (map[k] == y) in_image = true;
        }
        if (!in_image && b.related(y, map[i])) return false;
      }
    }
    return true;
  }

  std::optional<std::pair<Structure, Embedding>> extend_chain(
      const Structure& m, const Structure& a, const Structure& b,
      const Embedding& j, const Embedding& chi) const override {
    // New elements sit above the whole chain so the old carrier stays an
    // initial segment.
    std::vector<int> rank(m.size);
    for (int i = 0; i < m.size; ++i) {
      for (int k = 0; k < m.size; ++k) {
        if (m.related(k, i)) ++rank[i];
      }
    }
    Embedding map(b.size, -1);
    for (int i = 0; i < a.size; ++i) map[j[i]] = chi[i];
    std::vector<int> fresh;
    for (int i = 0; i < b.size; ++i) {
      if (map[i] == -1) fresh.push_back(i);
    }
    std::sort(fresh.begin(), fresh.end(), [&](int x, int y) {
      return b.related(x, y);
    });
    int carrier = m.size;
    rank.resize(m.size + fresh.size());
    for (int u : fresh) {
      rank[carrier] = carrier;  // append at the top
      map[u] = carrier++;
    }
    Structure out = Structure::of_size(carrier);
    for (int i = 0; i < carrier; ++i) {
      for (int k = 0; k < carrier; ++k) {
        if (rank[i] < rank[k]) out.set_related(i, k, true);
      }
    }
    if (!is_embedding(b, out, map)) return std::nullopt;
    return std::make_pair(out, map);
  }
};

}  // namespace

std::unique_ptr<AmalgamationClass> make_class(const std::string& name) {
  if (name == "linord") return std::make_unique<LinOrderClass>();
  if (name == "graph") return std::make_unique<GraphClass>();
  if (name == "degmax2") return std::make_unique<DegreeTwoGraphClass>();
  if (name == "initialseg") return std::make_unique<InitialSegmentOrderClass>();
  throw Error(ErrorKind::BadRequest, "unknown structure class '" + name + "'");
}

ClassPropertyReport verify_class_properties(const AmalgamationClass& cls,
                                            int n, const Budget& budget) {
  (void)budget;
  ClassPropertyReport report;
  std::vector<Structure> reps = cls.structures_up_to(n);

  auto exhaustive_amalgam = [&](const Structure& a, const Structure& b,
                                const Structure& c, const Embedding& j1,
                                const Embedding& j2) -> bool {
    std::vector<Structure> candidates =
        cls.structures_up_to(b.size + c.size - a.size);
    for (const Structure& d : candidates) {
      for (const Embedding& f : cls.embeddings(b, d)) {
        for (const Embedding& g : cls.embeddings(c, d)) {
          bool commute = true;
          for (int i = 0; i < a.size; ++i) {
            if (f[j1[i]] != g[j2[i]]) {
              commute = false;
              break;
            }
          }
          if (commute) return true;
        }
      }
    }
    return false;
  };

  for (const Structure& a : reps) {
    for (const Structure& b : reps) {
      for (const Structure& c : reps) {
        for (const Embedding& j1 : cls.embeddings(a, b)) {
          for (const Embedding& j2 : cls.embeddings(a, c)) {
            ++report.spans_checked;
            bool ok = false;
            auto constructed = cls.extend_chain(c, a, b, j1, j2);
            if (constructed) {
              const auto& [d, f] = *constructed;
              // The base c survives as the prefix of d.
              Embedding g(c.size);
              std::iota(g.begin(), g.end(), 0);
              ok = cls.valid(d) && cls.is_embedding(b, d, f) &&
                   cls.is_embedding(c, d, g);
              for (int i = 0; ok && i < a.size; ++i) {
                if (f[j1[i]] != g[j2[i]]) ok = false;
              }
            }
            if (!ok) ok = exhaustive_amalgam(a, b, c, j1, j2);
            if (!ok) {
              report.amalgamation = false;
              if (!report.ap_failure) {
                report.ap_failure = SpanWitness{a, b, c, j1, j2};
              }
            }
          }
        }
      }
    }
  }

  for (const Structure& a : reps) {
    for (const Structure& b : reps) {
      ++report.pairs_checked;
      bool ok = false;
      auto constructed = cls.extend_chain(b, Structure::empty(), a, {}, {});
      if (constructed) {
        ok = cls.valid(constructed->first) &&
             cls.is_embedding(a, constructed->first, constructed->second);
      }
      if (!ok) {
        std::vector<Structure> candidates =
            cls.structures_up_to(a.size + b.size);
        for (const Structure& d : candidates) {
          if (!cls.embeddings(a, d).empty() &&
              !cls.embeddings(b, d).empty()) {
            ok = true;
            break;
          }
        }
      }
      if (!ok) {
        report.joint_embedding = false;
        if (!report.jep_failure) report.jep_failure = {a, b};
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Chain construction
// ---------------------------------------------------------------------------

namespace {

struct TaskPattern {
  Structure a, b;
  Embedding j;
};

std::vector<TaskPattern> task_patterns(const AmalgamationClass& cls,
                                       int bound) {
  std::vector<TaskPattern> out;
  std::vector<Structure> reps = cls.structures_up_to(bound);
  for (const Structure& a : reps) {
    for (const Structure& b : reps) {
      if (a.size >= b.size) continue;  // iso tasks extend trivially
      for (const Embedding& j : cls.embeddings(a, b)) {
        out.push_back({a, b, j});
      }
    }
  }
  return out;
}

}  // namespace

LimitChain build_limit(const AmalgamationClass& cls, int steps,
                       unsigned seed) {
  const int bound = cls.task_bound();
  ClassPropertyReport props = verify_class_properties(cls, bound);
  if (!props.amalgamation || !props.joint_embedding) {
    throw Error(ErrorKind::ClassPropertyUnverified,
                "class '" + cls.name() + "' fails " +
                    (props.amalgamation ? "joint embedding" : "amalgamation") +
                    " at bound " + std::to_string(bound));
  }

  LimitChain chain;
  chain.class_name = cls.name();
  chain.seed = seed;
  chain.bound = bound;
  chain.stages.push_back(Structure::empty());

  std::vector<TaskPattern> patterns = task_patterns(cls, bound);
  struct Task {
    int pattern;
    Embedding chi;
  };
  std::deque<Task> queue;
  std::set<std::pair<int, Embedding>> seen;
  std::mt19937 rng(seed);

  Structure m = Structure::empty();
  for (int step = 1; step <= steps; ++step) {
    // Discovery pass: canonical order, batch shuffled by the seed only.
    std::vector<Task> batch;
    for (int p = 0; p < static_cast<int>(patterns.size()); ++p) {
      for (const Embedding& chi : cls.embeddings(patterns[p].a, m)) {
        if (seen.insert({p, chi}).second) batch.push_back({p, chi});
      }
    }
    for (std::size_t i = batch.size(); i > 1; --i) {
      std::swap(batch[i - 1], batch[rng() % i]);
    }
    for (Task& t : batch) queue.push_back(std::move(t));

    // Discharge from the front: tasks with an existing witness retire in
    // place, the first task that needs growth defines the step.
    bool grown = false;
    while (!queue.empty() && !grown) {
      Task t = queue.front();
      queue.pop_front();
      const TaskPattern& p = patterns[t.pattern];
      if (cls.find_extension(p.a, p.b, p.j, m, t.chi)) {
        chain.task_log.push_back(
            {step, p.a, p.b, p.j, t.chi, TaskRecord::Witnessed});
        continue;
      }
      auto ext = cls.extend_chain(m, p.a, p.b, p.j, t.chi);
      if (!ext) {
        throw Error(ErrorKind::ClassPropertyUnverified,
                    "class '" + cls.name() +
                        "' failed to amalgamate a discovered task");
      }
      m = ext->first;
      chain.task_log.push_back(
          {step, p.a, p.b, p.j, t.chi, TaskRecord::Amalgamated});
      grown = true;
    }
    chain.stages.push_back(m);
  }
  return chain;
}

ExtensionReport check_limit_extension(const AmalgamationClass& cls,
                                      const LimitChain& chain, int depth,
                                      int size) {
  ExtensionReport report;
  const Structure& at_depth = chain.stage(depth);
  const Structure& final = chain.final_stage();
  for (const TaskPattern& p : task_patterns(cls, size)) {
    for (const Embedding& chi : cls.embeddings(p.a, at_depth)) {
      ++report.tasks_checked;
      if (cls.find_extension(p.a, p.b, p.j, final, chi)) continue;
      report.ok = false;
      ++report.failure_count;
      bool discharged = false;
      for (const TaskRecord& r : chain.task_log) {
        if (r.a == p.a && r.b == p.b && r.j == p.j && r.chi == chi) {
          discharged = true;
          break;
        }
      }
      if (report.failures.size() < 20) {
        report.failures.push_back({p.a, p.b, p.j, chi, !discharged});
      }
    }
  }
  return report;
}

BackAndForthResult back_and_forth(const AmalgamationClass& cls,
                                  const LimitChain& l1, const LimitChain& l2,
                                  int k) {
  (void)cls;
  const Structure& m1 = l1.final_stage();
  const Structure& m2 = l2.final_stage();
  BackAndForthResult result;
  if (k > m1.size || k > m2.size) {
    result.failure = "chains too short for k = " + std::to_string(k);
    return result;
  }
  std::vector<int> fwd(m1.size, -1), bwd(m2.size, -1);
  // Alternating demand list: element i of L1 forward, element i of L2
  // backward.  Backtracking over candidate images, middle-out candidate
  // order so partial maps keep room on both sides.
  long long nodes = 0;
  const long long node_cap = global_budget().max_search;
  int stuck = -1;
  std::function<bool(int)> rec = [&](int d) -> bool {
    if (d == 2 * k) return true;
    const bool forward = d % 2 == 0;
    const int x = d / 2;
    const Structure& from = forward ? m1 : m2;
    const Structure& to = forward ? m2 : m1;
    std::vector<int>& map = forward ? fwd : bwd;
    std::vector<int>& inv = forward ? bwd : fwd;
    if (map[x] != -1) return rec(d + 1);
    std::vector<int> candidates;
    for (int y = 0; y < to.size; ++y) {
      if (inv[y] != -1) continue;
      bool ok = true;
      for (int u = 0; u < from.size && ok; ++u) {
        if (map[u] == -1) continue;
        if (from.related(x, u) != to.related(y, map[u]) ||
            from.related(u, x) != to.related(map[u], y)) {
          ok = false;
        }
      }
      if (ok) candidates.push_back(y);
    }
    // Prefer images with similar valency; break ties from the middle of
    // the carrier so the partial map keeps room on both sides.
    int deg_x = 0;
    for (int u = 0; u < from.size; ++u) {
      if (from.related(x, u)) ++deg_x;
      if (from.related(u, x)) ++deg_x;
    }
    auto key = [&](int y) {
      int deg_y = 0;
      for (int u = 0; u < to.size; ++u) {
        if (to.related(y, u)) ++deg_y;
        if (to.related(u, y)) ++deg_y;
      }
      return std::abs(deg_y - deg_x);
    };
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](int p, int q) { return key(p) < key(q); });
    std::vector<int> order = candidates;
    if (!candidates.empty() &&
        key(candidates.front()) == key(candidates.back())) {
      // No valency signal (total orders): sweep outward from the middle so
      // the partial map keeps room on both sides.
      order.clear();
      const int mid = static_cast<int>(candidates.size()) / 2;
      for (int off = 0; off < static_cast<int>(candidates.size()); ++off) {
        int idx = off % 2 == 0 ? mid + off / 2 : mid - 1 - off / 2;
        if (idx >= 0 && idx < static_cast<int>(candidates.size())) {
          order.push_back(candidates[idx]);
        }
      }
    }
    for (int y : order) {
      if (++nodes > node_cap) return false;
      map[x] = y;
      inv[y] = x;
      if (rec(d + 1)) return true;
      map[x] = -1;
      inv[y] = -1;
    }
    stuck = std::max(stuck, d);
    return false;
  };
  if (!rec(0)) {
    if (nodes > node_cap) {
      result.failure = "search budget exhausted";
    } else {
      result.failure = std::string("no ") +
                       (stuck % 2 == 0 ? "forward" : "backward") +
                       " extension for element " + std::to_string(stuck / 2);
    }
    return result;
  }
  result.ok = true;
  for (int x = 0; x < m1.size; ++x) {
    if (fwd[x] != -1) result.pairs.push_back({x, fwd[x]});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

nlohmann::json structure_json(const Structure& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < s.size; ++i) {
    std::string row(s.size, '0');
    for (int j = 0; j < s.size; ++j) {
      if (s.related(i, j)) row[j] = '1';
    }
    rows.push_back(row);
  }
  return {{"size", s.size}, {"rel", rows}};
}

Structure structure_from_json(const nlohmann::json& j) {
  Structure s = Structure::of_size(j.at("size").get<int>());
  const auto& rows = j.at("rel");
  for (int i = 0; i < s.size; ++i) {
    std::string row = rows.at(i).get<std::string>();
    for (int k = 0; k < s.size; ++k) {
      if (row.at(k) == '1') s.set_related(i, k, true);
    }
  }
  return s;
}

}  // namespace

std::string LimitChain::to_json() const {
  nlohmann::json j;
  j["class"] = class_name;
  j["seed"] = seed;
  j["bound"] = bound;
  j["stages"] = nlohmann::json::array();
  for (const Structure& s : stages) j["stages"].push_back(structure_json(s));
  j["task_log"] = nlohmann::json::array();
  for (const TaskRecord& r : task_log) {
    j["task_log"].push_back(
        {{"step", r.step},
         {"a", structure_json(r.a)},
         {"b", structure_json(r.b)},
         {"j", r.j},
         {"chi", r.chi},
         {"kind", r.kind == TaskRecord::Witnessed ? "witnessed"
                                                  : "amalgamated"}});
  }
  return j.dump(2);
}

LimitChain LimitChain::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LimitChain chain;
  chain.class_name = j.at("class").get<std::string>();
  chain.seed = j.at("seed").get<unsigned>();
  chain.bound = j.at("bound").get<int>();
  for (const auto& s : j.at("stages")) {
    chain.stages.push_back(structure_from_json(s));
  }
  for (const auto& r : j.at("task_log")) {
    TaskRecord record;
    record.step = r.at("step").get<int>();
    record.a = structure_from_json(r.at("a"));
    record.b = structure_from_json(r.at("b"));
    record.j = r.at("j").get<Embedding>();
    record.chi = r.at("chi").get<Embedding>();
    record.kind = r.at("kind").get<std::string>() == "witnessed"
                      ? TaskRecord::Witnessed
                      : TaskRecord::Amalgamated;
    chain.task_log.push_back(std::move(record));
  }
  return chain;
}

}  // namespace sitekit
