#ifndef SITEKIT_FRAISSE_HPP_
#define SITEKIT_FRAISSE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sitekit/category.hpp"

namespace sitekit {

// A finite relational structure over the carrier {0..size-1} with one binary
// relation held as a row-major adjacency matrix.
struct Structure {
  int size = 0;
  std::vector<std::uint8_t> rel;

  bool related(int i, int j) const {
    return rel[static_cast<std::size_t>(i) * size + j] != 0;
  }
  void set_related(int i, int j, bool v) {
    rel[static_cast<std::size_t>(i) * size + j] = v ? 1 : 0;
  }
  static Structure empty() { return {}; }
  static Structure of_size(int n) {
    return {n, std::vector<std::uint8_t>(
                   static_cast<std::size_t>(n) * n, 0)};
  }
  bool operator==(const Structure&) const = default;
  auto operator<=>(const Structure&) const = default;
};

// Injective map; emb[i] is the image of element i.
using Embedding = std::vector<int>;

// A family of finite structures with a distinguished embedding class, the
// raw material of a chain construction.  Built-ins: finite linear orders
// with order embeddings, finite simple graphs with induced embeddings.
class AmalgamationClass {
 public:
  virtual ~AmalgamationClass() = default;

  virtual std::string name() const = 0;
  virtual bool valid(const Structure& s) const = 0;
  // One canonical representative per isomorphism class, sizes 0..n, in
  // canonical order.
  virtual std::vector<Structure> structures_up_to(int n) const;
  // Whether map is a class embedding a→b (induced by default).
  virtual bool is_embedding(const Structure& a, const Structure& b,
                            const Embedding& map) const;
  std::vector<Embedding> embeddings(const Structure& a,
                                    const Structure& b) const;
  // A class embedding of b into m extending chi∘j⁻¹ on the image of j.
  std::optional<Embedding> find_extension(const Structure& a,
                                          const Structure& b,
                                          const Embedding& j,
                                          const Structure& m,
                                          const Embedding& chi) const;
  // Canonically least extension of m realizing b over chi∘j⁻¹; m survives as
  // the carrier prefix.  Returns the extension and the map of b into it, or
  // nothing when the class cannot amalgamate the span.
  virtual std::optional<std::pair<Structure, Embedding>> extend_chain(
      const Structure& m, const Structure& a, const Structure& b,
      const Embedding& j, const Embedding& chi) const = 0;
  // Largest structure size a chain task may request.
  virtual int task_bound() const { return 3; }
  // Default exhaustive bound for verify_class_properties.
  virtual int default_verify_bound() const { return 4; }
};

std::unique_ptr<AmalgamationClass> make_class(const std::string& name);

struct SpanWitness {
  Structure a, b, c;
  Embedding j1, j2;
};

struct ClassPropertyReport {
  bool amalgamation = true;
  bool joint_embedding = true;
  std::optional<SpanWitness> ap_failure;
  std::optional<std::pair<Structure, Structure>> jep_failure;
  long long spans_checked = 0;
  long long pairs_checked = 0;
};

// Exhaustive AP/JEP sweep over all spans and pairs of structures of size
// <= n.  A constructive amalgam is tried first; refutation falls back to a
// full search over candidate cocones.
ClassPropertyReport verify_class_properties(const AmalgamationClass& cls,
                                            int n,
                                            const Budget& budget =
                                                global_budget());

struct TaskRecord {
  int step = 0;  // chain stage at which the task was discharged
  Structure a, b;
  Embedding j, chi;
  enum Kind { Witnessed, Amalgamated } kind = Witnessed;
};

struct LimitChain {
  std::string class_name;
  unsigned seed = 0;
  int bound = 3;
  std::vector<Structure> stages;  // stages[0] is the empty structure
  std::vector<TaskRecord> task_log;

  const Structure& final_stage() const { return stages.back(); }
  const Structure& stage(int depth) const {
    return stages[std::min<std::size_t>(depth, stages.size() - 1)];
  }

  std::string to_json() const;
  static LimitChain from_json(const std::string& text);
};

// Fair FIFO chain construction: tasks are discovered in canonical order
// (perturbed only by the seed), already-satisfiable tasks retire against an
// existing witness, and each step discharges the oldest task that genuinely
// needs an amalgamation.  Deterministic given (class, steps, seed).
LimitChain build_limit(const AmalgamationClass& cls, int steps, unsigned seed);

struct ExtensionFailure {
  Structure a, b;
  Embedding j, chi;
  // True when the task was never discharged within the chain (a fairness /
  // horizon issue rather than a hard extension failure).
  bool undischarged = true;
};

struct ExtensionReport {
  bool ok = true;
  long long tasks_checked = 0;
  std::vector<ExtensionFailure> failures;  // capped
  long long failure_count = 0;
};

// Bounded-depth extension property: every embedding of a small structure
// into the depth-stage extends into some later stage.
ExtensionReport check_limit_extension(const AmalgamationClass& cls,
                                      const LimitChain& chain, int depth,
                                      int size);

struct BackAndForthResult {
  bool ok = false;
  // Matched pairs (element of L1, element of L2).
  std::vector<std::pair<int, int>> pairs;
  std::string failure;
};

// Partial isomorphism covering the first k construction-order elements on
// both sides, built by alternating forward and backward extension.
BackAndForthResult back_and_forth(const AmalgamationClass& cls,
                                  const LimitChain& l1, const LimitChain& l2,
                                  int k);

}  // namespace sitekit

#endif  // SITEKIT_FRAISSE_HPP_
