#include "sitekit/category.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace sitekit {

namespace {

std::string identity_name(const std::string& object) { return "id_" + object; }

}  // namespace

FinCategory FinCategory::build(const CategorySpec& spec, const Budget& budget) {
  if (static_cast<int>(spec.objects.size()) > budget.max_objects) {
    throw Error(ErrorKind::SizeGuard,
                "category '" + spec.name + "' has " +
                    std::to_string(spec.objects.size()) +
                    " objects, budget allows " +
                    std::to_string(budget.max_objects));
  }

  FinCategory cat;
  cat.name_ = spec.name;

  std::unordered_map<std::string, ObjId> obj_ids;
  for (const auto& o : spec.objects) {
    if (obj_ids.count(o)) {
      throw Error(ErrorKind::DuplicateName, "object '" + o + "' listed twice");
    }
    obj_ids[o] = static_cast<ObjId>(cat.object_names_.size());
    cat.object_names_.push_back(o);
  }

  const int nobj = cat.num_objects();
  std::unordered_map<std::string, ArrId> arr_ids;
  auto add_arrow = [&](const std::string& name, ObjId src, ObjId tgt) {
    if (arr_ids.count(name)) {
      throw Error(ErrorKind::DuplicateName, "arrow '" + name + "' listed twice");
    }
    arr_ids[name] = static_cast<ArrId>(cat.arrow_names_.size());
    cat.arrow_names_.push_back(name);
    cat.arrow_src_.push_back(src);
    cat.arrow_tgt_.push_back(tgt);
  };

  // Identities first, one per object, synthesized.
  cat.identity_.resize(nobj);
  for (ObjId c = 0; c < nobj; ++c) {
    cat.identity_[c] = static_cast<ArrId>(cat.arrow_names_.size());
    add_arrow(identity_name(cat.object_names_[c]), c, c);
  }
  for (const auto& a : spec.arrows) {
    auto src = obj_ids.find(a.source);
    auto tgt = obj_ids.find(a.target);
    if (src == obj_ids.end()) {
      throw Error(ErrorKind::UnresolvedReference,
                  "arrow '" + a.name + "': unknown object '" + a.source + "'");
    }
    if (tgt == obj_ids.end()) {
      throw Error(ErrorKind::UnresolvedReference,
                  "arrow '" + a.name + "': unknown object '" + a.target + "'");
    }
    add_arrow(a.name, src->second, tgt->second);
  }

  const int narr = cat.num_arrows();
  if (narr > budget.max_arrows || narr > 64) {
    throw Error(ErrorKind::SizeGuard,
                "category '" + spec.name + "' has " + std::to_string(narr) +
                    " arrows (identities included), budget allows " +
                    std::to_string(std::min(budget.max_arrows, 64)));
  }

  cat.compose_.assign(static_cast<std::size_t>(narr) * narr, -1);
  auto comp = [&](ArrId g, ArrId f) -> ArrId& {
    return cat.compose_[static_cast<std::size_t>(g) * narr + f];
  };

  // Identity compositions are filled by the engine; the DSL never names them.
  for (ArrId f = 0; f < narr; ++f) {
    comp(cat.identity_[cat.arrow_tgt_[f]], f) = f;
    comp(f, cat.identity_[cat.arrow_src_[f]]) = f;
  }

  for (const auto& eq : spec.equations) {
    auto g = arr_ids.find(eq.outer);
    auto f = arr_ids.find(eq.inner);
    auto h = arr_ids.find(eq.result);
    if (g == arr_ids.end() || f == arr_ids.end() || h == arr_ids.end()) {
      const std::string& missing = g == arr_ids.end()   ? eq.outer
                                   : f == arr_ids.end() ? eq.inner
                                                        : eq.result;
      throw Error(ErrorKind::UnresolvedReference,
                  "composition equation references undeclared arrow '" +
                      missing + "'");
    }
    ArrId gi = g->second, fi = f->second, hi = h->second;
    if (cat.arrow_tgt_[fi] != cat.arrow_src_[gi]) {
      throw Error(ErrorKind::MissingComposite,
                  "equation " + eq.outer + " o " + eq.inner +
                      " = " + eq.result + ": pair is not composable");
    }
    if (cat.arrow_src_[hi] != cat.arrow_src_[fi] ||
        cat.arrow_tgt_[hi] != cat.arrow_tgt_[gi]) {
      throw Error(ErrorKind::MissingComposite,
                  "equation " + eq.outer + " o " + eq.inner + " = " +
                      eq.result + ": result has wrong source or target");
    }
    ArrId& cell = comp(gi, fi);
    if (cell != -1 && cell != hi) {
      throw Error(ErrorKind::MissingComposite,
                  "conflicting compositions for " + eq.outer + " o " +
                      eq.inner);
    }
    if (cat.is_identity(gi) && hi != fi) {
      throw Error(ErrorKind::IdentityViolation,
                  "id o " + eq.inner + " must equal " + eq.inner);
    }
    if (cat.is_identity(fi) && hi != gi) {
      throw Error(ErrorKind::IdentityViolation,
                  eq.outer + " o id must equal " + eq.outer);
    }
    cell = hi;
  }

  // Totality: every composable pair needs a value.
  for (ArrId g = 0; g < narr; ++g) {
    for (ArrId f = 0; f < narr; ++f) {
      if (cat.arrow_tgt_[f] != cat.arrow_src_[g]) continue;
      if (comp(g, f) == -1) {
        throw Error(ErrorKind::MissingComposite,
                    "no composition equation for " + cat.arrow_names_[g] +
                        " o " + cat.arrow_names_[f]);
      }
    }
  }

  // Associativity over all composable triples.
  for (ArrId h = 0; h < narr; ++h) {
    for (ArrId g = 0; g < narr; ++g) {
      if (cat.arrow_tgt_[g] != cat.arrow_src_[h]) continue;
      for (ArrId f = 0; f < narr; ++f) {
        if (cat.arrow_tgt_[f] != cat.arrow_src_[g]) continue;
        if (comp(comp(h, g), f) != comp(h, comp(g, f))) {
          throw Error(ErrorKind::AssociativityViolation,
                      "(" + cat.arrow_names_[h] + " o " + cat.arrow_names_[g] +
                          ") o " + cat.arrow_names_[f] + " != " +
                          cat.arrow_names_[h] + " o (" + cat.arrow_names_[g] +
                          " o " + cat.arrow_names_[f] + ")");
        }
      }
    }
  }

  cat.into_.assign(nobj, {});
  cat.from_.assign(nobj, {});
  cat.max_sieve_.assign(nobj, 0);
  for (ArrId f = 0; f < narr; ++f) {
    cat.from_[cat.arrow_src_[f]].push_back(f);
    cat.into_[cat.arrow_tgt_[f]].push_back(f);
    cat.max_sieve_[cat.arrow_tgt_[f]] |= (ArrowSet{1} << f);
  }
  return cat;
}

std::optional<ObjId> FinCategory::object_id(const std::string& name) const {
  for (ObjId c = 0; c < num_objects(); ++c) {
    if (object_names_[c] == name) return c;
  }
  return std::nullopt;
}

std::optional<ArrId> FinCategory::arrow_id(const std::string& name) const {
  for (ArrId f = 0; f < num_arrows(); ++f) {
    if (arrow_names_[f] == name) return f;
  }
  return std::nullopt;
}

FinCategory FinCategory::opposite() const {
  FinCategory op;
  op.name_ = name_ + "_op";
  op.object_names_ = object_names_;
  op.arrow_names_ = arrow_names_;
  op.arrow_src_ = arrow_tgt_;
  op.arrow_tgt_ = arrow_src_;
  op.identity_ = identity_;
  const int narr = num_arrows();
  op.compose_.assign(static_cast<std::size_t>(narr) * narr, -1);
  for (ArrId g = 0; g < narr; ++g) {
    for (ArrId f = 0; f < narr; ++f) {
      if (op.arrow_tgt_[f] == op.arrow_src_[g]) {
        op.compose_[static_cast<std::size_t>(g) * narr + f] = compose(f, g);
      }
    }
  }
  op.into_ = from_;
  op.from_ = into_;
  op.max_sieve_.assign(num_objects(), 0);
  for (ArrId f = 0; f < narr; ++f) {
    op.max_sieve_[op.arrow_tgt_[f]] |= (ArrowSet{1} << f);
  }
  return op;
}

CategorySpec FinCategory::to_spec() const {
  CategorySpec spec;
  spec.name = name_;
  spec.objects = object_names_;
  for (ArrId f = 0; f < num_arrows(); ++f) {
    if (is_identity(f)) continue;
    spec.arrows.push_back({arrow_names_[f], object_names_[arrow_src_[f]],
                           object_names_[arrow_tgt_[f]]});
  }
  for (ArrId g = 0; g < num_arrows(); ++g) {
    if (is_identity(g)) continue;
    for (ArrId f = 0; f < num_arrows(); ++f) {
      if (is_identity(f) || !composable(g, f)) continue;
      spec.equations.push_back(
          {arrow_names_[g], arrow_names_[f], arrow_names_[compose(g, f)]});
    }
  }
  return spec;
}

bool FinCategory::operator==(const FinCategory& other) const {
  return object_names_ == other.object_names_ &&
         arrow_names_ == other.arrow_names_ &&
         arrow_src_ == other.arrow_src_ && arrow_tgt_ == other.arrow_tgt_ &&
         identity_ == other.identity_ && compose_ == other.compose_;
}

std::string PropertyReport::describe(const FinCategory& cat) const {
  std::ostringstream out;
  if (holds) {
    out << "holds (" << completions.size() << " configurations completed)";
  } else {
    out << "fails at (";
    for (std::size_t i = 0; i < failure.size(); ++i) {
      if (i) out << ", ";
      out << failure[i];
    }
    out << ")";
  }
  (void)cat;
  return out.str();
}

PropertyReport check_right_ore(const FinCategory& cat) {
  PropertyReport report;
  report.holds = true;
  const int narr = cat.num_arrows();
  // All ordered cospan pairs; the condition is symmetric but quantifying
  // over ordered pairs keeps the completion table directly indexable.
  for (ArrId f = 0; f < narr; ++f) {
    for (ArrId g = 0; g < narr; ++g) {
      if (cat.target(f) != cat.target(g)) continue;
      bool found = false;
      for (ArrId u = 0; u < narr && !found; ++u) {
        if (cat.target(u) != cat.source(f)) continue;
        for (ArrId v = 0; v < narr && !found; ++v) {
          if (cat.target(v) != cat.source(g)) continue;
          if (cat.source(u) != cat.source(v)) continue;
          if (cat.compose(f, u) == cat.compose(g, v)) {
            report.completions[{f, g}] = {u, v};
            found = true;
          }
        }
      }
      if (!found) {
        report.holds = false;
        report.failure = {f, g};
        report.completions.clear();
        return report;
      }
    }
  }
  return report;
}

PropertyReport check_amalgamation(const FinCategory& cat) {
  PropertyReport report;
  report.holds = true;
  const int narr = cat.num_arrows();
  for (ArrId f = 0; f < narr; ++f) {
    for (ArrId g = 0; g < narr; ++g) {
      if (cat.source(f) != cat.source(g)) continue;
      bool found = false;
      for (ArrId fp = 0; fp < narr && !found; ++fp) {
        if (cat.source(fp) != cat.target(f)) continue;
        for (ArrId gp = 0; gp < narr && !found; ++gp) {
          if (cat.source(gp) != cat.target(g)) continue;
          if (cat.target(fp) != cat.target(gp)) continue;
          if (cat.compose(fp, f) == cat.compose(gp, g)) {
            report.completions[{f, g}] = {fp, gp};
            found = true;
          }
        }
      }
      if (!found) {
        report.holds = false;
        report.failure = {f, g};
        report.completions.clear();
        break;
      }
    }
    if (!report.holds) break;
  }
  // Cross-check against the definitional duality with right Ore.
  PropertyReport dual = check_right_ore(cat.opposite());
  if (dual.holds != report.holds) {
    throw Error(ErrorKind::BadRequest,
                "internal inconsistency: amalgamation vs right Ore on the "
                "opposite disagree");
  }
  return report;
}

PropertyReport check_joint_embedding(const FinCategory& cat) {
  PropertyReport report;
  report.holds = true;
  const int narr = cat.num_arrows();
  for (ObjId a = 0; a < cat.num_objects(); ++a) {
    for (ObjId b = 0; b < cat.num_objects(); ++b) {
      bool found = false;
      for (ArrId f = 0; f < narr && !found; ++f) {
        if (cat.source(f) != a) continue;
        for (ArrId g = 0; g < narr && !found; ++g) {
          if (cat.source(g) != b) continue;
          if (cat.target(f) == cat.target(g)) {
            report.completions[{a, b}] = {f, g};
            found = true;
          }
        }
      }
      if (!found) {
        report.holds = false;
        report.failure = {a, b};
        report.completions.clear();
        return report;
      }
    }
  }
  return report;
}

}  // namespace sitekit
