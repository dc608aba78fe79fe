#include "sitekit/model.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace sitekit {

SetValuedFunctor corepresentable_functor(const FinCategory& cat, ObjId c) {
  SetValuedFunctor f;
  f.name = "hom_from_" + cat.object_name(c);
  f.sizes.resize(cat.num_objects());
  std::vector<std::vector<ArrId>> homs(cat.num_objects());
  for (ArrId g : cat.arrows_from(c)) homs[cat.target(g)].push_back(g);
  for (ObjId d = 0; d < cat.num_objects(); ++d) {
    std::sort(homs[d].begin(), homs[d].end());
    f.sizes[d] = static_cast<int>(homs[d].size());
  }
  auto index_of = [&](ObjId d, ArrId g) {
    return static_cast<int>(std::lower_bound(homs[d].begin(), homs[d].end(),
                                             g) -
                            homs[d].begin());
  };
  f.action.resize(cat.num_arrows());
  for (ArrId a = 0; a < cat.num_arrows(); ++a) {
    ObjId src = cat.source(a), tgt = cat.target(a);
    f.action[a].resize(f.sizes[src]);
    for (int i = 0; i < f.sizes[src]; ++i) {
      f.action[a][i] = index_of(tgt, cat.compose(a, homs[src][i]));
    }
  }
  return f;
}

FunctorialityReport validate_functor(const FinCategory& cat,
                                     const SetValuedFunctor& f) {
  FunctorialityReport report;
  if (static_cast<int>(f.sizes.size()) != cat.num_objects() ||
      static_cast<int>(f.action.size()) != cat.num_arrows()) {
    report.valid = false;
    report.message = "functor shape does not match the category";
    return report;
  }
  for (ArrId a = 0; a < cat.num_arrows(); ++a) {
    if (static_cast<int>(f.action[a].size()) != f.sizes[cat.source(a)]) {
      report.valid = false;
      report.witness = {a};
      report.message = "action table for " + cat.arrow_name(a) +
                       " has the wrong domain size";
      return report;
    }
    for (int x : f.action[a]) {
      if (x < 0 || x >= f.sizes[cat.target(a)]) {
        report.valid = false;
        report.witness = {a};
        report.message = "action of " + cat.arrow_name(a) +
                         " maps outside the target set";
        return report;
      }
    }
  }
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    ArrId id = cat.identity(c);
    for (int x = 0; x < f.sizes[c]; ++x) {
      if (f.action[id][x] != x) {
        report.valid = false;
        report.witness = {id};
        report.message = "identity on " + cat.object_name(c) +
                         " does not act as identity";
        return report;
      }
    }
  }
  for (ArrId h = 0; h < cat.num_arrows(); ++h) {
    for (ArrId g = 0; g < cat.num_arrows(); ++g) {
      if (!cat.composable(h, g)) continue;
      ArrId hg = cat.compose(h, g);
      for (int x = 0; x < f.sizes[cat.source(g)]; ++x) {
        if (f.action[hg][x] != f.action[h][f.action[g][x]]) {
          report.valid = false;
          report.witness = {h, g};
          report.message = "covariance fails at " + cat.arrow_name(h) + " o " +
                           cat.arrow_name(g);
          return report;
        }
      }
    }
  }
  return report;
}

FlatnessReport check_flatness(const FinCategory& cat,
                              const SetValuedFunctor& f) {
  FlatnessReport report;
  for (int n : f.sizes) {
    if (n > 0) report.nonempty = true;
  }
  // Every pair of elements is covered by a span.
  for (ObjId a = 0; a < cat.num_objects() && report.span_completion; ++a) {
    for (ObjId b = 0; b < cat.num_objects() && report.span_completion; ++b) {
      for (int x = 0; x < f.sizes[a]; ++x) {
        for (int y = 0; y < f.sizes[b]; ++y) {
          bool found = false;
          for (ArrId u = 0; u < cat.num_arrows() && !found; ++u) {
            if (cat.target(u) != a) continue;
            for (ArrId v = 0; v < cat.num_arrows() && !found; ++v) {
              if (cat.target(v) != b) continue;
              if (cat.source(u) != cat.source(v)) continue;
              for (int z = 0; z < f.sizes[cat.source(u)]; ++z) {
                if (f.action[u][z] == x && f.action[v][z] == y) {
                  found = true;
                  break;
                }
              }
            }
          }
          if (!found) {
            report.span_completion = false;
            report.span_witness = {a, x, b, y};
            break;
          }
        }
        if (!report.span_completion) break;
      }
    }
  }
  // Identified elements factor through an equalizing arrow.
  for (ArrId u = 0; u < cat.num_arrows() && report.equalizing; ++u) {
    for (ArrId v = 0; v < cat.num_arrows() && report.equalizing; ++v) {
      if (cat.source(u) != cat.source(v) || cat.target(u) != cat.target(v)) {
        continue;
      }
      ObjId a = cat.source(u);
      for (int x = 0; x < f.sizes[a]; ++x) {
        if (f.action[u][x] != f.action[v][x]) continue;
        bool found = false;
        for (ArrId h = 0; h < cat.num_arrows() && !found; ++h) {
          if (cat.target(h) != a) continue;
          if (cat.compose(u, h) != cat.compose(v, h)) continue;
          for (int z = 0; z < f.sizes[cat.source(h)]; ++z) {
            if (f.action[h][z] == x) {
              found = true;
              break;
            }
          }
        }
        if (!found) {
          report.equalizing = false;
          report.equalizing_witness = {u, v, x};
          break;
        }
      }
    }
  }
  return report;
}

FlatnessReport check_flatness_via_elements(const FinCategory& cat,
                                           const SetValuedFunctor& f) {
  // Category of elements: objects (A, x), arrows (A, x)→(B, y) the arrows
  // g: A→B with g·x = y.  Flatness is cofilteredness of this category.
  struct El {
    ObjId obj;
    int elem;
  };
  std::vector<El> elements;
  for (ObjId a = 0; a < cat.num_objects(); ++a) {
    for (int x = 0; x < f.sizes[a]; ++x) elements.push_back({a, x});
  }
  FlatnessReport report;
  report.nonempty = !elements.empty();
  auto hom = [&](const El& from, const El& to) {
    std::vector<ArrId> out;
    for (ArrId g = 0; g < cat.num_arrows(); ++g) {
      if (cat.source(g) == from.obj && cat.target(g) == to.obj &&
          f.action[g][from.elem] == to.elem) {
        out.push_back(g);
      }
    }
    return out;
  };
  for (const El& a : elements) {
    for (const El& b : elements) {
      bool found = false;
      for (const El& c : elements) {
        if (!hom(c, a).empty() && !hom(c, b).empty()) {
          found = true;
          break;
        }
      }
      if (!found) {
        report.span_completion = false;
        report.span_witness = {a.obj, a.elem, b.obj, b.elem};
      }
      if (!report.span_completion) break;
    }
    if (!report.span_completion) break;
  }
  for (const El& c : elements) {
    for (const El& a : elements) {
      for (ArrId u : hom(c, a)) {
        for (ArrId v : hom(c, a)) {
          if (u == v) continue;
          bool found = false;
          for (const El& d : elements) {
            for (ArrId h : hom(d, c)) {
              if (cat.compose(u, h) == cat.compose(v, h)) {
                found = true;
                break;
              }
            }
            if (found) break;
          }
          if (!found) {
            report.equalizing = false;
            report.equalizing_witness = {u, v, c.elem};
          }
        }
      }
    }
  }
  return report;
}

ContinuityReport check_continuity(const Site& site,
                                  const SetValuedFunctor& f) {
  const FinCategory& cat = site.cat;
  ContinuityReport report;
  report.flat_input = check_flatness(cat, f).flat();
  for (ObjId a = 0; a < cat.num_objects(); ++a) {
    for (ArrowSet r : site.topology.covers[a]) {
      for (int x = 0; x < f.sizes[a]; ++x) {
        bool hit = false;
        for (ArrId g : cat.arrows_into(a)) {
          if (!((r >> g) & 1)) continue;
          for (int y = 0; y < f.sizes[cat.source(g)]; ++y) {
            if (f.action[g][y] == x) {
              hit = true;
              break;
            }
          }
          if (hit) break;
        }
        if (!hit) {
          report.continuous = false;
          report.object = a;
          report.sieve = r;
          report.element = x;
          return report;
        }
      }
    }
  }
  return report;
}

namespace {

// Enumerate component families with per-arrow naturality pruning.
void search_natural(const FinCategory& cat, const SetValuedFunctor& f,
                    const SetValuedFunctor& g, bool bijective,
                    const std::function<bool(const NaturalMap&)>& visit) {
  const int nobj = cat.num_objects();
  NaturalMap components(nobj);
  std::function<bool(ObjId)> rec = [&](ObjId c) -> bool {
    if (c == nobj) return visit(components);
    if (bijective && f.sizes[c] != g.sizes[c]) return true;
    std::vector<int> comp(f.sizes[c]);
    std::function<bool(int)> fill = [&](int x) -> bool {
      if (x == f.sizes[c]) {
        components[c] = comp;
        bool keep = rec(c + 1);
        components[c].clear();
        return keep;
      }
      for (int y = 0; y < g.sizes[c]; ++y) {
        if (bijective) {
          bool used = false;
          for (int i = 0; i < x; ++i) {
            if (comp[i] == y) used = true;
          }
          if (used) continue;
        }
        comp[x] = y;
        // Naturality against every arrow whose source and target components
        // are both determined so far.
        bool ok = true;
        for (ArrId a = 0; a < cat.num_arrows() && ok; ++a) {
          ObjId s = cat.source(a), t = cat.target(a);
          auto known = [&](ObjId o, int e) -> int {
            if (o < c) return components[o][e];
            if (o == c && e <= x) return comp[e];
            return -1;
          };
          for (int e = 0; e < f.sizes[s] && ok; ++e) {
            int ks = known(s, e);
            if (ks < 0) continue;
            int kt = known(t, f.action[a][e]);
            if (kt < 0) continue;
            if (g.action[a][ks] != kt) ok = false;
          }
        }
        if (ok && !fill(x + 1)) return false;
      }
      return true;
    };
    return fill(0);
  };
  rec(0);
}

}  // namespace

std::vector<NaturalMap> natural_transformations(const FinCategory& cat,
                                                const SetValuedFunctor& f,
                                                const SetValuedFunctor& g) {
  std::vector<NaturalMap> out;
  search_natural(cat, f, g, false, [&](const NaturalMap& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::optional<NaturalMap> iso_check(const FinCategory& cat,
                                    const SetValuedFunctor& f,
                                    const SetValuedFunctor& g) {
  std::optional<NaturalMap> found;
  search_natural(cat, f, g, true, [&](const NaturalMap& m) {
    found = m;
    return false;
  });
  return found;
}

namespace {

std::vector<int> serialize(const SetValuedFunctor& f) {
  std::vector<int> out(f.sizes);
  for (const auto& table : f.action) {
    out.insert(out.end(), table.begin(), table.end());
  }
  return out;
}

}  // namespace

SetValuedFunctor canonical_form(const FinCategory& cat,
                                const SetValuedFunctor& f) {
  const int nobj = cat.num_objects();
  std::vector<std::vector<int>> perms(nobj);
  SetValuedFunctor best = f;
  std::vector<int> best_key = serialize(f);
  std::function<void(ObjId)> rec = [&](ObjId c) {
    if (c == nobj) {
      SetValuedFunctor renamed = f;
      for (ArrId a = 0; a < cat.num_arrows(); ++a) {
        ObjId s = cat.source(a), t = cat.target(a);
        for (int x = 0; x < f.sizes[s]; ++x) {
          renamed.action[a][perms[s][x]] = perms[t][f.action[a][x]];
        }
      }
      std::vector<int> key = serialize(renamed);
      if (key < best_key) {
        best_key = key;
        best = renamed;
      }
      return;
    }
    std::vector<int> perm(f.sizes[c]);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      perms[c] = perm;
      rec(c + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  rec(0);
  best.name = f.name;
  return best;
}

namespace {

// All functors with the given cardinalities, via per-arrow table search
// validated at the leaves.
void enumerate_functors(const FinCategory& cat, const std::vector<int>& sizes,
                        const Budget& budget,
                        const std::function<void(const SetValuedFunctor&)>&
                            visit) {
  std::vector<ArrId> free_arrows;
  for (ArrId a = 0; a < cat.num_arrows(); ++a) {
    if (!cat.is_identity(a)) free_arrows.push_back(a);
  }
  long long space = 1;
  for (ArrId a : free_arrows) {
    int dom = sizes[cat.source(a)], cod = sizes[cat.target(a)];
    if (dom > 0 && cod == 0) return;  // no function exists
    for (int i = 0; i < dom; ++i) {
      space *= std::max(1, cod);
      if (space > budget.max_search) {
        throw Error(ErrorKind::SizeGuard,
                    "functor enumeration exceeds the search budget");
      }
    }
  }
  SetValuedFunctor f;
  f.sizes = sizes;
  f.action.resize(cat.num_arrows());
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    auto& id = f.action[cat.identity(c)];
    id.resize(sizes[c]);
    std::iota(id.begin(), id.end(), 0);
  }
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == free_arrows.size()) {
      if (validate_functor(cat, f).valid) visit(f);
      return;
    }
    ArrId a = free_arrows[i];
    int dom = sizes[cat.source(a)], cod = sizes[cat.target(a)];
    std::vector<int> table(dom, 0);
    std::function<void(int)> fill = [&](int x) {
      if (x == dom) {
        f.action[a] = table;
        rec(i + 1);
        return;
      }
      for (int y = 0; y < cod; ++y) {
        table[x] = y;
        fill(x + 1);
      }
    };
    if (dom == 0) {
      f.action[a] = {};
      rec(i + 1);
    } else {
      fill(0);
    }
  };
  rec(0);
}

std::vector<SetValuedFunctor> enumerate_filtered(
    const FinCategory& cat, int max_card, const Budget& budget,
    const std::function<bool(const SetValuedFunctor&)>& keep) {
  std::set<std::vector<int>> seen;
  std::vector<SetValuedFunctor> out;
  std::vector<int> sizes(cat.num_objects(), 0);
  std::function<void(ObjId)> rec = [&](ObjId c) {
    if (c == cat.num_objects()) {
      enumerate_functors(cat, sizes, budget, [&](const SetValuedFunctor& f) {
        if (!keep(f)) return;
        SetValuedFunctor canon = canonical_form(cat, f);
        if (seen.insert(serialize(canon)).second) out.push_back(canon);
      });
      return;
    }
    for (int n = 0; n <= max_card; ++n) {
      sizes[c] = n;
      rec(c + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(),
            [](const SetValuedFunctor& a, const SetValuedFunctor& b) {
              return serialize(a) < serialize(b);
            });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].name = "model_" + std::to_string(i);
  }
  return out;
}

}  // namespace

std::vector<SetValuedFunctor> enumerate_models(const Site& site, int max_card,
                                               const Budget& budget) {
  return enumerate_filtered(
      site.cat, max_card, budget, [&](const SetValuedFunctor& f) {
        return check_flatness(site.cat, f).flat() &&
               check_continuity(site, f).continuous;
      });
}

std::vector<SetValuedFunctor> enumerate_flat_functors(const FinCategory& cat,
                                                      int max_card,
                                                      const Budget& budget) {
  return enumerate_filtered(cat, max_card, budget,
                            [&](const SetValuedFunctor& f) {
                              return check_flatness(cat, f).flat();
                            });
}

HomogeneityReport check_homogeneous(const FinCategory& cat,
                                    const SetValuedFunctor& m,
                                    const std::vector<SetValuedFunctor>& fp) {
  HomogeneityReport report;
  for (std::size_t ai = 0; ai < fp.size(); ++ai) {
    for (std::size_t bi = 0; bi < fp.size(); ++bi) {
      const SetValuedFunctor &a = fp[ai], &b = fp[bi];
      for (const NaturalMap& j : natural_transformations(cat, a, b)) {
        for (const NaturalMap& chi : natural_transformations(cat, a, m)) {
          bool lifted = false;
          for (const NaturalMap& lift : natural_transformations(cat, b, m)) {
            bool commutes = true;
            for (ObjId c = 0; c < cat.num_objects() && commutes; ++c) {
              for (int x = 0; x < a.sizes[c]; ++x) {
                if (lift[c][j[c][x]] != chi[c][x]) {
                  commutes = false;
                  break;
                }
              }
            }
            if (commutes) {
              lifted = true;
              break;
            }
          }
          if (!lifted) {
            report.homogeneous = false;
            report.a = static_cast<int>(ai);
            report.b = static_cast<int>(bi);
            report.j = j;
            report.chi = chi;
            return report;
          }
        }
      }
    }
  }
  return report;
}

}  // namespace sitekit
