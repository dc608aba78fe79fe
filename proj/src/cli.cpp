#include "sitekit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sitekit/dsl.hpp"
#include "sitekit/fraisse.hpp"

namespace sitekit {

namespace {

using nlohmann::json;

void apply_budget_env() {
  const char* raw = std::getenv("SITEKIT_BUDGET");
  if (!raw || !*raw) return;
  Budget& budget = global_budget();
  std::stringstream in(raw);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    std::string key = eq == std::string::npos ? "max_search"
                                              : item.substr(0, eq);
    std::string value = eq == std::string::npos ? item : item.substr(eq + 1);
    long long parsed = 0;
    try {
      parsed = std::stoll(value);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadRequest,
                  "SITEKIT_BUDGET: cannot parse '" + item + "'");
    }
    if (key == "max_objects") {
      budget.max_objects = static_cast<int>(parsed);
    } else if (key == "max_arrows") {
      budget.max_arrows = static_cast<int>(parsed);
    } else if (key == "max_arrows_per_object") {
      budget.max_arrows_per_object = static_cast<int>(parsed);
    } else if (key == "max_sieve_universe") {
      budget.max_sieve_universe = static_cast<int>(parsed);
    } else if (key == "max_search") {
      budget.max_search = parsed;
    } else {
      throw Error(ErrorKind::BadRequest,
                  "SITEKIT_BUDGET: unknown key '" + key + "'");
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::BadRequest, "cannot open '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> sieve_names(const FinCategory& cat, ArrowSet bits) {
  std::vector<std::string> out;
  for (ArrId f = 0; f < cat.num_arrows(); ++f) {
    if ((bits >> f) & 1) out.push_back(cat.arrow_name(f));
  }
  return out;
}

json topology_json(const FinCategory& cat, const GrothendieckTopology& t) {
  json covers = json::object();
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    json list = json::array();
    for (ArrowSet s : t.covers[c]) list.push_back(sieve_names(cat, s));
    covers[cat.object_name(c)] = list;
  }
  return covers;
}

void print_topology(std::ostream& out, const FinCategory& cat,
                    const GrothendieckTopology& t, const std::string& indent) {
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    out << indent << cat.object_name(c) << ":";
    for (ArrowSet s : t.covers[c]) {
      out << " {";
      bool first = true;
      for (const std::string& name : sieve_names(cat, s)) {
        out << (first ? "" : " ") << name;
        first = false;
      }
      out << "}";
    }
    out << "\n";
  }
}

json functor_json(const FinCategory& cat, const std::vector<int>& sizes,
                  const std::vector<std::vector<int>>& action) {
  json sets = json::object();
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    sets[cat.object_name(c)] = sizes[c];
  }
  json actions = json::object();
  for (ArrId f = 0; f < cat.num_arrows(); ++f) {
    if (cat.is_identity(f)) continue;
    actions[cat.arrow_name(f)] = action[f];
  }
  return {{"sets", sets}, {"actions", actions}};
}

// The driver holds the parsed command state and lazily loaded workspace.
struct Driver {
  std::ostream& out;
  std::ostream& err;
  std::string file;
  bool want_json = false;
  std::optional<Workspace> ws;

  Workspace& workspace() {
    if (!ws) {
      if (file.empty()) {
        throw Error(ErrorKind::BadRequest,
                    "this command needs a workspace file (-f FILE)");
      }
      ws = parse_workspace(read_file(file));
    }
    return *ws;
  }

  Site make_site(const std::string& name) {
    Workspace& w = workspace();
    const NamedSite& s = w.site(name);
    return Site{w.category(s.category), w.topology(s.topology).topology};
  }

  // Emits the report and returns the exit code.
  int emit(const std::string& command, bool ok, const json& data,
           const std::string& text) {
    if (want_json) {
      json envelope = {{"schema_version", 1},
                       {"command", command},
                       {"ok", ok},
                       {"data", data}};
      out << envelope.dump(2) << "\n";
    } else {
      out << text;
    }
    return ok ? 0 : 1;
  }
};

std::string bool_word(bool b) { return b ? "yes" : "no"; }

int cmd_validate(Driver& d) {
  Workspace& w = d.workspace();
  json data = {{"categories", w.categories.size()},
               {"topologies", w.topologies.size()},
               {"sites", w.sites.size()},
               {"functors", w.functors.size()},
               {"presheaves", w.presheaves.size()}};
  std::ostringstream text;
  text << "ok: " << w.categories.size() << " categories, "
       << w.topologies.size() << " topologies, " << w.sites.size()
       << " sites, " << w.functors.size() << " functors, "
       << w.presheaves.size() << " presheaves\n";
  return d.emit("validate", true, data, text.str());
}

int cmd_props(Driver& d, const std::string& name) {
  const FinCategory& cat = d.workspace().category(name);
  PropertyReport ore = check_right_ore(cat);
  PropertyReport ap = check_amalgamation(cat);
  PropertyReport jep = check_joint_embedding(cat);
  json data = {{"right_ore", ore.holds},
               {"amalgamation", ap.holds},
               {"joint_embedding", jep.holds}};
  std::ostringstream text;
  text << name << ": right_ore=" << bool_word(ore.holds)
       << " amalgamation=" << bool_word(ap.holds)
       << " joint_embedding=" << bool_word(jep.holds) << "\n";
  if (!ore.holds) text << "  right Ore fails: " << ore.describe(cat) << "\n";
  if (!ap.holds) text << "  amalgamation fails: " << ap.describe(cat) << "\n";
  if (!jep.holds) {
    text << "  joint embedding fails: " << jep.describe(cat) << "\n";
  }
  return d.emit("props", true, data, text.str());
}

int cmd_topo_generate(Driver& d, const std::string& name) {
  Workspace& w = d.workspace();
  const NamedTopology& t = w.topology(name);
  const FinCategory& cat = w.category(t.category);
  TopologyReport report = validate_topology(cat, t.topology);
  json data = {{"topology", name},
               {"category", t.category},
               {"valid", report.valid},
               {"covers", topology_json(cat, t.topology)}};
  std::ostringstream text;
  text << "topology " << name << " on " << t.category
       << (report.valid ? " (valid)" : " (INVALID)") << "\n";
  print_topology(text, cat, t.topology, "  ");
  return d.emit("topo generate", report.valid, data, text.str());
}

int cmd_topo_enumerate(Driver& d, const std::string& name, bool lattice_only) {
  const FinCategory& cat = d.workspace().category(name);
  TopologyLattice lattice = enumerate_topologies(cat);
  const int n = static_cast<int>(lattice.elements.size());
  json data = {{"category", name}, {"count", n}};
  std::ostringstream text;
  if (lattice_only) {
    json leq = json::array();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j &&
            topology_leq(lattice.elements[i], lattice.elements[j])) {
          leq.push_back({i, j});
        }
      }
    }
    data["bottom"] = lattice.index_of(lattice.bottom());
    data["top"] = lattice.index_of(lattice.top());
    data["leq"] = leq;
    text << name << ": " << n << " topologies, bottom #"
         << lattice.index_of(lattice.bottom()) << ", top #"
         << lattice.index_of(lattice.top()) << ", " << leq.size()
         << " strict order pairs\n";
  } else {
    json items = json::array();
    for (const GrothendieckTopology& t : lattice.elements) {
      items.push_back(topology_json(cat, t));
    }
    data["topologies"] = items;
    text << name << ": " << n << " topologies\n";
    for (int i = 0; i < n; ++i) {
      text << "#" << i << "\n";
      print_topology(text, cat, lattice.elements[i], "  ");
    }
  }
  return d.emit(lattice_only ? "topo lattice" : "topo enumerate", true, data,
                text.str());
}

int cmd_topo_binop(Driver& d, const std::string& op, const std::string& lhs,
                   const std::string& rhs) {
  Workspace& w = d.workspace();
  const NamedTopology& j = w.topology(lhs);
  const NamedTopology& k = w.topology(rhs);
  if (j.category != k.category) {
    throw Error(ErrorKind::BadRequest, "topologies '" + lhs + "' and '" +
                                           rhs +
                                           "' live on different categories");
  }
  const FinCategory& cat = w.category(j.category);
  LatticeOp kind = op == "meet"   ? LatticeOp::Meet
                   : op == "join" ? LatticeOp::Join
                                  : LatticeOp::Implication;
  GrothendieckTopology result = lattice_ops(cat, j.topology, k.topology, kind);
  json data = {{"category", j.category},
               {"lhs", lhs},
               {"rhs", rhs},
               {"covers", topology_json(cat, result)}};
  std::ostringstream text;
  text << op << "(" << lhs << ", " << rhs << ") on " << j.category << "\n";
  print_topology(text, cat, result, "  ");
  return d.emit("topo " + op, true, data, text.str());
}

int cmd_subtoposes(Driver& d, const std::string& name) {
  Workspace& w = d.workspace();
  const NamedSite& s = w.site(name);
  const FinCategory& cat = w.category(s.category);
  std::vector<GrothendieckTopology> list =
      enumerate_subtoposes(cat, w.topology(s.topology).topology);
  json items = json::array();
  for (const GrothendieckTopology& t : list) {
    items.push_back(topology_json(cat, t));
  }
  json data = {{"site", name},
               {"count", list.size()},
               {"topologies", items}};
  std::ostringstream text;
  text << name << ": " << list.size() << " subtoposes\n";
  for (std::size_t i = 0; i < list.size(); ++i) {
    text << "#" << i << "\n";
    print_topology(text, cat, list[i], "  ");
  }
  return d.emit("subtoposes", true, data, text.str());
}

int cmd_sheaf_check(Driver& d, const std::string& site_name,
                    const std::string& presheaf_name) {
  Workspace& w = d.workspace();
  Site site = d.make_site(site_name);
  const NamedPresheaf& p = w.presheaf(presheaf_name);
  SheafReport report = check_sheaf(site, p.presheaf);
  json data = {{"site", site_name},
               {"presheaf", presheaf_name},
               {"is_sheaf", report.is_sheaf},
               {"message", report.message}};
  if (report.family) {
    data["witness"] = {
        {"object", site.cat.object_name(report.family->sieve.base)},
        {"sieve", sieve_names(site.cat, report.family->sieve.members)},
        {"amalgamations", report.amalgamations}};
  }
  std::ostringstream text;
  text << presheaf_name << " on " << site_name << ": "
       << (report.is_sheaf ? "sheaf" : "not a sheaf") << "\n";
  if (!report.message.empty()) text << "  " << report.message << "\n";
  return d.emit("sheaf check", report.is_sheaf, data, text.str());
}

int cmd_subterminals(Driver& d, const std::string& name) {
  Site site = d.make_site(name);
  SubterminalReport report = enumerate_subterminal_sheaves(site);
  json items = json::array();
  for (const auto& sub : report.subterminals) {
    json one = json::object();
    for (ObjId c = 0; c < site.cat.num_objects(); ++c) {
      one[site.cat.object_name(c)] = static_cast<int>(sub[c]);
    }
    items.push_back(one);
  }
  json data = {{"site", name},
               {"count", report.count()},
               {"two_valued", report.two_valued()},
               {"subterminals", items}};
  std::ostringstream text;
  text << name << ": " << report.count() << " subterminal sheaves"
       << (report.two_valued() ? " (two-valued)" : "") << "\n";
  return d.emit("subterminals", true, data, text.str());
}

int cmd_invariants(Driver& d, const std::string& name) {
  Site site = d.make_site(name);
  SiteInvariantReport r = site_invariants(site);
  json data = {{"site", name},
               {"degenerate", r.degenerate},
               {"atomic", r.atomic},
               {"atomic_reason", r.atomic_reason},
               {"two_valued", r.two_valued},
               {"subterminal_count", r.subterminal_count},
               {"boolean_site", r.boolean_site},
               {"de_morgan_site", r.de_morgan_site}};
  auto witness = [&](const std::optional<std::pair<ObjId, ArrowSet>>& wit) {
    json j = nullptr;
    if (wit) {
      j = {{"object", site.cat.object_name(wit->first)},
           {"sieve", sieve_names(site.cat, wit->second)}};
    }
    return j;
  };
  data["boolean_witness"] = witness(r.boolean_witness);
  data["de_morgan_witness"] = witness(r.de_morgan_witness);
  std::ostringstream text;
  text << name << ": degenerate=" << bool_word(r.degenerate)
       << " atomic=" << bool_word(r.atomic)
       << " two_valued=" << bool_word(r.two_valued)
       << " subterminals=" << r.subterminal_count
       << " boolean=" << bool_word(r.boolean_site)
       << " de_morgan=" << bool_word(r.de_morgan_site) << "\n";
  if (r.boolean_witness) {
    text << "  non-complemented closed sieve at "
         << site.cat.object_name(r.boolean_witness->first) << ": {";
    bool first = true;
    for (const auto& n : sieve_names(site.cat, r.boolean_witness->second)) {
      text << (first ? "" : " ") << n;
      first = false;
    }
    text << "}\n";
  }
  return d.emit("invariants", true, data, text.str());
}

int cmd_object_invariants(Driver& d, const std::string& site_name,
                          const std::string& presheaf_name) {
  Workspace& w = d.workspace();
  Site site = d.make_site(site_name);
  const NamedPresheaf& p = w.presheaf(presheaf_name);
  ObjectInvariantReport r = object_invariants(site, p.presheaf);
  json data = {{"site", site_name},
               {"presheaf", presheaf_name},
               {"is_atom", r.is_atom},
               {"is_indecomposable", r.is_indecomposable},
               {"is_compact", r.is_compact},
               {"closed_subobjects", r.closed_subobject_count},
               {"note", r.note}};
  std::ostringstream text;
  text << presheaf_name << " in " << site_name
       << ": atom=" << bool_word(r.is_atom)
       << " indecomposable=" << bool_word(r.is_indecomposable)
       << " compact=" << bool_word(r.is_compact)
       << " closed_subobjects=" << r.closed_subobject_count << "\n";
  if (!r.note.empty()) text << "  " << r.note << "\n";
  return d.emit("object-invariants", true, data, text.str());
}

int cmd_model_check(Driver& d, const std::string& site_name,
                    const std::string& functor_name) {
  Workspace& w = d.workspace();
  Site site = d.make_site(site_name);
  const NamedFunctor& f = w.functor(functor_name);
  FlatnessReport flat = check_flatness(site.cat, f.functor);
  ContinuityReport cont = check_continuity(site, f.functor);
  bool ok = flat.flat() && cont.continuous;
  json data = {{"site", site_name},
               {"functor", functor_name},
               {"nonempty", flat.nonempty},
               {"span_completion", flat.span_completion},
               {"equalizing", flat.equalizing},
               {"flat", flat.flat()},
               {"continuous", cont.continuous},
               {"model", ok}};
  std::ostringstream text;
  text << functor_name << " on " << site_name << ": "
       << (ok ? "model" : "not a model") << " (nonempty="
       << bool_word(flat.nonempty)
       << " span_completion=" << bool_word(flat.span_completion)
       << " equalizing=" << bool_word(flat.equalizing)
       << " continuous=" << bool_word(cont.continuous) << ")\n";
  return d.emit("model check", ok, data, text.str());
}

int cmd_model_enumerate(Driver& d, const std::string& site_name,
                        int max_card) {
  Site site = d.make_site(site_name);
  std::vector<SetValuedFunctor> models = enumerate_models(site, max_card);
  json items = json::array();
  for (const SetValuedFunctor& m : models) {
    items.push_back(functor_json(site.cat, m.sizes, m.action));
  }
  json data = {{"site", site_name},
               {"max_card", max_card},
               {"count", models.size()},
               {"models", items}};
  std::ostringstream text;
  text << site_name << ": " << models.size() << " models up to cardinality "
       << max_card << "\n";
  return d.emit("model enumerate", true, data, text.str());
}

int cmd_homogeneous(Driver& d, const std::string& site_name,
                    const std::string& model_name, const std::string& fp) {
  Workspace& w = d.workspace();
  Site site = d.make_site(site_name);
  const NamedFunctor& m = w.functor(model_name);
  std::vector<SetValuedFunctor> fps;
  std::stringstream in(fp);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) fps.push_back(w.functor(item).functor);
  }
  HomogeneityReport r = check_homogeneous(site.cat, m.functor, fps);
  json data = {{"site", site_name},
               {"model", model_name},
               {"fp_count", fps.size()},
               {"homogeneous", r.homogeneous}};
  std::ostringstream text;
  text << model_name << ": "
       << (r.homogeneous ? "homogeneous" : "not homogeneous") << " over "
       << fps.size() << " fp models\n";
  return d.emit("homogeneous", r.homogeneous, data, text.str());
}

json structure_sizes(const LimitChain& chain) {
  json sizes = json::array();
  for (const Structure& s : chain.stages) sizes.push_back(s.size);
  return sizes;
}

int cmd_fraisse_verify(Driver& d, const std::string& cls_name, int bound) {
  auto cls = make_class(cls_name);
  if (bound <= 0) bound = cls->default_verify_bound();
  ClassPropertyReport r = verify_class_properties(*cls, bound);
  bool ok = r.amalgamation && r.joint_embedding;
  json data = {{"class", cls_name},
               {"bound", bound},
               {"amalgamation", r.amalgamation},
               {"joint_embedding", r.joint_embedding},
               {"spans_checked", r.spans_checked},
               {"pairs_checked", r.pairs_checked}};
  std::ostringstream text;
  text << cls_name << " up to size " << bound
       << ": amalgamation=" << bool_word(r.amalgamation)
       << " joint_embedding=" << bool_word(r.joint_embedding) << " ("
       << r.spans_checked << " spans, " << r.pairs_checked << " pairs)\n";
  return d.emit("fraisse verify", ok, data, text.str());
}

int cmd_fraisse_limit(Driver& d, const std::string& cls_name, int steps,
                      unsigned seed, const std::string& out_path) {
  auto cls = make_class(cls_name);
  LimitChain chain = build_limit(*cls, steps, seed);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      throw Error(ErrorKind::BadRequest, "cannot write '" + out_path + "'");
    }
    out << chain.to_json() << "\n";
  }
  json data = {{"class", cls_name},
               {"steps", steps},
               {"seed", seed},
               {"final_size", chain.final_stage().size},
               {"tasks_discharged", chain.task_log.size()},
               {"stage_sizes", structure_sizes(chain)}};
  std::ostringstream text;
  text << cls_name << " chain: " << steps << " steps, seed " << seed
       << ", final carrier " << chain.final_stage().size << ", "
       << chain.task_log.size() << " tasks discharged\n";
  return d.emit("fraisse limit", true, data, text.str());
}

int cmd_fraisse_extension(Driver& d, const std::string& cls_name, int steps,
                          unsigned seed, int depth, int size) {
  auto cls = make_class(cls_name);
  if (size <= 0) size = cls->task_bound();
  LimitChain chain = build_limit(*cls, steps, seed);
  ExtensionReport r = check_limit_extension(*cls, chain, depth, size);
  json failures = json::array();
  for (const ExtensionFailure& f : r.failures) {
    failures.push_back({{"a_size", f.a.size},
                        {"b_size", f.b.size},
                        {"chi", f.chi},
                        {"undischarged", f.undischarged}});
  }
  json data = {{"class", cls_name},
               {"steps", steps},
               {"seed", seed},
               {"depth", depth},
               {"size", size},
               {"ok", r.ok},
               {"tasks_checked", r.tasks_checked},
               {"failure_count", r.failure_count},
               {"failures", failures}};
  std::ostringstream text;
  text << cls_name << " extension at depth " << depth << ", size " << size
       << ": " << (r.ok ? "holds" : "fails") << " (" << r.tasks_checked
       << " tasks";
  if (!r.ok) text << ", " << r.failure_count << " failures";
  text << ")\n";
  return d.emit("fraisse extension", r.ok, data, text.str());
}

int cmd_fraisse_iso(Driver& d, const std::string& cls_name, int steps,
                    unsigned seed, unsigned seed2, int k) {
  auto cls = make_class(cls_name);
  LimitChain l1 = build_limit(*cls, steps, seed);
  LimitChain l2 = build_limit(*cls, steps, seed2);
  BackAndForthResult r = back_and_forth(*cls, l1, l2, k);
  json pairs = json::array();
  for (const auto& [x, y] : r.pairs) pairs.push_back({x, y});
  json data = {{"class", cls_name},
               {"steps", steps},
               {"seed", seed},
               {"seed2", seed2},
               {"k", k},
               {"ok", r.ok},
               {"pairs", pairs},
               {"failure", r.failure}};
  std::ostringstream text;
  if (r.ok) {
    text << cls_name << " chains (seeds " << seed << ", " << seed2
         << "): partial isomorphism on " << r.pairs.size() << " pairs\n";
    for (const auto& [x, y] : r.pairs) {
      text << "  " << x << " <-> " << y << "\n";
    }
  } else {
    text << cls_name << " chains: no partial isomorphism (" << r.failure
         << ")\n";
  }
  return d.emit("fraisse iso", r.ok, data, text.str());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Driver d{out, err};

  CLI::App app{"finite-site workbench"};
  app.require_subcommand(1);
  app.add_option("-f,--file", d.file, "workspace file");
  app.add_flag("--json", d.want_json, "emit a JSON report");

  std::string name, second, fp_list, cls_name = "linord", out_path;
  int max_card = 2, steps = 10, depth = 0, k = 4, size = 0, bound = 0;
  unsigned seed = 1, seed2 = 2;

  CLI::App* validate = app.add_subcommand("validate", "parse the workspace");

  CLI::App* props = app.add_subcommand("props", "category properties");
  props->add_option("category", name)->required();

  CLI::App* topo = app.add_subcommand("topo", "topology operations");
  topo->require_subcommand(1);
  CLI::App* topo_generate = topo->add_subcommand("generate");
  topo_generate->add_option("topology", name)->required();
  CLI::App* topo_enumerate = topo->add_subcommand("enumerate");
  topo_enumerate->add_option("category", name)->required();
  CLI::App* topo_lattice = topo->add_subcommand("lattice");
  topo_lattice->add_option("category", name)->required();
  CLI::App* topo_meet = topo->add_subcommand("meet");
  topo_meet->add_option("lhs", name)->required();
  topo_meet->add_option("rhs", second)->required();
  CLI::App* topo_join = topo->add_subcommand("join");
  topo_join->add_option("lhs", name)->required();
  topo_join->add_option("rhs", second)->required();
  CLI::App* topo_implies = topo->add_subcommand("implies");
  topo_implies->add_option("lhs", name)->required();
  topo_implies->add_option("rhs", second)->required();

  CLI::App* subtoposes = app.add_subcommand("subtoposes", "list subtoposes");
  subtoposes->add_option("site", name)->required();

  CLI::App* sheaf = app.add_subcommand("sheaf", "sheaf operations");
  sheaf->require_subcommand(1);
  CLI::App* sheaf_check = sheaf->add_subcommand("check");
  sheaf_check->add_option("site", name)->required();
  sheaf_check->add_option("presheaf", second)->required();

  CLI::App* subterminals =
      app.add_subcommand("subterminals", "subterminal sheaves");
  subterminals->add_option("site", name)->required();

  CLI::App* invariants = app.add_subcommand("invariants", "site invariants");
  invariants->add_option("site", name)->required();

  CLI::App* object_invariants =
      app.add_subcommand("object-invariants", "sheaf object invariants");
  object_invariants->add_option("site", name)->required();
  object_invariants->add_option("presheaf", second)->required();

  CLI::App* model = app.add_subcommand("model", "model operations");
  model->require_subcommand(1);
  CLI::App* model_check = model->add_subcommand("check");
  model_check->add_option("site", name)->required();
  model_check->add_option("functor", second)->required();
  CLI::App* model_enumerate = model->add_subcommand("enumerate");
  model_enumerate->add_option("site", name)->required();
  model_enumerate->add_option("--max-card", max_card);

  CLI::App* homogeneous =
      app.add_subcommand("homogeneous", "homogeneity check");
  homogeneous->add_option("site", name)->required();
  homogeneous->add_option("model", second)->required();
  homogeneous->add_option("--fp", fp_list, "comma-separated fp models")
      ->required();

  CLI::App* fraisse = app.add_subcommand("fraisse", "chain constructions");
  fraisse->require_subcommand(1);
  CLI::App* fr_verify = fraisse->add_subcommand("verify");
  CLI::App* fr_limit = fraisse->add_subcommand("limit");
  CLI::App* fr_extension = fraisse->add_subcommand("extension");
  CLI::App* fr_iso = fraisse->add_subcommand("iso");
  for (CLI::App* sub : {fr_verify, fr_limit, fr_extension, fr_iso}) {
    sub->add_option("--class", cls_name, "structure class");
  }
  fr_verify->add_option("--bound", bound);
  for (CLI::App* sub : {fr_limit, fr_extension, fr_iso}) {
    sub->add_option("--steps", steps);
    sub->add_option("--seed", seed);
  }
  fr_limit->add_option("--out", out_path, "write the chain JSON log");
  fr_extension->add_option("--depth", depth)->required();
  fr_extension->add_option("--size", size);
  fr_iso->add_option("--seed2", seed2);
  fr_iso->add_option("--k", k);

  // Let global flags (-f, --json) appear after subcommand words.
  std::function<void(CLI::App*)> allow_fallthrough = [&](CLI::App* a) {
    for (CLI::App* sub : a->get_subcommands({})) {
      sub->fallthrough(true);
      allow_fallthrough(sub);
    }
  };
  allow_fallthrough(&app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    apply_budget_env();
    if (*validate) return cmd_validate(d);
    if (*props) return cmd_props(d, name);
    if (*topo_generate) return cmd_topo_generate(d, name);
    if (*topo_enumerate) return cmd_topo_enumerate(d, name, false);
    if (*topo_lattice) return cmd_topo_enumerate(d, name, true);
    if (*topo_meet) return cmd_topo_binop(d, "meet", name, second);
    if (*topo_join) return cmd_topo_binop(d, "join", name, second);
    if (*topo_implies) return cmd_topo_binop(d, "implies", name, second);
    if (*subtoposes) return cmd_subtoposes(d, name);
    if (*sheaf_check) return cmd_sheaf_check(d, name, second);
    if (*subterminals) return cmd_subterminals(d, name);
    if (*invariants) return cmd_invariants(d, name);
    if (*object_invariants) return cmd_object_invariants(d, name, second);
    if (*model_check) return cmd_model_check(d, name, second);
    if (*model_enumerate) return cmd_model_enumerate(d, name, max_card);
    if (*homogeneous) return cmd_homogeneous(d, name, second, fp_list);
    if (*fr_verify) return cmd_fraisse_verify(d, cls_name, bound);
    if (*fr_limit) return cmd_fraisse_limit(d, cls_name, steps, seed, out_path);
    if (*fr_extension) {
      return cmd_fraisse_extension(d, cls_name, steps, seed, depth, size);
    }
    if (*fr_iso) return cmd_fraisse_iso(d, cls_name, steps, seed, seed2, k);
    err << "error: no command\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace sitekit
