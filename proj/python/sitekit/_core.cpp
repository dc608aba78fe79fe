// Python bindings for the main workbench operations.
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sitekit/cli.hpp"
#include "sitekit/dsl.hpp"
#include "sitekit/fraisse.hpp"

namespace py = pybind11;
using namespace sitekit;

namespace {

CanonicalKind canonical_kind(const std::string& kind) {
  if (kind == "trivial") return CanonicalKind::Trivial;
  if (kind == "atomic") return CanonicalKind::Atomic;
  if (kind == "dense") return CanonicalKind::Dense;
  throw Error(ErrorKind::BadRequest, "unknown canonical kind: " + kind);
}

LatticeOp lattice_op(const std::string& op) {
  if (op == "meet") return LatticeOp::Meet;
  if (op == "join") return LatticeOp::Join;
  if (op == "implies") return LatticeOp::Implication;
  throw Error(ErrorKind::BadRequest, "unknown lattice op: " + op);
}

// Covering families as {object name: sorted list of arrow-name lists}.
py::dict covers_dict(const FinCategory& cat, const GrothendieckTopology& j) {
  py::dict out;
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    py::list families;
    for (ArrowSet bits : j.covers[c]) {
      py::list members;
      for (ArrId f = 0; f < cat.num_arrows(); ++f) {
        if (bits >> f & 1) members.append(cat.arrow_name(f));
      }
      families.append(members);
    }
    out[py::str(cat.object_name(c))] = families;
  }
  return out;
}

ArrowSet sieve_bits(const FinCategory& cat,
                    const std::vector<std::string>& arrows) {
  ArrowSet bits = 0;
  for (const std::string& name : arrows) {
    auto id = cat.arrow_id(name);
    if (!id) {
      throw Error(ErrorKind::UnresolvedReference, "unknown arrow: " + name);
    }
    bits |= ArrowSet{1} << *id;
  }
  return bits;
}

py::dict functor_dict(const FinCategory& cat, const SetValuedFunctor& f) {
  py::dict sizes, action;
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    sizes[py::str(cat.object_name(c))] = f.sizes[c];
  }
  for (ArrId a = 0; a < cat.num_arrows(); ++a) {
    action[py::str(cat.arrow_name(a))] = f.action[a];
  }
  py::dict out;
  out["name"] = f.name;
  out["sizes"] = sizes;
  out["action"] = action;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finite-site workbench core";

  static py::exception<Error> exc(m, "SitekitError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      exc(e.what());
    }
  });

  py::class_<FinCategory>(m, "Category")
      .def_static(
          "build",
          [](const std::string& name, const std::vector<std::string>& objects,
             const std::vector<std::tuple<std::string, std::string,
                                          std::string>>& arrows,
             const std::vector<std::tuple<std::string, std::string,
                                          std::string>>& compose) {
            CategorySpec spec;
            spec.name = name;
            spec.objects = objects;
            for (const auto& [f, src, tgt] : arrows) {
              spec.arrows.push_back({f, src, tgt});
            }
            for (const auto& [g, f, gf] : compose) {
              spec.equations.push_back({g, f, gf});
            }
            return FinCategory::build(spec);
          },
          py::arg("name"), py::arg("objects"), py::arg("arrows"),
          py::arg("compose") = std::vector<
              std::tuple<std::string, std::string, std::string>>{})
      .def_property_readonly("name", &FinCategory::name)
      .def_property_readonly("objects",
                             [](const FinCategory& cat) {
                               std::vector<std::string> out;
                               for (ObjId c = 0; c < cat.num_objects(); ++c) {
                                 out.push_back(cat.object_name(c));
                               }
                               return out;
                             })
      .def_property_readonly("arrows",
                             [](const FinCategory& cat) {
                               std::vector<std::string> out;
                               for (ArrId f = 0; f < cat.num_arrows(); ++f) {
                                 out.push_back(cat.arrow_name(f));
                               }
                               return out;
                             })
      .def("source",
           [](const FinCategory& cat, const std::string& f) {
             return cat.object_name(cat.source(*cat.arrow_id(f)));
           })
      .def("target",
           [](const FinCategory& cat, const std::string& f) {
             return cat.object_name(cat.target(*cat.arrow_id(f)));
           })
      .def("compose",
           [](const FinCategory& cat, const std::string& g,
              const std::string& f) -> std::optional<std::string> {
             ArrId gi = *cat.arrow_id(g), fi = *cat.arrow_id(f);
             if (!cat.composable(gi, fi)) return std::nullopt;
             return cat.arrow_name(cat.compose(gi, fi));
           })
      .def("opposite", &FinCategory::opposite)
      .def("right_ore",
           [](const FinCategory& cat) { return check_right_ore(cat).holds; })
      .def("amalgamation",
           [](const FinCategory& cat) {
             return check_amalgamation(cat).holds;
           })
      .def("joint_embedding",
           [](const FinCategory& cat) {
             return check_joint_embedding(cat).holds;
           })
      .def(py::self == py::self)
      .def("__repr__", [](const FinCategory& cat) {
        return "<Category " + cat.name() + ": " +
               std::to_string(cat.num_objects()) + " objects, " +
               std::to_string(cat.num_arrows()) + " arrows>";
      });

  py::class_<GrothendieckTopology>(m, "Topology")
      .def(py::self == py::self)
      .def("degenerate", &GrothendieckTopology::degenerate);

  m.def("canonical_topology",
        [](const FinCategory& cat, const std::string& kind) {
          return canonical_topology(cat, canonical_kind(kind));
        });
  m.def("generate_topology",
        [](const FinCategory& cat,
           const std::vector<std::pair<std::string,
                                       std::vector<std::string>>>& seeds) {
          std::vector<Sieve> sieves;
          for (const auto& [obj, arrows] : seeds) {
            auto c = cat.object_id(obj);
            if (!c) {
              throw Error(ErrorKind::UnresolvedReference,
                          "unknown object: " + obj);
            }
            sieves.push_back(close_to_sieve(cat, *c, sieve_bits(cat, arrows)));
          }
          return generate_topology(cat, sieves);
        });
  m.def("validate_topology",
        [](const FinCategory& cat, const GrothendieckTopology& j) {
          return validate_topology(cat, j).valid;
        });
  m.def("topology_leq", &topology_leq);
  m.def("covers", &covers_dict);
  m.def("enumerate_topologies", [](const FinCategory& cat) {
    return enumerate_topologies(cat).elements;
  });
  m.def("lattice_op",
        [](const FinCategory& cat, const GrothendieckTopology& j,
           const GrothendieckTopology& k, const std::string& op) {
          return lattice_ops(cat, j, k, lattice_op(op));
        });
  m.def("subtoposes",
        [](const FinCategory& cat, const GrothendieckTopology& j) {
          return enumerate_subtoposes(cat, j);
        });

  py::class_<Presheaf>(m, "Presheaf")
      .def_property_readonly("name",
                             [](const Presheaf& p) { return p.name; })
      .def_property_readonly("sizes",
                             [](const Presheaf& p) { return p.sizes; });
  m.def("representable", &representable_presheaf);
  m.def("check_sheaf",
        [](const FinCategory& cat, const GrothendieckTopology& j,
           const Presheaf& p) {
          SheafReport r = check_sheaf({cat, j}, p);
          py::dict out;
          out["is_sheaf"] = r.is_sheaf;
          out["amalgamations"] = r.amalgamations;
          out["message"] = r.message;
          return out;
        });
  m.def("subterminal_count",
        [](const FinCategory& cat, const GrothendieckTopology& j) {
          return enumerate_subterminal_sheaves({cat, j}).count();
        });
  m.def("site_invariants",
        [](const FinCategory& cat, const GrothendieckTopology& j) {
          SiteInvariantReport r = site_invariants({cat, j});
          py::dict out;
          out["atomic"] = r.atomic;
          out["two_valued"] = r.two_valued;
          out["subterminal_count"] = r.subterminal_count;
          out["boolean_site"] = r.boolean_site;
          out["de_morgan_site"] = r.de_morgan_site;
          out["degenerate"] = r.degenerate;
          if (r.boolean_witness) {
            py::list members;
            for (ArrId f = 0; f < cat.num_arrows(); ++f) {
              if (r.boolean_witness->second >> f & 1) {
                members.append(cat.arrow_name(f));
              }
            }
            out["boolean_witness"] = py::make_tuple(
                cat.object_name(r.boolean_witness->first), members);
          }
          return out;
        });

  py::class_<SetValuedFunctor>(m, "Functor")
      .def_property_readonly("name",
                             [](const SetValuedFunctor& f) { return f.name; })
      .def_property_readonly(
          "sizes", [](const SetValuedFunctor& f) { return f.sizes; });
  m.def("corepresentable", &corepresentable_functor);
  m.def("check_flatness",
        [](const FinCategory& cat, const SetValuedFunctor& f) {
          FlatnessReport r = check_flatness(cat, f);
          py::dict out;
          out["flat"] = r.flat();
          out["nonempty"] = r.nonempty;
          out["span_completion"] = r.span_completion;
          out["equalizing"] = r.equalizing;
          return out;
        });
  m.def("enumerate_models",
        [](const FinCategory& cat, const GrothendieckTopology& j,
           int max_card) {
          py::list out;
          for (const SetValuedFunctor& f :
               enumerate_models({cat, j}, max_card)) {
            out.append(functor_dict(cat, f));
          }
          return out;
        });

  py::class_<Workspace>(m, "Workspace")
      .def_property_readonly(
          "categories",
          [](const Workspace& ws) { return ws.categories; })
      .def("category", &Workspace::category,
           py::return_value_policy::reference_internal)
      .def("topology",
           [](const Workspace& ws, const std::string& name) {
             return ws.topology(name).topology;
           })
      .def("site",
           [](const Workspace& ws, const std::string& name) {
             const NamedSite& s = ws.site(name);
             return py::make_tuple(ws.category(s.category),
                                   ws.topology(s.topology).topology);
           })
      .def("functor",
           [](const Workspace& ws, const std::string& name) {
             return ws.functor(name).functor;
           })
      .def("presheaf", [](const Workspace& ws, const std::string& name) {
        return ws.presheaf(name).presheaf;
      });
  m.def("parse_workspace",
        [](const std::string& text) { return parse_workspace(text); });
  m.def("serialize_workspace", &serialize_workspace);

  py::class_<LimitChain>(m, "LimitChain")
      .def_property_readonly(
          "class_name", [](const LimitChain& c) { return c.class_name; })
      .def_property_readonly("seed",
                             [](const LimitChain& c) { return c.seed; })
      .def_property_readonly(
          "sizes",
          [](const LimitChain& c) {
            std::vector<int> out;
            for (const Structure& s : c.stages) out.push_back(s.size);
            return out;
          })
      .def("to_json", &LimitChain::to_json)
      .def_static("from_json", &LimitChain::from_json);
  m.def("verify_class",
        [](const std::string& name, int bound) {
          auto cls = make_class(name);
          ClassPropertyReport r = verify_class_properties(
              *cls, bound > 0 ? bound : cls->default_verify_bound());
          py::dict out;
          out["amalgamation"] = r.amalgamation;
          out["joint_embedding"] = r.joint_embedding;
          out["spans_checked"] = r.spans_checked;
          out["pairs_checked"] = r.pairs_checked;
          return out;
        },
        py::arg("name"), py::arg("bound") = 0);
  m.def("build_limit", [](const std::string& name, int steps, unsigned seed) {
    return build_limit(*make_class(name), steps, seed);
  });
  m.def("check_limit_extension",
        [](const LimitChain& chain, int depth, int size) {
          auto cls = make_class(chain.class_name);
          ExtensionReport r = check_limit_extension(*cls, chain, depth, size);
          py::dict out;
          out["ok"] = r.ok;
          out["tasks_checked"] = r.tasks_checked;
          out["failure_count"] = r.failure_count;
          return out;
        });
  m.def("back_and_forth",
        [](const LimitChain& l1, const LimitChain& l2, int k) {
          auto cls = make_class(l1.class_name);
          BackAndForthResult r = back_and_forth(*cls, l1, l2, k);
          py::dict out;
          out["ok"] = r.ok;
          out["pairs"] = r.pairs;
          out["failure"] = r.failure;
          return out;
        });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
