#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>
#include <variant>

#include "surgery/cli.hpp"
#include "surgery/error.hpp"
#include "surgery/inference.hpp"
#include "surgery/model_file.hpp"
#include "surgery/random_models.hpp"

namespace py = pybind11;
using namespace surgery;

namespace {

struct NotIdentifiableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using VarList = std::vector<std::pair<std::string, std::size_t>>;

VarSpace to_space(const VarList& vars) {
  std::vector<Var> out;
  for (const auto& [name, card] : vars) out.push_back({name, card});
  return VarSpace(std::move(out));
}

VarList from_space(const VarSpace& s) {
  VarList out;
  for (const auto& v : s.vars()) out.emplace_back(v.name, v.card);
  return out;
}

py::dict grouping_dict(const Grouping& g) {
  py::dict d;
  d["context"] = g.context;
  d["A"] = g.a;
  d["B"] = g.b;
  d["C"] = g.c;
  return d;
}

py::dict factorisation_dict(const SurgeryFactorisation& f) {
  py::dict d;
  d["target"] = f.target;
  d["f1"] = f.f1;
  d["g"] = f.g;
  d["f2"] = f.f2;
  d["grouping"] = grouping_dict(f.grouping);
  return d;
}

FactorizeResult factorize_file(const ModelFile& f, const std::string& target) {
  return factorize_single(network_diagram(build_dag(f)), target);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interventional distributions from observational data via comb disintegration";

  static PyObject* surgery_error = PyErr_NewException("causal_surgery.SurgeryError", PyExc_RuntimeError, nullptr);
  static PyObject* parse_error = PyErr_NewException("causal_surgery.ParseError", PyExc_ValueError, nullptr);
  m.attr("SurgeryError") = py::handle(surgery_error);
  m.attr("ParseError") = py::handle(parse_error);
  py::register_exception<NotIdentifiableError>(m, "NotIdentifiableError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(surgery_error)(py::str(e.what()));
      inst.attr("kind") = py::str(std::string(to_string(e.kind())));
      PyErr_SetObject(surgery_error, inst.ptr());
    } catch (const ParseError& e) {
      PyErr_SetString(parse_error, e.what());
    }
  });

  py::class_<JointState>(m, "JointState")
      .def(py::init([](const VarList& vars, std::vector<double> probs) {
             return JointState(to_space(vars), std::move(probs));
           }),
           py::arg("variables"), py::arg("probs"))
      .def_property_readonly("variables", [](const JointState& s) { return from_space(s.vars()); })
      .def_property_readonly("names", [](const JointState& s) { return s.vars().names(); })
      .def_property_readonly("values", &JointState::values)
      .def("marginal", [](const JointState& s, const std::vector<std::string>& keep) {
        return permute_state(marginalize(s, keep), keep);
      })
      .def("permute", &permute_state, py::arg("order"))
      .def("__len__", &JointState::size)
      .def("__getitem__", [](const JointState& s, std::size_t i) {
        if (i >= s.size()) throw py::index_error();
        return s[i];
      })
      .def("__repr__", [](const JointState& s) {
        std::ostringstream out;
        out << "JointState(" << s.vars().names().size() << " variables, " << s.size() << " entries)";
        return out.str();
      });

  m.def(
      "disintegrate",
      [](const JointState& omega, std::size_t a_vars) {
        Disintegration d = disintegrate(omega, a_vars);
        return py::make_tuple(d.prior, Eigen::MatrixXd(d.channel.entries()));
      },
      py::arg("state"), py::arg("a_vars"),
      "Prior on the first a_vars variables and the channel to the rest (columns indexed by A).");

  m.def(
      "comb_disintegrate",
      [](const JointState& omega, std::size_t a_vars, std::size_t b_vars) {
        CombDisintegration cd = comb_disintegrate(omega, a_vars, b_vars);
        py::dict d;
        d["f"] = Eigen::MatrixXd(cd.comb.map().entries());
        d["g"] = Eigen::MatrixXd(cd.channel.entries());
        d["comb_defect"] = comb_defect(cd.comb.map(), cd.comb.a().dim());
        return d;
      },
      py::arg("state"), py::arg("a_vars"), py::arg("b_vars"),
      "2-comb f: B -> A (x) C and channel g: A -> B.");

  m.def(
      "cut_plug",
      [](const JointState& omega, std::size_t a_vars, std::size_t b_vars) {
        CombDisintegration cd = comb_disintegrate(omega, a_vars, b_vars);
        return comb_plug_cut(cd.comb, cd.channel);
      },
      py::arg("state"), py::arg("a_vars"), py::arg("b_vars"),
      "Comb-disintegrate, then plug g back with a uniform cut on the A wire.");

  py::class_<ModelFile>(m, "ModelFile")
      .def_static("load", &load_model_file, py::arg("path"))
      .def_static("parse", &parse_model_file, py::arg("text"))
      .def_property_readonly("names",
                             [](const ModelFile& f) {
                               std::vector<std::string> out;
                               for (const auto& v : f.variables) out.push_back(v.name);
                               return out;
                             })
      .def_property_readonly("observed", [](const ModelFile& f) { return observed_space(f).names(); })
      .def("joint", &build_joint, "Observed joint: the file's own or evaluated from its CPTs.")
      .def("is_semi_markovian", [](const ModelFile& f) { return is_semi_markovian(build_dag(f)); })
      .def("confounded_with_child",
           [](const ModelFile& f, const std::string& target) { return confounded_with_child(build_dag(f), target); })
      .def(
          "factorize",
          [](const ModelFile& f, const std::string& target) -> py::dict {
            FactorizeResult r = factorize_file(f, target);
            if (const auto* ni = std::get_if<NotIdentifiable>(&r)) {
              py::dict d;
              d["identifiable"] = false;
              d["target"] = ni->target;
              d["witness"] = ni->witness;
              d["reason"] = ni->reason;
              return d;
            }
            py::dict d = factorisation_dict(std::get<SurgeryFactorisation>(r));
            d["identifiable"] = true;
            return d;
          },
          py::arg("target"))
      .def(
          "intervene",
          [](const ModelFile& f, const std::string& target, const std::string& mode) -> JointState {
            if (mode == "oracle") return intervene_oracle(build_model(f), target);
            if (mode != "observational") throw py::value_error("mode must be 'observational' or 'oracle'");
            FactorizeResult r = factorize_file(f, target);
            if (const auto* ni = std::get_if<NotIdentifiable>(&r)) {
              throw NotIdentifiableError(ni->target + ": " + ni->reason);
            }
            return intervene_from_observational(build_joint(f), std::get<SurgeryFactorisation>(r)).state;
          },
          py::arg("target"), py::arg("mode") = "observational");

  m.def(
      "randcheck",
      [](std::uint64_t seed, std::size_t count, std::size_t max_nodes) {
        RandcheckReport r = randcheck(seed, count, max_nodes);
        py::dict d;
        d["seed"] = r.seed;
        d["models"] = r.models;
        d["targets"] = r.targets;
        d["identifiable"] = r.identifiable;
        d["not_identifiable"] = r.not_identifiable;
        d["criterion_mismatches"] = r.criterion_mismatches;
        d["deviations"] = r.deviations;
        d["max_deviation"] = r.max_deviation;
        d["notes"] = r.notes;
        return d;
      },
      py::arg("seed") = 0, py::arg("count") = 200, py::arg("max_nodes") = 5);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"surgery"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
