#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "entrocone/cone.hpp"
#include "entrocone/dist.hpp"
#include "entrocone/expr.hpp"
#include "entrocone/model.hpp"
#include "entrocone/pipeline.hpp"
#include "entrocone/polyhedron.hpp"
#include "entrocone/scenarios.hpp"
#include "entrocone/verify.hpp"

namespace py = pybind11;
using namespace entrocone;

namespace {

py::object big_int(const Int& value) {
  return py::module_::import("builtins").attr("int")(py::str(value.get_str()));
}

CausalStructure structure_arg(const py::object& obj) {
  const std::string text = py::cast<std::string>(obj);
  if (auto scenario = named_scenario(text)) return *scenario;
  if (text.find('\n') == std::string::npos)
    throw std::runtime_error("unknown scenario '" + text +
                             "' (pass structure text for custom structures)");
  return parse_structure(text);
}

LinearExpression expr_arg(const std::string& text) {
  if (auto named = named_inequality(text)) return named->expr;
  return parse_inequality(text);
}

JointDistribution dist_arg(const py::object& obj) {
  if (py::isinstance<py::str>(obj))
    return dist_from_json(py::cast<std::string>(obj));
  const py::object dumps = py::module_::import("json").attr("dumps");
  return dist_from_json(py::cast<std::string>(dumps(obj)));
}

ConstraintSystem cone_of(const py::object& obj, bool marginal_only) {
  const CausalStructure structure = structure_arg(obj);
  const ValidationReport report = validate(structure);
  if (!report.ok()) throw std::runtime_error(report.summary());
  if (marginal_only) return marginal_cone(structure);
  return assemble(structure);
}

py::list row_texts(const ConstraintSystem& system) {
  py::list out;
  for (const auto& row : system.rows)
    out.append(row_to_text(row, system.index));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "entropy cones of classical-quantum causal structures";

  m.def("scenario_names", [] { return named_scenario_help(); },
        "registered scenario name patterns");
  m.def("inequality_names", [] { return named_inequality_help(); },
        "registered inequality name patterns");

  m.def(
      "emit",
      [](const py::object& structure) {
        return emit_structure(structure_arg(structure));
      },
      py::arg("structure"), "structure file text for a scenario");

  m.def(
      "validate",
      [](const py::object& structure) {
        const ValidationReport report = validate(structure_arg(structure));
        return py::make_tuple(report.ok(), report.summary());
      },
      py::arg("structure"), "(ok, summary) for a structure");

  m.def(
      "coexisting_sets",
      [](const py::object& structure) {
        const CausalStructure s = structure_arg(structure);
        py::list out;
        for (Mask set : coexisting_sets(s)) {
          py::list names;
          for (int i = 0; i < s.n(); ++i)
            if (set >> i & 1) names.append(s.systems[i].name);
          out.append(names);
        }
        return out;
      },
      py::arg("structure"), "maximal sets of jointly existing systems");

  m.def(
      "cone_rows",
      [](const py::object& structure, bool marginal_only) {
        return row_texts(cone_of(structure, marginal_only));
      },
      py::arg("structure"), py::arg("marginal_only") = false,
      "constraint rows of the structure's entropy cone");

  m.def(
      "extreme_rays",
      [](const py::object& structure, bool marginal_only) {
        const ConstraintSystem system = cone_of(structure, marginal_only);
        const ConeVRep vrep = extreme_rays(system);
        py::list coords;
        for (int id = 0; id < vrep.index.size(); ++id)
          coords.append(vrep.index.label(vrep.index.subset(id)));
        auto pack = [](const std::vector<Ray>& rays) {
          py::list out;
          for (const auto& ray : rays) {
            py::list v;
            for (const auto& c : ray.coords) v.append(big_int(c));
            out.append(v);
          }
          return out;
        };
        py::dict out;
        out["coordinates"] = coords;
        out["rays"] = pack(vrep.rays);
        out["lineality"] = pack(vrep.lineality);
        return out;
      },
      py::arg("structure"), py::arg("marginal_only") = false,
      "extreme rays and lineality space of the structure's entropy cone");

  m.def(
      "check",
      [](const py::object& structure, const std::string& inequality) {
        const ConstraintSystem system = cone_of(structure, false);
        const LinearExpression expr = expr_arg(inequality);
        py::dict out;
        out["inequality"] = expr.text();
        for (const auto& candidate : to_candidates(expr, system.index)) {
          const Certificate cert = is_valid(system, candidate);
          if (cert.valid()) continue;
          out["verdict"] = "not implied";
          py::dict witness;
          for (int id = 0; id < system.index.size(); ++id)
            witness[py::str(system.index.label(system.index.subset(id)))] =
                cert.witness[id].get_str();
          out["witness"] = witness;
          return out;
        }
        out["verdict"] = "valid";
        return out;
      },
      py::arg("structure"), py::arg("inequality"),
      "prove an inequality over the cone or produce a violating ray");

  m.def(
      "entropies",
      [](const py::object& dist) {
        const JointDistribution d = dist_arg(dist);
        const EntropyVector v = entropy_vector_full(d);
        py::dict out;
        for (int id = 0; id < v.index.size(); ++id)
          out[py::str(v.index.label(v.index.subset(id)))] = v.h[id];
        return out;
      },
      py::arg("dist"), "joint entropies of every nonempty variable subset");

  m.def(
      "eval_slack",
      [](const py::object& dist, const std::string& inequality) {
        return evaluate(expr_arg(inequality),
                        entropy_vector_full(dist_arg(dist)));
      },
      py::arg("dist"), py::arg("inequality"),
      "signed slack of an inequality on a distribution (<= 0 means satisfied)");

  m.def(
      "witness_distribution",
      [](int k) { return dist_to_json(witness_distribution(k)); },
      py::arg("k"), "JSON text of the k-th extreme-ray witness, k in 1..4");

  m.def(
      "scan",
      [](const std::string& inequality, const std::string& step) {
        const std::vector<ScanPoint> points =
            scan_boundary(expr_arg(inequality), parse_rational(step));
        py::list out;
        for (const auto& point : points) {
          py::object gamma = point.gamma ? py::cast(*point.gamma) : py::none();
          out.append(py::make_tuple(point.eps.get_str(), gamma));
        }
        return out;
      },
      py::arg("inequality"), py::arg("step"),
      "violation boundary of the two-receiver coding protocol over mixed "
      "boxes: (eps, minimal gamma or None) per grid point");

  m.def(
      "monogamy_check",
      [](int m) {
        const MonogamyCheck check = network_monogamy_check(m);
        return py::make_tuple(check.lhs.get_str(), check.rhs.get_str(),
                              check.violated);
      },
      py::arg("m"),
      "(claimed sum, implied bound, violated) for the m-fold sharing claim");
}
