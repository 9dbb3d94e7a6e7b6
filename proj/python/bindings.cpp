#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "liesym/catalog.hpp"
#include "liesym/cli.hpp"
#include "liesym/io.hpp"
#include "liesym/parse.hpp"

namespace py = pybind11;
using namespace liesym;

namespace {

CatalogParams to_params(const std::map<std::string, std::string>& p) { return CatalogParams(p.begin(), p.end()); }

LieSystemDef ode(const std::string& name, const std::map<std::string, std::string>& params) {
  CatalogEntry e = make_entry(name, to_params(params));
  if (!e.system) throw Error(ErrorKind::BadParams, name + " is a PDE Lie system");
  return *e.system;
}

py::list tensor_list(const StructureTensor& c) {
  py::list out;
  for (const auto& row : tensor_to_json(c)) {
    out.append(py::make_tuple(row[0].get<int>(), row[1].get<int>(), row[2].get<int>(), row[3].get<std::string>()));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_liesym, m) {
  m.doc() = "Symmetry systems of Lie systems";

  static py::exception<Error> exc(m, "LiesymError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, e.what());
    }
  });

  m.def("catalog_names", &catalog_names);

  m.def(
      "structure_constants",
      [](const std::string& name, const std::map<std::string, std::string>& params) {
        CatalogEntry e = make_entry(name, to_params(params));
        return tensor_list(extract_structure_constants(e.basis()));
      },
      py::arg("name"), py::arg("params") = std::map<std::string, std::string>{},
      "Nonzero c(a,b,g) with a < b as 1-based (a, b, g, 'p/q') tuples.");

  m.def(
      "check_algebra",
      [](const std::string& name, const std::map<std::string, std::string>& params) {
        CatalogEntry e = make_entry(name, to_params(params));
        StructureTensor c = extract_structure_constants(e.basis());
        py::dict d;
        d["r"] = c.dim();
        d["jacobi"] = to_string(jacobi_residual(c));
        d["center"] = center(c).size();
        d["matches_expected"] = c == e.expected;
        return d;
      },
      py::arg("name"), py::arg("params") = std::map<std::string, std::string>{});

  m.def(
      "symmetry_system",
      [](const std::string& name, const std::map<std::string, std::string>& params, const std::string& b0) {
        LieSystemDef sys = ode(name, params);
        sys.gauge_b0 = parse_expr(b0);
        std::vector<std::string> out;
        VectorField field = build_symmetry_system(sys).field();
        for (const auto& c : field.components()) out.push_back(c.to_string());
        return out;
      },
      py::arg("name"), py::arg("params") = std::map<std::string, std::string>{}, py::arg("b0") = "0",
      "Right-hand sides df0/dt, ..., dfr/dt.");

  m.def(
      "family_residuals",
      [](const std::string& name, const std::map<std::string, std::string>& params, std::uint64_t seed) {
        CatalogEntry e = make_entry(name, to_params(params));
        if (!e.system) throw Error(ErrorKind::BadParams, name + " is a PDE Lie system");
        ResidualGrid g = make_grid(*e.system, 0.0, 1.0, 20, 20, seed);
        py::dict out;
        for (const auto& f : e.families) {
          ResidualReport r = symmetry_residual(f.candidate, *e.system, g);
          out[py::str(f.name)] = py::make_tuple(r.max_abs, r.exact_zero);
        }
        return out;
      },
      py::arg("name"), py::arg("params") = std::map<std::string, std::string>{}, py::arg("seed") = 42);

  m.def(
      "integrate",
      [](const std::string& name, const std::map<std::string, std::string>& params, std::vector<double> x0, double t0,
         double t1, double step) {
        Trajectory tr = integrate(ode(name, params), std::move(x0), t0, t1, step);
        return py::make_tuple(tr.t, tr.y, tr.err);
      },
      py::arg("name"), py::arg("params"), py::arg("x0"), py::arg("t0"), py::arg("t1"), py::arg("step"));

  m.def(
      "curvature",
      [](const std::string& name, const std::map<std::string, std::string>& params) {
        CatalogEntry e = make_entry(name, to_params(params));
        if (!e.pde) throw Error(ErrorKind::BadParams, name + " is not a PDE Lie system");
        CurvatureReport r = curvature_residual(*e.pde);
        return py::make_tuple(r.max_abs, r.exact_zero);
      },
      py::arg("name"), py::arg("params") = std::map<std::string, std::string>{});

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"liesym"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
