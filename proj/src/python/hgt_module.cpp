/* Python bindings: a thin file-oriented facade over the C++ core.  The
   heavy types stay in C++; python sees reports as lists of dicts. */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hgt/cocycle_examples.hpp"
#include "hgt/io.hpp"
#include "hgt/roundtrip.hpp"

namespace py = pybind11;
using namespace hgt;

static py::list report_to_py(const Report& rep) {
  py::list out;
  for (auto& c : rep.conditions) {
    py::dict d;
    d["label"] = c.label;
    d["max_residual"] = c.max_residual;
    d["threshold"] = c.threshold;
    d["pass"] = c.pass;
    out.append(d);
  }
  return out;
}

PYBIND11_MODULE(_hgt, m) {
  m.doc() = "nonabelian differential cocycle toolkit";

  m.def(
      "crossed_modules",
      [] {
        return std::vector<std::string>{"BU1",    "Gdis:U1", "Gdis:SU2",
                                        "AUT:SU2", "ID:SO3",  "ID:SU2"};
      },
      "names of the built-in crossed modules");

  m.def(
      "verify_axioms",
      [](const std::string& cm, int samples, uint64_t seed) {
        return report_to_py(verify_axioms(*crossed_module(cm), samples, seed));
      },
      py::arg("cm"), py::arg("samples") = 50, py::arg("seed") = 1,
      "sampled crossed-module / Lie-2-algebra identity checks");

  m.def(
      "dgla_suite",
      [](const std::string& cm, double h, int samples, int nforms,
         uint64_t seed) {
        return report_to_py(
            dgla_property_suite(crossed_module(cm), h, samples, nforms, seed));
      },
      py::arg("cm"), py::arg("h") = 1e-3, py::arg("samples") = 2,
      py::arg("nforms") = 2, py::arg("seed") = 1,
      "DGLA / adjoint property suite over the built-in groupoid families");

  m.def(
      "validate_cocycle",
      [](const std::string& path, double h, int samples, uint64_t seed) {
        DifferentialCocycle c = cocycle_from_json(load_json_file(path));
        return report_to_py(cc_validate(c, h, samples, seed));
      },
      py::arg("path"), py::arg("h") = 1e-3, py::arg("samples") = 3,
      py::arg("seed") = 1, "check all cocycle conditions of a cocycle file");

  m.def(
      "classify_cocycle",
      [](const std::string& path, double h, int samples, uint64_t seed) {
        DifferentialCocycle c = cocycle_from_json(load_json_file(path));
        CocycleClass cls = cc_curvatures_and_classify(c, h, samples, seed);
        py::dict d;
        d["generalized"] = cls.generalized;
        d["fake_flat"] = cls.fake_flat;
        d["flat"] = cls.flat;
        d["threshold"] = cls.threshold;
        return d;
      },
      py::arg("path"), py::arg("h") = 1e-3, py::arg("samples") = 8,
      py::arg("seed") = 1, "curvature class flags of a cocycle file");

  m.def(
      "roundtrip",
      [](const std::string& path, double h, uint64_t seed) {
        DifferentialCocycle c = cocycle_from_json(load_json_file(path));
        ReconstructedBundle B;
        Connection C = reconstruct_connection(c, h, 1, seed, &B);
        DifferentialCocycle ce = extract_cocycle(B, C.omega, h);
        const Cover& cov = c.cover;
        double w = 0;
        for (int i = 0; i < cov.size(); ++i) {
          ChartPiece pc = chart_piece(cov, i);
          Rng rng(tuple_seed(seed, 37, {i}));
          Point p = random_point(pc, rng, 0.12);
          Tangent v = random_tangent(pc, rng), u = random_tangent(pc, rng);
          w = std::max(w, max_abs(ce.A[i](p, {v}) - c.A[i](p, {v})));
          w = std::max(w, max_abs(ce.B[i](p, {v, u}) - c.B[i](p, {v, u})));
        }
        for (auto& t : ordered_tuples(cov, 2)) {
          ChartPiece pc = overlap_piece(cov, tuple_support(t));
          Rng rng(tuple_seed(seed, 41, t));
          Point p = random_point(pc, rng, 0.12);
          Tangent v = random_tangent(pc, rng);
          w = std::max(w, group_dist(ce.g.at(t)(p), c.g.at(t)(p)));
          w = std::max(w, max_abs(ce.phi.at(t)(p, {v}) - c.phi.at(t)(p, {v})));
        }
        return w;
      },
      py::arg("path"), py::arg("h") = 1e-3, py::arg("seed") = 1,
      "reconstruct then extract; return the max datum discrepancy");

  m.def(
      "chern",
      [](const std::string& path, double grid_step, double h) {
        DifferentialCocycle c = cocycle_from_json(load_json_file(path));
        return chern_number(c, grid_step, h);
      },
      py::arg("path"), py::arg("grid_step") = 0.01, py::arg("h") = 1e-3,
      "U(1) flux of a G_dis cocycle over T^2");

  m.def(
      "normalize_cocycle",
      [](const std::string& path, const std::string& out, double h,
         double grid_step) {
        DifferentialCocycle c = cocycle_from_json(load_json_file(path));
        auto [cn, chain] = cc_normalize(c, h);
        save_json_file(out, cocycle_to_json(cn, grid_step));
        return (int)chain.size();
      },
      py::arg("path"), py::arg("out"), py::arg("h") = 1e-3,
      py::arg("grid_step") = 0.01,
      "normalize a cocycle file; returns the equivalence chain length");

  py::register_exception<Error>(m, "HgtError");
}
