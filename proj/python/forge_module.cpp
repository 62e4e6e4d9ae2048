// Python bindings. Everything crosses the boundary as JSON text; the
// package's __init__ turns it into dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "forge/pipeline.hpp"

namespace py = pybind11;
using namespace forge;

namespace {

std::vector<std::pair<std::string, std::string>> violations(const Report& r) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& v : r) out.emplace_back(v.what, v.where);
  return out;
}

CGraph parse_graph(const std::string& s) { return graph_from_json(json::parse(s)); }

}  // namespace

PYBIND11_MODULE(_forge, m) {
  m.doc() = "C-graph towers and leaf reports";

  // later registrations are tried first, so the subclass goes last
  py::register_exception<Error>(m, "ForgeError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

  m.def("figure_eight", [] { return graph_to_json(figure_eight()).dump(); });
  m.def("basic_piece", [](const std::string& name) { return graph_to_json(basic_piece(piece_from_name(name))).dump(); });
  m.def("validate_graph", [](const std::string& g) { return violations(validate(parse_graph(g))); });
  m.def("betti", [](const std::string& g) { return betti(parse_graph(g)); });
  m.def("graph_hash", [](const std::string& g) { return graph_hash(parse_graph(g)); });
  m.def("emit_dot", [](const std::string& g, const std::string& name) { return emit_dot(parse_graph(g), name); });
  m.def("finite_ends_graph", [](int k, int depth) { return graph_to_json(finite_ends_graph(k, depth)).dump(); });

  m.def("condition_star", [](const std::string& pair) { return condition_star(*pair_from_json(json::parse(pair))); });
  m.def("k1_infinite", [](const std::string& pair) { return k1_infinite(*pair_from_json(json::parse(pair))); });

  m.def(
      "run_pipeline",
      [](const std::string& pair, int depth, int tower_floors, long long max_vertices, int finite_ends,
         const std::string& out) {
        PipelineOptions opt;
        opt.depth = depth;
        opt.tower_floors = tower_floors;
        opt.max_vertices = max_vertices;
        SpecPtr s;
        if (finite_ends > 0) opt.finite_ends = finite_ends;
        else s = pair_from_json(json::parse(pair));
        PipelineResult r;
        {
          py::gil_scoped_release unlocked;
          r = run_pipeline(s, opt);
          if (!out.empty()) write_pipeline(out, r, opt);
        }
        return r.report.dump();
      },
      py::arg("pair") = "", py::arg("depth") = 3, py::arg("tower_floors") = 2, py::arg("max_vertices") = 3'000'000,
      py::arg("finite_ends") = 0, py::arg("out") = "");

  m.def("verify_dir", [](const std::string& dir) { return violations(verify_manifest(dir)); });
}
