#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "amodes/cli.hpp"
#include "amodes/graph.hpp"
#include "amodes/homotopy.hpp"
#include "amodes/optimizer.hpp"

namespace py = pybind11;
using namespace amodes;

namespace {

// Structured results cross the boundary as JSON text; the Python side parses it.
std::string count_json(const std::string& lengths_json, const std::string& topology, std::uint64_t seed) {
  const TopologyId id = parse_topology(topology);
  const MinorSystem& s = counting_system(id);
  const DistanceAssignment lengths = parse_lengths(nlohmann::json::parse(lengths_json), s.graph);
  AssemblyCount c;
  {
    py::gil_scoped_release release;
    c = count_assembly(s, lengths, TrackerConfig{}, seed);
  }
  nlohmann::json j = {{"topology", to_string(id)}, {"N", c.n},         {"ok", c.ok},
                      {"reason", c.reason},         {"scale", c.scale}, {"seed", seed},
                      {"paths", c.solutions.paths.tracked}};
  return j.dump();
}

std::string optimize_json(const std::string& method, int budget, std::uint64_t seed, std::uint64_t solver_seed,
                          const std::string& units) {
  OptimizerConfig cfg;
  cfg.method = parse_method(method);
  cfg.budget = budget;
  cfg.seed = seed;
  cfg.units = parse_units(units);
  cfg.validate();
  OptimizerRun r;
  {
    py::gil_scoped_release release;
    r = run_optimizer(cfg, assembly_objective(TrackerConfig{}, solver_seed, cfg.fixed_value, cfg.units));
  }
  return to_json(r).dump();
}

}  // namespace

PYBIND11_MODULE(_amodes, m) {
  m.doc() = "Assembly-mode counting for planar Laman linkages";
  m.attr("__version__") = kVersion;

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_command(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one amodes command line; returns (exit_code, stdout, stderr).");

  m.def(
      "is_laman",
      [](int n, const std::vector<std::pair<int, int>>& edges) {
        std::vector<Edge> es;
        for (auto [u, v] : edges) es.emplace_back(u, v);
        return is_laman_pebble(LinkageGraph(n, es));
      },
      py::arg("n"), py::arg("edges"));

  m.def("count_json", &count_json, py::arg("lengths_json"), py::arg("topology") = "v17", py::arg("seed") = 1);
  m.def("optimize_json", &optimize_json, py::arg("method") = "ce", py::arg("budget") = 600, py::arg("seed") = 1,
        py::arg("solver_seed") = 1, py::arg("units") = "squared");

  py::register_exception<std::invalid_argument>(m, "InputError", PyExc_ValueError);
}
