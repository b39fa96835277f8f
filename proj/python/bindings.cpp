#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <mutex>

#include "patminer/apps.hpp"
#include "patminer/errors.hpp"
#include "patminer/oracle.hpp"
#include "patminer/synthetic.hpp"

namespace py = pybind11;
using namespace patminer;

namespace {

JobOptions job_options(std::size_t threads, std::size_t devices, const std::string& policy) {
  JobOptions o;
  o.exec.threads = threads == 0 ? 1 : threads;
  o.schedule.devices = devices;
  o.schedule.policy = parse_policy(policy);
  return o;
}

py::dict counts_of(const JobResult& r) {
  py::dict d;
  for (const auto& pc : r.results) d[py::str(pc.name)] = pc.count;
  return d;
}

py::list log_of(const std::vector<OptimizationDecision>& log) {
  py::list out;
  for (const auto& d : log) {
    py::dict row;
    row["id"] = std::string(1, d.id);
    row["name"] = d.name;
    row["applied"] = d.applied;
    row["reason"] = d.reason;
    out.append(row);
  }
  return out;
}

InducedMode parse_mode(const std::string& s) {
  if (s == "edge") return InducedMode::edge;
  if (s == "vertex") return InducedMode::vertex;
  throw UsageError("induced mode must be 'edge' or 'vertex', got '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_patminer, m) {
  m.doc() = "Pattern-aware graph mining";

  auto base = py::register_exception<Error>(m, "PatminerError", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<Graph>(m, "Graph")
      .def_static(
          "from_edges",
          [](std::size_t n, const std::vector<Edge>& edges, std::vector<Label> labels) {
            return Graph::from_edges(n, edges, std::move(labels));
          },
          py::arg("num_vertices"), py::arg("edges"), py::arg("labels") = std::vector<Label>{})
      .def_static(
          "load",
          [](const std::filesystem::path& path, std::optional<std::filesystem::path> labels) {
            return load_graph(path, labels);
          },
          py::arg("path"), py::arg("labels") = py::none())
      .def("save", [](const Graph& g, const std::filesystem::path& path) { write_edgelist(g, path); })
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_undirected_edges)
      .def_property_readonly("max_degree", &Graph::max_degree)
      .def_property_readonly("labeled", &Graph::labeled)
      .def("degree", &Graph::degree)
      .def("neighbors",
           [](const Graph& g, VertexId v) {
             if (v >= g.num_vertices()) throw py::index_error("vertex out of range");
             auto s = g.neighbors(v);
             return std::vector<VertexId>(s.begin(), s.end());
           })
      .def("has_edge", &Graph::adjacent)
      .def("label", &Graph::label)
      .def("__repr__", [](const Graph& g) {
        return "<Graph |V|=" + std::to_string(g.num_vertices()) +
               " |E|=" + std::to_string(g.num_undirected_edges()) + ">";
      });

  m.def("erdos_renyi", &generate_erdos_renyi, py::arg("n"), py::arg("p"), py::arg("seed") = 1);
  m.def("power_law", &generate_power_law, py::arg("n"), py::arg("avg_degree"), py::arg("seed") = 1,
        py::arg("exponent") = 2.1);
  m.def("complete_graph", &complete_graph);
  m.def("random_labels", &random_labels, py::arg("n"), py::arg("num_labels"), py::arg("seed") = 1);
  m.def("with_labels", &with_labels);

  py::class_<Pattern>(m, "Pattern")
      .def(py::init([](int size, const std::vector<std::pair<int, int>>& edges, const std::string& induced,
                       std::vector<Label> labels, std::string name) {
             return Pattern(size, edges, parse_mode(induced), std::move(labels), std::move(name));
           }),
           py::arg("size"), py::arg("edges"), py::arg("induced") = "edge",
           py::arg("labels") = std::vector<Label>{}, py::arg("name") = "")
      .def_static("parse", [](const std::string& text) { return parse_pattern_text(text); })
      .def_property_readonly("size", &Pattern::size)
      .def_property_readonly("num_edges", &Pattern::num_edges)
      .def_property_readonly("name", &Pattern::name)
      .def_property_readonly("edges", &Pattern::edges)
      .def_property_readonly("induced",
                             [](const Pattern& p) {
                               return p.induced_mode() == InducedMode::vertex ? "vertex" : "edge";
                             })
      .def("with_induced", [](const Pattern& p, const std::string& s) { return p.with_mode(parse_mode(s)); })
      .def("__eq__", [](const Pattern& a, const Pattern& b) { return a == b; })
      .def("__repr__", [](const Pattern& p) {
        return "<Pattern " + (p.name().empty() ? std::string("?") : p.name()) + " k=" +
               std::to_string(p.size()) + ">";
      });

  m.def("clique", &generate_clique);
  m.def("cycle", &generate_cycle);
  m.def("path", &generate_path);
  m.def("star", &generate_star);
  m.def("diamond", &generate_diamond);
  m.def("tailed_triangle", &generate_tailed_triangle);
  m.def("motifs", &generate_all_motifs);
  m.def("isomorphic", &isomorphic);

  m.def(
      "triangle_count",
      [](const Graph& g, std::size_t threads) {
        py::gil_scoped_release nogil;
        return triangle_count(g, job_options(threads, 1, "chunked"));
      },
      py::arg("graph"), py::arg("threads") = 1);

  m.def(
      "k_clique",
      [](const Graph& g, int k, std::size_t threads, std::size_t devices, const std::string& policy) {
        const JobOptions o = job_options(threads, devices, policy);
        py::gil_scoped_release nogil;
        return k_clique(g, k, o).count();
      },
      py::arg("graph"), py::arg("k"), py::arg("threads") = 1, py::arg("devices") = 1,
      py::arg("policy") = "chunked");

  m.def(
      "subgraph_count",
      [](const Graph& g, const Pattern& p, std::size_t threads, std::size_t devices, const std::string& policy) {
        const JobOptions o = job_options(threads, devices, policy);
        py::gil_scoped_release nogil;
        return subgraph_listing(g, p, o).count();
      },
      py::arg("graph"), py::arg("pattern"), py::arg("threads") = 1, py::arg("devices") = 1,
      py::arg("policy") = "chunked");

  m.def(
      "subgraph_list",
      [](const Graph& g, const Pattern& p, std::size_t limit) {
        JobOptions o;
        o.mode = Mode::list;
        o.exec.serialize_sink = true;
        std::vector<std::vector<VertexId>> out;
        o.sink = [&](int, std::span<const VertexId> match) {
          out.emplace_back(match.begin(), match.end());
          return limit == 0 || out.size() < limit;
        };
        {
          py::gil_scoped_release nogil;
          subgraph_listing(g, p, o);
        }
        return out;
      },
      py::arg("graph"), py::arg("pattern"), py::arg("limit") = 0);

  m.def(
      "k_motif",
      [](const Graph& g, int k, std::size_t threads) {
        const JobOptions o = job_options(threads, 1, "chunked");
        JobResult r;
        {
          py::gil_scoped_release nogil;
          r = k_motif(g, k, o);
        }
        return counts_of(r);
      },
      py::arg("graph"), py::arg("k"), py::arg("threads") = 1);

  m.def(
      "mine",
      [](const Graph& g, const std::vector<Pattern>& patterns, std::size_t threads, std::size_t devices,
         const std::string& policy, bool counting_rewrite, bool fusion) {
        JobOptions o = job_options(threads, devices, policy);
        o.counting_rewrite = counting_rewrite;
        o.fusion = fusion;
        JobResult r;
        {
          py::gil_scoped_release nogil;
          r = mine(g, patterns, o);
        }
        py::dict out;
        py::list counts;
        for (const auto& pc : r.results) counts.append(pc.count);
        out["counts"] = counts;
        out["log"] = log_of(r.log);
        out["elapsed_ms"] = r.elapsed_ms;
        return out;
      },
      py::arg("graph"), py::arg("patterns"), py::arg("threads") = 1, py::arg("devices") = 1,
      py::arg("policy") = "chunked", py::arg("counting_rewrite") = true, py::arg("fusion") = true);

  m.def(
      "k_fsm",
      [](const Graph& g, int max_edges, std::uint64_t min_support, bool label_pruning) {
        JobOptions o;
        o.label_pruning = label_pruning;
        FsmJobResult r;
        {
          py::gil_scoped_release nogil;
          r = k_fsm(g, max_edges, min_support, o);
        }
        py::list out;
        for (const auto& fp : r.fsm.patterns) {
          py::dict row;
          row["labels"] = std::vector<Label>(fp.pattern.labels().begin(), fp.pattern.labels().end());
          row["edges"] = fp.pattern.edges();
          row["support"] = fp.support;
          out.append(row);
        }
        return out;
      },
      py::arg("graph"), py::arg("max_edges"), py::arg("min_support"), py::arg("label_pruning") = true);

  m.def(
      "brute_force_count",
      [](const Graph& g, const Pattern& p) {
        py::gil_scoped_release nogil;
        return oracle::brute_force_count(g, p);
      },
      py::arg("graph"), py::arg("pattern"));
}
