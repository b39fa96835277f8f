#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "patminer/apps.hpp"
#include "patminer/errors.hpp"
#include "patminer/graph.hpp"
#include "patminer/synthetic.hpp"

using namespace patminer;

namespace {

struct RunSpec {
  std::string graph;
  std::string labels;
  std::string pattern;
  int k = 0;
  std::string mode = "count";
  std::size_t devices = 1;
  std::string policy = "chunked";
  std::size_t alpha = 2;
  std::size_t workers = 0;
  std::size_t threads = 1;
  std::size_t memory_budget = 0;
  std::string lgs = "auto";
  std::size_t lgs_threshold = 1024;
  bool vertex_parallel = false;
  bool edge_parallel = false;
  std::uint64_t min_support = 1;
  std::string induced = "edge";
  std::string load_report;
  bool no_rewrite = false, no_orient = false, no_fusion = false, no_reduce = false, no_label_pruning = false;
  bool isolated = false;
  bool hub_partition = false;
  bool dump_plan = false;
  bool quiet = false;
  std::size_t block_size = std::size_t{1} << 20;
};

struct GenSpec {
  std::string kind = "er";
  std::size_t n = 0;
  double p = 0.1;
  double avg_degree = 8;
  double exponent = 2.1;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t label_count = 0;
  std::string label_out;
};

std::size_t default_threads() {
  if (const char* env = std::getenv("PATMINER_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void add_run_options(CLI::App* cmd, RunSpec& s, const std::string& app) {
  cmd->add_option("--graph,-g", s.graph, "Edgelist or binary CSR file")->required();
  cmd->add_option("--labels", s.labels, "Vertex label file, one label per line");
  if (app == "sl") {
    cmd->add_option("--pattern,-p", s.pattern, "Pattern edgelist")->required();
    cmd->add_option("--induced", s.induced, "edge or vertex")->check(CLI::IsMember({"edge", "vertex"}));
  }
  if (app == "cl") cmd->add_option("--k,-k", s.k, "Clique size")->required()->check(CLI::Range(3, 8));
  if (app == "mc") cmd->add_option("--k,-k", s.k, "Motif size")->required()->check(CLI::Range(3, 5));
  if (app == "fsm") {
    cmd->add_option("--k,-k,--max-edges", s.k, "Maximum pattern edges")->required()->check(CLI::Range(1, 7));
    cmd->add_option("--min-support", s.min_support, "Minimum domain support");
    cmd->add_flag("--no-label-pruning", s.no_label_pruning, "Keep vertices with infrequent labels");
    cmd->add_option("--block-size", s.block_size, "Embeddings per BFS block")->check(CLI::PositiveNumber);
  }
  if (app != "fsm") {
    cmd->add_option("--mode", s.mode, "count or list")->check(CLI::IsMember({"count", "list"}));
    cmd->add_option("--devices,-n", s.devices, "Simulated devices")->check(CLI::PositiveNumber);
    cmd->add_option("--policy", s.policy, "even, rr or chunked")
        ->check(CLI::IsMember({"even", "rr", "chunked", "even_split", "round_robin", "chunked_rr"}));
    cmd->add_option("--alpha", s.alpha, "Chunk multiplier")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", s.workers, "Logical workers (0: one per thread)");
    cmd->add_option("--memory-budget", s.memory_budget, "Scratch budget in bytes; sizes the worker count");
    cmd->add_option("--lgs", s.lgs, "auto, on or off")->check(CLI::IsMember({"auto", "on", "off"}));
    cmd->add_option("--lgs-threshold", s.lgs_threshold, "Max degree below which auto enables LGS");
    auto* vp = cmd->add_flag("--vertex-parallel", s.vertex_parallel, "One task per vertex");
    auto* ep = cmd->add_flag("--edge-parallel", s.edge_parallel, "One task per edge");
    vp->excludes(ep);
    cmd->add_option("--load-report", s.load_report, "Write the per-device CSV to this file");
    cmd->add_flag("--no-rewrite", s.no_rewrite, "Disable counting-only pruning");
    cmd->add_flag("--no-orient", s.no_orient, "Disable orientation for cliques");
    cmd->add_flag("--no-fusion", s.no_fusion, "Run every pattern separately");
    cmd->add_flag("--no-reduce", s.no_reduce, "Keep both directions of every edge task");
    cmd->add_flag("--isolated-devices", s.isolated, "Run simulated devices one after another");
    cmd->add_flag("--hub-partition", s.hub_partition, "Give each device a neighborhood-closed partition");
    cmd->add_flag("--dump-plan", s.dump_plan, "Print the generated search plan to stderr");
  }
  cmd->add_option("--threads,-t", s.threads, "OS threads (default $PATMINER_THREADS or all cores)");
  cmd->add_flag("--quiet,-q", s.quiet, "Only print results");
}

JobOptions job_options(const RunSpec& s) {
  JobOptions o;
  o.mode = s.mode == "list" ? Mode::list : Mode::count;
  o.exec.threads = s.threads;
  o.exec.workers = s.workers;
  if (s.memory_budget) o.exec.memory_budget = s.memory_budget;
  o.exec.lgs = s.lgs == "on" ? LgsMode::on : s.lgs == "off" ? LgsMode::off : LgsMode::automatic;
  o.exec.lgs_delta_threshold = s.lgs_threshold;
  o.exec.bfs_block_size = s.block_size;
  o.exec.serialize_sink = true;
  o.schedule.devices = s.devices;
  o.schedule.policy = parse_policy(s.policy);
  o.schedule.alpha = s.alpha;
  o.schedule.device_mode = s.isolated ? DeviceMode::sequential : DeviceMode::concurrent;
  o.schedule.hub_partition = s.hub_partition;
  if (s.vertex_parallel) o.granularity = Granularity::vertex;
  if (s.edge_parallel) o.granularity = Granularity::edge;
  o.counting_rewrite = !s.no_rewrite;
  o.orientation = !s.no_orient;
  o.fusion = !s.no_fusion;
  o.edge_reduction = !s.no_reduce;
  o.label_pruning = !s.no_label_pruning;
  return o;
}

Graph load(const RunSpec& s) {
  std::optional<std::filesystem::path> lp;
  if (!s.labels.empty()) lp = s.labels;
  return load_graph(s.graph, lp);
}

std::string describe(const FrequentPattern& fp) {
  std::ostringstream os;
  os << "labels=";
  for (std::size_t i = 0; i < fp.form.labels.size(); ++i) os << (i ? "," : "") << fp.form.labels[i];
  os << " edges=";
  bool first = true;
  for (auto [a, b] : fp.pattern.edges()) {
    os << (first ? "" : ",") << a << '-' << b;
    first = false;
  }
  return os.str();
}

int run_job(const std::string& app, const RunSpec& s) {
  const Graph g = load(s);
  JobOptions opts = job_options(s);

  if (app == "fsm") {
    const auto r = k_fsm(g, s.k, s.min_support, opts);
    for (const auto& fp : r.fsm.patterns) std::cout << describe(fp) << '\t' << fp.support << '\n';
    if (!s.quiet) {
      std::cerr << r.fsm.patterns.size() << " frequent patterns\n";
      std::cerr << "elapsed_ms: " << r.elapsed_ms << '\n' << format_log(r.log);
    }
    return 0;
  }

  std::mutex out_mu;
  if (opts.mode == Mode::list) {
    opts.sink = [&](int, std::span<const VertexId> m) {
      std::string line;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) line += ' ';
        line += std::to_string(m[i]);
      }
      line += '\n';
      std::lock_guard lock(out_mu);
      std::cout << line;
      return true;
    };
  }

  JobResult r;
  if (app == "tc") {
    r = k_clique(g, 3, opts);
  } else if (app == "cl") {
    r = k_clique(g, s.k, opts);
  } else if (app == "sl") {
    const InducedMode mode = s.induced == "vertex" ? InducedMode::vertex : InducedMode::edge;
    const Pattern p = parse_pattern(s.pattern, mode);
    r = mine(g, {p}, opts);
  } else {
    r = k_motif(g, s.k, opts);
  }

  if (opts.mode == Mode::count)
    for (const auto& pc : r.results) std::cout << pc.name << '\t' << pc.count << '\n';
  std::cout.flush();
  if (s.dump_plan) std::cerr << r.plan_text;
  if (!s.quiet) {
    for (const auto& pc : r.results) std::cerr << pc.name << ": " << pc.count << '\n';
    std::cerr << "elapsed_ms: " << r.elapsed_ms << '\n' << format_log(r.log);
  }
  if (r.devices) {
    if (!s.load_report.empty()) {
      std::ofstream f(s.load_report);
      if (!f) throw IoError("cannot write load report: " + s.load_report);
      write_load_report(f, *r.devices);
    } else {
      write_load_report(std::cerr, *r.devices);
    }
  }
  return 0;
}

int run_gen(const GenSpec& s) {
  Graph g;
  if (s.kind == "er") {
    g = generate_erdos_renyi(s.n, s.p, s.seed);
  } else {
    g = generate_power_law(s.n, s.avg_degree, s.seed, s.exponent);
  }
  write_edgelist(g, s.out);
  if (s.label_count) {
    if (s.label_out.empty()) throw UsageError("--label-count needs --label-out");
    std::ofstream f(s.label_out);
    if (!f) throw IoError("cannot write label file: " + s.label_out);
    for (Label l : random_labels(s.n, s.label_count, s.seed + 1)) f << l << '\n';
  }
  std::cerr << "wrote " << g.num_vertices() << " vertices, " << g.num_undirected_edges() << " edges, max degree "
            << g.max_degree() << " to " << s.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph pattern mining: triangle counting, clique listing, subgraph listing, motifs and FSM"};
  app.require_subcommand(1);
  RunSpec spec;
  spec.threads = default_threads();
  GenSpec gen;

  const std::pair<const char*, const char*> apps[] = {
      {"tc", "Triangle counting"},         {"cl", "k-clique counting or listing"},
      {"sl", "Subgraph listing for a pattern file"}, {"mc", "k-motif counting"},
      {"fsm", "Frequent subgraph mining"}};
  for (auto [name, desc] : apps) add_run_options(app.add_subcommand(name, desc), spec, name);

  auto* g = app.add_subcommand("gen", "Write a synthetic graph");
  g->add_option("--kind", gen.kind, "er or powerlaw")->check(CLI::IsMember({"er", "powerlaw"}));
  g->add_option("--n", gen.n, "Vertex count")->required();
  g->add_option("--p", gen.p, "Edge probability (er)")->check(CLI::Range(0.0, 1.0));
  g->add_option("--avg-degree", gen.avg_degree, "Mean degree (powerlaw)")->check(CLI::NonNegativeNumber);
  g->add_option("--exponent", gen.exponent, "Degree exponent (powerlaw), > 2");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("--out,-o", gen.out, "Output edgelist")->required();
  g->add_option("--label-count", gen.label_count, "Also write this many random labels");
  g->add_option("--label-out", gen.label_out, "Label output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (g->parsed()) return run_gen(gen);
    for (auto* sub : app.get_subcommands())
      if (sub->parsed()) return run_job(sub->get_name(), spec);
  } catch (const UsageError& e) {
    std::cerr << "patminer: " << e.what() << '\n';
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "patminer: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "patminer: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "patminer: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
