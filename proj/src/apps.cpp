#include "patminer/apps.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <sstream>

#include "patminer/errors.hpp"
#include "patminer/plan.hpp"

namespace patminer {

std::string format_log(const std::vector<OptimizationDecision>& log) {
  std::ostringstream os;
  for (const auto& d : log)
    os << d.id << ' ' << d.name << ": " << (d.applied ? "applied" : "skipped") << " (" << d.reason << ")\n";
  return os.str();
}

const OptimizationDecision* find_decision(const std::vector<OptimizationDecision>& log, char id) {
  for (const auto& d : log)
    if (d.id == id) return &d;
  return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string join_names(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

// Everything chosen before execution.
struct JobSetup {
  std::vector<OptimizationDecision> log;
  std::vector<PatternAnalysis> analyses;
  std::vector<SearchPlan> plans;
  std::unique_ptr<Graph> oriented;  // set when orientation applies
  Granularity granularity = Granularity::edge;
  bool reduce = false;
  bool fused = false;
  bool lgs = false;
  bool hub_partition = false;
  PlanForest forest;                 // fused forest when fused
  std::vector<PlanForest> separate;  // one per pattern otherwise
};

void decide(JobSetup& s, const Graph& g, const std::vector<Pattern>& patterns, const JobOptions& opts) {
  auto& log = s.log;
  const GraphStats stats = graph_stats(g);
  for (const auto& p : patterns) s.analyses.push_back(analyze_pattern(p, stats));
  const bool enumerating = opts.mode == Mode::list || static_cast<bool>(opts.filter);

  // A
  std::string nonclique;
  for (const auto& a : s.analyses)
    if (!a.properties.is_clique) {
      nonclique = a.pattern.name().empty() ? motif_name(a.pattern) : a.pattern.name();
      break;
    }
  const bool orient_ok = opts.orientation && nonclique.empty();
  log.push_back({'A', "orientation", orient_ok,
                 !opts.orientation ? "disabled"
                 : orient_ok       ? "all patterns are cliques"
                                   : nonclique + " is not a clique"});
  if (orient_ok) s.oriented = std::make_unique<Graph>(orient(g));
  const Graph& host = s.oriented ? *s.oriented : g;

  s.granularity = opts.granularity.value_or(Granularity::edge);

  // D
  std::vector<std::string> rewritten;
  for (std::size_t i = 0; i < s.analyses.size(); ++i) {
    PlanOptions po;
    po.mode = enumerating ? Mode::list : Mode::count;
    po.granularity = s.granularity;
    po.oriented = orient_ok;
    po.pattern_id = static_cast<int>(i);
    SearchPlan plan = build_plan(s.analyses[i], po);
    if (plan.name.empty()) plan.name = motif_name(s.analyses[i].pattern);
    if (!enumerating && opts.counting_rewrite && s.analyses[i].properties.decomposition) {
      plan = apply_counting_rewrite(plan, s.analyses[i].properties);
      rewritten.push_back(plan.name);
    }
    s.plans.push_back(std::move(plan));
  }
  {
    std::string why;
    if (opts.mode == Mode::list) why = "list mode enumerates every match";
    else if (opts.filter) why = "a subgraph filter needs every match";
    else if (!opts.counting_rewrite) why = "disabled";
    else if (rewritten.empty()) why = "no pattern decomposes";
    else why = "binomial tail for " + join_names(rewritten);
    log.push_back({'D', "counting-only pruning", !rewritten.empty(), why});
  }

  // B
  const std::size_t n = opts.schedule.devices;
  {
    std::string why;
    if (!opts.schedule.hub_partition) why = "not requested";
    else if (s.plans.size() != 1) why = "needs a single pattern";
    else if (!s.plans[0].hub_rooted()) why = s.plans[0].name + " is not hub-rooted";
    else if (n < 2) why = "single device";
    else {
      s.hub_partition = true;
      why = std::to_string(n) + " neighborhood-closed vertex partitions";
    }
    log.push_back({'B', "hub partitioning", s.hub_partition, why});
  }

  log.push_back({'C', "two-level parallelism", true,
                 "tasks over " + std::to_string(std::max<std::size_t>(1, opts.exec.threads)) +
                     " threads, set operations within each task"});

  // E/F
  {
    std::string why;
    if (s.plans.size() != 1) {
      why = "needs a single pattern";
    } else if (s.hub_partition) {
      why = "hub partitions run plain search";
    } else if (opts.exec.lgs == LgsMode::off) {
      why = "disabled";
    } else if (!s.plans[0].hub_rooted()) {
      why = s.plans[0].name + " is not hub-rooted";
    } else if (opts.exec.lgs == LgsMode::on) {
      s.lgs = true;
      why = "forced on";
    } else if (resolve_lgs(opts.exec, host, s.plans[0])) {
      s.lgs = true;
      why = "hub pattern and max degree " + std::to_string(host.max_degree()) + " < " +
            std::to_string(opts.exec.lgs_delta_threshold);
    } else {
      why = "max degree " + std::to_string(host.max_degree()) + " >= " + std::to_string(opts.exec.lgs_delta_threshold);
    }
    log.push_back({'E', "local graph search", s.lgs, why});
    log.push_back({'F', "bitmap local graph", s.lgs, s.lgs ? "bitmap rows over the anchor set" : "sorted lists"});
  }

  // G
  log.push_back({'G', "multi-device scheduling", n > 1,
                 n > 1 ? std::to_string(n) + " devices, " +
                             (s.hub_partition ? std::string("vertex ownership") : to_string(opts.schedule.policy))
                       : "single device"});

  // I
  if (s.plans.size() > 1 && opts.fusion) {
    s.forest = fuse_multi_pattern(s.plans);
    for (const auto& t : s.forest.trees) s.fused = s.fused || t.patterns.size() > 1;
    log.push_back({'I', "multi-pattern fusion", s.fused,
                   std::to_string(s.plans.size()) + " patterns in " + std::to_string(s.forest.trees.size()) +
                       (s.forest.trees.size() == 1 ? " tree" : " trees")});
  } else {
    log.push_back({'I', "multi-pattern fusion", false, s.plans.size() > 1 ? "disabled" : "single pattern"});
  }
  if (!(s.plans.size() > 1 && opts.fusion)) {
    if (s.plans.size() == 1) {
      s.forest = single_plan_forest(s.plans[0]);
    } else {
      for (const auto& p : s.plans) s.separate.push_back(single_plan_forest(p));
    }
  }

  // J
  {
    bool bounded = false;
    for (const auto& p : s.plans) bounded = bounded || p.level2_bounded();
    std::string why;
    if (s.granularity != Granularity::edge) why = "vertex tasks";
    else if (orient_ok) why = "oriented graph already halves the edges";
    else if (s.hub_partition) why = "partitions use their own edge lists";
    else if (!opts.edge_reduction) why = "disabled";
    else if (!bounded) why = "no plan requires v1 > v2";
    else {
      s.reduce = true;
      why = "v1 > v2 in the symmetry order";
    }
    log.push_back({'J', "edgelist reduction", s.reduce, why});
  }

  // K
  {
    const int x = s.separate.empty() ? s.forest.num_buffers() : 0;
    int xs = x;
    for (const auto& f : s.separate) xs = std::max(xs, f.num_buffers());
    std::string why;
    if (s.lgs) why = "local graph search keeps no buffers";
    else if (xs == 0) why = "no reusable intermediate set";
    else {
      why = std::to_string(xs) + " buffer(s) of " + std::to_string(host.max_degree()) + " ids per worker";
      if (opts.exec.memory_budget) why += ", workers sized from a " + std::to_string(*opts.exec.memory_budget) + "-byte budget";
    }
    log.push_back({'K', "adaptive buffering", !s.lgs && xs > 0, why});
  }
  log.push_back({'M', "bounded BFS", false, "explicit patterns use depth-first search"});
  log.push_back({'N', "label-frequency pruning", false, "FSM only"});
  std::stable_sort(log.begin(), log.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

}  // namespace

JobResult mine(const Graph& g, const std::vector<Pattern>& patterns, const JobOptions& opts) {
  if (patterns.empty()) throw UsageError("no patterns to mine");
  if (g.oriented()) throw UsageError("mining expects the undirected input graph");
  if (opts.schedule.devices == 0) throw UsageError("device count must be at least 1");
  const auto t0 = Clock::now();
  JobSetup s;
  decide(s, g, patterns, opts);
  const Graph& host = s.oriented ? *s.oriented : g;
  const std::size_t np = patterns.size();

  JobResult out;
  out.log = s.log;
  out.lgs = s.lgs;
  out.plan_text = s.separate.empty() ? emit_source(s.forest) : std::string{};
  for (const auto& f : s.separate) out.plan_text += emit_source(f);

  // Filtered matches are counted here; the engine's own counters would
  // include the rejected ones.
  std::unique_ptr<std::atomic<std::uint64_t>[]> kept(new std::atomic<std::uint64_t>[np]);
  for (std::size_t i = 0; i < np; ++i) kept[i] = 0;
  MatchSink sink;
  if (opts.filter) {
    sink = [&](int p, std::span<const VertexId> m) {
      if (!opts.filter(p, m)) return true;
      kept[p].fetch_add(1, std::memory_order_relaxed);
      return opts.sink ? opts.sink(p, m) : true;
    };
  } else if (opts.mode == Mode::list) {
    sink = opts.sink;
  }

  std::mutex stats_mu;
  auto note = [&](const RunResult& r) {
    std::lock_guard lock(stats_mu);
    out.workers = std::max(out.workers, r.workers);
    out.num_buffers = std::max(out.num_buffers, r.num_buffers);
    out.buffer_high_water = std::max(out.buffer_high_water, r.buffer_high_water);
  };

  auto runner = [&](const TaskSet& tasks) {
    RunResult r;
    if (s.lgs) {
      r = run_dfs_lgs(host, s.plans[0], tasks, opts.exec, sink);
    } else if (s.separate.empty()) {
      r = run_dfs(host, s.forest, tasks, opts.exec, sink);
    } else {
      r.counts.assign(np, 0);
      for (std::size_t i = 0; i < np && !r.stopped; ++i) {
        MatchSink remap;
        if (sink) remap = [&, i](int, std::span<const VertexId> m) { return sink(static_cast<int>(i), m); };
        const RunResult part = run_dfs(host, s.separate[i], tasks, opts.exec, remap);
        r.counts[i] = part.counts.at(0);
        r.stopped = part.stopped;
        r.tasks += part.tasks;
        r.elapsed_ms += part.elapsed_ms;
        note(part);
      }
    }
    note(r);
    return r;
  };

  std::vector<std::uint64_t> counts;
  const std::size_t n = opts.schedule.devices;
  if (s.hub_partition) {
    DeviceRun dr = run_hub_partitioned(host, s.plans[0], n, opts.exec, opts.schedule.device_mode, sink);
    counts = dr.counts;
    out.stopped = dr.stopped;
    out.devices = std::move(dr);
  } else {
    TaskSet tasks = s.granularity == Granularity::edge ? TaskSet::from_edges(build_edge_tasks(host, s.reduce))
                                                       : TaskSet::all_vertices(host);
    if (n > 1) {
      const int x = s.lgs ? 0 : s.forest.num_buffers();
      const std::size_t y = effective_workers(opts.exec, x, host.max_degree(), std::max<std::size_t>(1, tasks.size()));
      const Schedule sched = make_schedule(opts.schedule.policy, tasks.size(), n, y, opts.schedule.alpha);
      DeviceRun dr = run_on_devices(tasks, sched, runner, opts.schedule.device_mode);
      counts = dr.counts;
      out.stopped = dr.stopped;
      out.devices = std::move(dr);
    } else {
      const RunResult r = runner(tasks);
      counts = r.counts;
      out.stopped = r.stopped;
    }
  }
  counts.resize(np, 0);
  for (std::size_t i = 0; i < np; ++i) {
    PatternCount pc;
    pc.name = s.plans[i].name;
    pc.pattern = patterns[i];
    pc.count = opts.filter ? kept[i].load() : counts[i];
    out.results.push_back(std::move(pc));
  }
  out.elapsed_ms = ms_since(t0);
  return out;
}

std::uint64_t triangle_count(const Graph& g, const JobOptions& opts) { return k_clique(g, 3, opts).count(); }

JobResult k_clique(const Graph& g, int k, const JobOptions& opts) {
  if (k < 3 || k > kMaxPatternSize) throw UsageError("clique size must be between 3 and 8");
  return mine(g, {generate_clique(k)}, opts);
}

JobResult subgraph_listing(const Graph& g, const Pattern& p, const JobOptions& opts) {
  Pattern q = p.with_mode(InducedMode::edge);
  if (q.name().empty()) q.set_name(motif_name(q));
  return mine(g, {q}, opts);
}

JobResult k_motif(const Graph& g, int k, const JobOptions& opts) {
  if (k < 3 || k > 5) throw UsageError("motif size must be 3, 4 or 5");
  JobOptions o = opts;
  if (k == 3 && !o.granularity) o.granularity = Granularity::vertex;
  return mine(g, generate_all_motifs(k), o);
}

FsmJobResult k_fsm(const Graph& g, int max_edges, std::uint64_t min_support, const JobOptions& opts,
                   PatternFilter filter, SupportFn support) {
  const auto t0 = Clock::now();
  FsmConfig fc;
  fc.max_edges = max_edges;
  fc.min_support = min_support;
  fc.label_pruning = opts.label_pruning && !support;
  fc.support = std::move(support);
  fc.filter = std::move(filter);
  FsmJobResult out;
  out.fsm = run_bounded_bfs(g, fc, opts.exec);
  auto& log = out.log;
  log.push_back({'C', "two-level parallelism", true,
                 "embeddings over " + std::to_string(std::max<std::size_t>(1, opts.exec.threads)) + " threads"});
  log.push_back({'M', "bounded BFS", true,
                 "implicit patterns, blocks of " + std::to_string(opts.exec.bfs_block_size) + " embeddings"});
  std::string why;
  if (!opts.label_pruning) why = "disabled";
  else if (!fc.label_pruning) why = "custom support function";
  else why = std::to_string(out.fsm.pruned_vertices) + " vertices with infrequent labels dropped";
  log.push_back({'N', "label-frequency pruning", fc.label_pruning, why});
  out.elapsed_ms = ms_since(t0);
  return out;
}

}  // namespace patminer
