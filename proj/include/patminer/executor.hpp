#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "patminer/graph.hpp"
#include "patminer/pattern.hpp"
#include "patminer/plan.hpp"
#include "patminer/setops.hpp"
#include "patminer/types.hpp"

namespace patminer {

enum class LgsMode { automatic, on, off };
const char* to_string(LgsMode m);

struct ExecutionConfig {
  // Logical workers y. 0 means one per thread. Ignored when memory_budget is
  // set; the budget then decides.
  std::size_t workers = 0;
  std::size_t threads = 1;  // OS threads, at most the worker count
  std::optional<std::size_t> memory_budget;  // bytes Y
  LgsMode lgs = LgsMode::automatic;
  std::size_t lgs_delta_threshold = 1024;
  std::size_t bfs_block_size = std::size_t{1} << 20;
  // Deliver matches to the sink under a mutex instead of concurrently.
  bool serialize_sink = false;
};

inline constexpr std::size_t kVertexIdWidth = sizeof(VertexId);

// Tasks seeding the search: edges bind levels 1-2, vertices bind level 1.
struct TaskSet {
  Granularity granularity = Granularity::edge;
  std::vector<Edge> edges;
  bool reduced = false;
  std::vector<VertexId> vertices;

  std::size_t size() const {
    return granularity == Granularity::edge ? edges.size() : vertices.size();
  }
  static TaskSet from_edges(EdgeTaskList list);
  static TaskSet all_vertices(const Graph& g);
  TaskSet subset(std::span<const std::size_t> indices) const;
};

// Receives the data vertex of each pattern vertex (index = pattern vertex).
// Returning false stops the run.
using MatchSink = std::function<bool(int pattern, std::span<const VertexId> match)>;

struct WorkerContext {
  std::vector<std::vector<VertexId>> scratch;  // X buffers of capacity Δ
  std::vector<std::uint64_t> counters;         // per pattern
  std::size_t buffer_high_water = 0;
  std::size_t tasks = 0;
};

struct RunResult {
  std::vector<std::uint64_t> counts;
  std::size_t workers = 0;
  std::size_t threads = 0;
  int num_buffers = 0;
  std::size_t buffer_high_water = 0;
  std::size_t tasks = 0;
  bool stopped = false;
  bool lgs = false;
  double elapsed_ms = 0;
};

// min(floor(Y / (X * Δ * 4)), |Ω|), at least 1, with a budget; otherwise
// min(workers or threads, |Ω|). Throws ResourceError when the budget cannot
// hold one worker's scratch.
std::size_t effective_workers(const ExecutionConfig& cfg, int num_buffers, VertexId max_degree,
                              std::size_t num_tasks);

// Throws UsageError on orientation or granularity mismatch.
RunResult run_dfs(const Graph& g, const PlanForest& forest, const TaskSet& tasks,
                  const ExecutionConfig& cfg = {}, const MatchSink& sink = {});
RunResult run_dfs(const Graph& g, const SearchPlan& plan, const TaskSet& tasks,
                  const ExecutionConfig& cfg = {}, const MatchSink& sink = {});

// Local graph search; the plan must be hub-rooted (UsageError otherwise).
RunResult run_dfs_lgs(const Graph& g, const SearchPlan& plan, const TaskSet& tasks,
                      const ExecutionConfig& cfg = {}, const MatchSink& sink = {});

// Whether LGS applies: off/on as configured; automatic means the plan is
// hub-rooted and Δ is below the threshold.
bool resolve_lgs(const ExecutionConfig& cfg, const Graph& g, const SearchPlan& plan);

// Level-synchronous execution of one plan, materializing every level in
// blocks of at most cfg.bfs_block_size partial matches. Single-threaded.
std::uint64_t run_bfs_plan(const Graph& g, const SearchPlan& plan, const TaskSet& tasks,
                           const ExecutionConfig& cfg = {});

std::vector<std::uint64_t> merge_results(std::span<const WorkerContext> contexts);

// Bounded-BFS frequent subgraph mining over edge-induced labeled patterns.

// domains[u] holds the distinct data vertices mapped to pattern vertex u,
// already merged over automorphism orbits, sorted ascending.
using SupportFn = std::function<std::uint64_t(const Pattern&, const std::vector<std::vector<VertexId>>& domains)>;
using PatternFilter = std::function<bool(const Pattern&, std::uint64_t support)>;

std::uint64_t minimum_image_support(const Pattern& p, const std::vector<std::vector<VertexId>>& domains);

struct FsmConfig {
  int max_edges = 3;
  std::uint64_t min_support = 1;
  bool label_pruning = true;
  SupportFn support;      // default minimum_image_support
  PatternFilter filter;   // default support >= min_support
};

struct FrequentPattern {
  Pattern pattern;  // vertices numbered canonically
  CanonicalForm form;
  std::uint64_t support = 0;
};

struct FsmLevelStats {
  int edges = 0;
  std::size_t embeddings = 0;
  std::size_t candidate_patterns = 0;
  std::size_t frequent_patterns = 0;
  std::size_t blocks = 0;
  std::size_t max_block_rows = 0;
};

struct FsmResult {
  std::vector<FrequentPattern> patterns;  // sorted by (edges, form)
  std::vector<FsmLevelStats> levels;
  std::size_t pruned_vertices = 0;  // vertices dropped by label frequency
};

// Throws UsageError on an unlabeled graph or max_edges outside [1, 7].
FsmResult run_bounded_bfs(const Graph& g, const FsmConfig& fsm, const ExecutionConfig& cfg = {});

// C(n, t) with 128-bit intermediates; saturates at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, int t);

}  // namespace patminer
