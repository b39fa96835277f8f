#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "patminer/executor.hpp"
#include "patminer/graph.hpp"
#include "patminer/pattern.hpp"
#include "patminer/scheduler.hpp"

namespace patminer {

// One row of the optimization log. Ids follow the usual lettering:
// A orientation, B hub partitioning, C two-level parallelism, D counting-only
// pruning, E/F local graph search with bitmaps, G multi-device scheduling,
// I multi-pattern fusion, J edgelist reduction, K adaptive buffering,
// M bounded BFS, N label-frequency pruning.
struct OptimizationDecision {
  char id = '?';
  std::string name;
  bool applied = false;
  std::string reason;
};

// "A orientation: applied (all patterns are cliques)" per line.
std::string format_log(const std::vector<OptimizationDecision>& log);
const OptimizationDecision* find_decision(const std::vector<OptimizationDecision>& log, char id);

struct ScheduleConfig {
  std::size_t devices = 1;
  Policy policy = Policy::chunked_rr;
  std::size_t alpha = 2;
  DeviceMode device_mode = DeviceMode::concurrent;
  bool hub_partition = false;
};

// Matches rejected by the filter are neither counted nor delivered.
using MatchFilter = std::function<bool(int pattern, std::span<const VertexId> match)>;

struct JobOptions {
  Mode mode = Mode::count;
  ExecutionConfig exec;
  ScheduleConfig schedule;
  std::optional<Granularity> granularity;  // default edge
  bool counting_rewrite = true;
  bool orientation = true;
  bool edge_reduction = true;
  bool fusion = true;
  bool label_pruning = true;
  MatchFilter filter;
  MatchSink sink;  // list mode output; pattern index into the job's list
};

struct PatternCount {
  std::string name;
  Pattern pattern;
  std::uint64_t count = 0;
};

struct JobResult {
  std::vector<PatternCount> results;
  std::vector<OptimizationDecision> log;
  std::optional<DeviceRun> devices;  // set when more than one device ran
  double elapsed_ms = 0;
  bool stopped = false;
  std::size_t workers = 0;
  int num_buffers = 0;
  std::size_t buffer_high_water = 0;
  bool lgs = false;
  std::string plan_text;

  std::uint64_t count(std::size_t i = 0) const { return results.at(i).count; }
};

// Counts or lists every pattern in its own induced mode on an undirected
// graph, choosing optimizations from the patterns, the input and the options.
JobResult mine(const Graph& g, const std::vector<Pattern>& patterns, const JobOptions& opts = {});

std::uint64_t triangle_count(const Graph& g, const JobOptions& opts = {});
// 3 <= k <= 8.
JobResult k_clique(const Graph& g, int k, const JobOptions& opts = {});
// Edge-induced occurrences of p.
JobResult subgraph_listing(const Graph& g, const Pattern& p, const JobOptions& opts = {});
// All connected vertex-induced k-motifs, 3 <= k <= 5. k = 3 runs
// vertex-parallel unless a granularity is given.
JobResult k_motif(const Graph& g, int k, const JobOptions& opts = {});

struct FsmJobResult {
  FsmResult fsm;
  std::vector<OptimizationDecision> log;
  double elapsed_ms = 0;
};

// Frequent edge-induced patterns with at most max_edges edges. Only patterns
// and supports are produced, never embeddings.
FsmJobResult k_fsm(const Graph& g, int max_edges, std::uint64_t min_support, const JobOptions& opts = {},
                   PatternFilter filter = {}, SupportFn support = {});

}  // namespace patminer
