#pragma once

#include <algorithm>
#include <vector>

#include "patminer/apps.hpp"
#include "patminer/executor.hpp"
#include "patminer/graph.hpp"
#include "patminer/oracle.hpp"
#include "patminer/pattern.hpp"
#include "patminer/plan.hpp"
#include "patminer/synthetic.hpp"

namespace testutil {

using namespace patminer;

inline Graph graph_of(std::size_t n, std::vector<Edge> edges, std::vector<Label> labels = {}) {
  return Graph::from_edges(n, edges, std::move(labels));
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return graph_of(n, e);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return graph_of(n, e);
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return graph_of(a + b, e);
}

// Plan-level count of one pattern with a chosen analysis, no app gating.
inline std::uint64_t plan_count(const Graph& g, const Pattern& p, Granularity gran = Granularity::edge,
                                bool rewrite = false, bool reduce = false) {
  const auto a = analyze_pattern(p, graph_stats(g));
  PlanOptions po;
  po.granularity = gran;
  SearchPlan plan = build_plan(a, po);
  if (rewrite) plan = apply_counting_rewrite(plan, a.properties);
  const TaskSet tasks = gran == Granularity::edge ? TaskSet::from_edges(build_edge_tasks(g, reduce && plan.level2_bounded()))
                                                  : TaskSet::all_vertices(g);
  return run_dfs(g, plan, tasks).counts.at(0);
}

inline std::vector<oracle::MatchKey> listed_keys(const Graph& g, const Pattern& p, JobOptions opts = {}) {
  std::vector<oracle::MatchKey> keys;
  opts.mode = Mode::list;
  opts.exec.serialize_sink = true;
  opts.sink = [&](int, std::span<const VertexId> m) {
    keys.push_back(oracle::match_key(p, m));
    return true;
  };
  mine(g, {p}, opts);
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace testutil
