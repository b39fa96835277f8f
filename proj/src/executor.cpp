#include "patminer/executor.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <limits>
#include <memory>
#include <mutex>

#include "parallel.hpp"
#include "patminer/errors.hpp"

namespace patminer {

const char* to_string(LgsMode m) {
  switch (m) {
    case LgsMode::automatic: return "auto";
    case LgsMode::on: return "on";
    case LgsMode::off: return "off";
  }
  return "?";
}

TaskSet TaskSet::from_edges(EdgeTaskList list) {
  TaskSet t;
  t.granularity = Granularity::edge;
  t.edges = std::move(list.edges);
  t.reduced = list.reduced;
  return t;
}

TaskSet TaskSet::all_vertices(const Graph& g) {
  TaskSet t;
  t.granularity = Granularity::vertex;
  t.vertices.resize(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) t.vertices[v] = static_cast<VertexId>(v);
  return t;
}

TaskSet TaskSet::subset(std::span<const std::size_t> indices) const {
  TaskSet t;
  t.granularity = granularity;
  t.reduced = reduced;
  if (granularity == Granularity::edge) {
    t.edges.reserve(indices.size());
    for (auto i : indices) t.edges.push_back(edges.at(i));
  } else {
    t.vertices.reserve(indices.size());
    for (auto i : indices) t.vertices.push_back(vertices.at(i));
  }
  return t;
}

std::uint64_t binomial(std::uint64_t n, int t) {
  if (t < 0 || n < static_cast<std::uint64_t>(t)) return 0;
  unsigned __int128 r = 1;
  for (int i = 1; i <= t; ++i) {
    r = r * (n - t + i) / i;  // exact: r is C(n-t+i, i) after this step
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

std::size_t effective_workers(const ExecutionConfig& cfg, int num_buffers, VertexId max_degree,
                              std::size_t num_tasks) {
  const std::size_t cap = std::max<std::size_t>(1, num_tasks);
  if (cfg.memory_budget) {
    const std::size_t per_worker = static_cast<std::size_t>(num_buffers) * max_degree * kVertexIdWidth;
    if (per_worker == 0) return cap;
    if (*cfg.memory_budget < per_worker)
      throw ResourceError("memory budget of " + std::to_string(*cfg.memory_budget) +
                          " bytes cannot hold one worker's scratch (" + std::to_string(per_worker) + " bytes)");
    return std::max<std::size_t>(1, std::min(*cfg.memory_budget / per_worker, num_tasks));
  }
  const std::size_t want = cfg.workers ? cfg.workers : std::max<std::size_t>(1, cfg.threads);
  return std::max<std::size_t>(1, std::min(want, num_tasks));
}

std::vector<std::uint64_t> merge_results(std::span<const WorkerContext> contexts) {
  std::vector<std::uint64_t> out;
  for (const auto& c : contexts) {
    if (out.size() < c.counters.size()) out.resize(c.counters.size(), 0);
    for (std::size_t i = 0; i < c.counters.size(); ++i) out[i] += c.counters[i];
  }
  return out;
}

namespace {

constexpr VertexId kNoBound = std::numeric_limits<VertexId>::max();

struct NodeInfo {
  std::uint32_t rest_inter = 0;  // terms still to check after the source list
  std::uint32_t rest_sub = 0;
  std::uint64_t count_mask = 0;  // patterns counted here without iterating
  std::uint64_t iter_mask = 0;   // patterns that need each candidate
};

std::vector<NodeInfo> prepare(const PlanForest& f) {
  std::vector<NodeInfo> info(f.nodes.size());
  for (std::size_t n = 0; n < f.nodes.size(); ++n) {
    const auto& node = f.nodes[n];
    auto& in = info[n];
    in.rest_inter = node.expr.intersect;
    in.rest_sub = node.expr.subtract;
    if (node.source_slot) {
      for (int a = node.parent; a >= 0; a = f.nodes[a].parent) {
        const auto& anc = f.nodes[a];
        if (anc.buffer_slot == node.source_slot) {
          in.rest_inter &= ~anc.expr.intersect;
          in.rest_sub &= ~anc.expr.subtract;
          break;
        }
      }
    }
    for (const auto& m : node.members) {
      const auto bit = std::uint64_t{1} << m.pattern;
      if (m.action.kind == ActionKind::emit_count || m.action.kind == ActionKind::binomial_count)
        in.count_mask |= bit;
      else
        in.iter_mask |= bit;
    }
  }
  return info;
}

class DfsWorker {
 public:
  DfsWorker(const Graph& g, const PlanForest& f, const std::vector<NodeInfo>& info, WorkerContext& ctx,
            const MatchSink* sink, std::mutex* sink_mu, std::atomic<bool>& stop)
      : g_(g), f_(f), info_(info), ctx_(ctx), sink_(sink), sink_mu_(sink_mu), stop_(stop) {
    bind_.assign(kMaxPatternSize, 0);
    match_.assign(kMaxPatternSize, 0);
  }

  void run_edge(VertexId a, VertexId b, bool reduced) {
    for (const auto& tree : f_.trees) {
      edge_task(tree, a, b);
      if (reduced && !tree.level2_bounded) edge_task(tree, b, a);
    }
  }

  void run_vertex(VertexId v) {
    for (const auto& tree : f_.trees) {
      const auto& root = f_.nodes[tree.root];
      if (!label_ok(root.expr, v)) continue;
      bind_[0] = v;
      after_bind(tree.root, root.pattern_mask, false);
    }
  }

 private:
  bool label_ok(const SetExpr& e, VertexId x) const { return !e.label || g_.label(x) == *e.label; }

  VertexId upper(std::uint32_t mask) const {
    VertexId u = kNoBound;
    for (; mask; mask &= mask - 1) u = std::min(u, bind_[std::countr_zero(mask)]);
    return u;
  }

  bool excluded(std::uint32_t mask, VertexId x) const {
    for (; mask; mask &= mask - 1)
      if (bind_[std::countr_zero(mask)] == x) return true;
    return false;
  }

  bool passes(const ForestMember& m, VertexId x) const {
    return x < upper(m.upper_mask()) && !excluded(m.exclude, x);
  }

  bool in_rest(std::uint32_t inter, std::uint32_t sub, VertexId x) const {
    for (; inter; inter &= inter - 1)
      if (!contains(g_.neighbors(bind_[std::countr_zero(inter)]), x)) return false;
    for (; sub; sub &= sub - 1)
      if (contains(g_.neighbors(bind_[std::countr_zero(sub)]), x)) return false;
    return true;
  }

  void edge_task(const ForestTree& tree, VertexId a, VertexId b) {
    const auto& root = f_.nodes[tree.root];
    if (!label_ok(root.expr, a)) return;
    bind_[0] = a;
    bind_[1] = b;
    for (int c : root.children) {
      const auto& node = f_.nodes[c];
      if (!label_ok(node.expr, b)) continue;
      std::uint64_t alive = 0;
      for (const auto& m : node.members)
        if (passes(m, b)) alive |= std::uint64_t{1} << m.pattern;
      if (alive) after_bind(c, alive, true);
    }
  }

  void after_bind(int n, std::uint64_t alive, bool count_terminals) {
    const auto& node = f_.nodes[n];
    for (const auto& m : node.members) {
      if (!((alive >> m.pattern) & 1u)) continue;
      if (m.action.kind == ActionKind::emit_match)
        emit(m.pattern, node.depth);
      else if (m.action.kind == ActionKind::emit_count && count_terminals)
        ++ctx_.counters[m.pattern];
    }
    for (int c : node.children) {
      if (stop_.load(std::memory_order_relaxed)) return;
      const std::uint64_t sub = alive & f_.nodes[c].pattern_mask;
      if (sub) expand(c, sub);
    }
  }

  void emit(int pattern, int depth) {
    const auto& plan = f_.plans[pattern];
    for (int l = 0; l <= depth; ++l) match_[plan.order[l]] = bind_[l];
    ++ctx_.counters[pattern];
    if (!sink_ || !*sink_) return;
    bool go;
    if (sink_mu_) {
      std::lock_guard lock(*sink_mu_);
      go = (*sink_)(pattern, std::span<const VertexId>(match_.data(), depth + 1));
    } else {
      go = (*sink_)(pattern, std::span<const VertexId>(match_.data(), depth + 1));
    }
    if (!go) stop_.store(true);
  }

  // Candidate list for node n plus the terms it still has to be checked
  // against. Materializes into the node's buffer when it has one.
  VertexList candidates(int n, std::uint32_t& inter, std::uint32_t& sub) {
    const auto& node = f_.nodes[n];
    const auto& in = info_[n];
    inter = in.rest_inter;
    sub = in.rest_sub;
    VertexList base;
    if (node.source_slot) {
      base = ctx_.scratch[*node.source_slot];
    } else {
      int best = -1;
      for (std::uint32_t m = inter; m; m &= m - 1) {
        const int j = std::countr_zero(m);
        if (best < 0 || g_.degree(bind_[j]) < g_.degree(bind_[best])) best = j;
      }
      base = g_.neighbors(bind_[best]);
      inter &= ~(1u << best);
    }
    if (!node.buffer_slot) return base;
    auto& out = ctx_.scratch[*node.buffer_slot];
    bool filled = false;
    for (std::uint32_t m = inter; m; m &= m - 1) {
      const auto nb = g_.neighbors(bind_[std::countr_zero(m)]);
      if (!filled) {
        intersect_into(base, nb, out);
        filled = true;
      } else {
        retain_intersection(out, nb);
      }
    }
    for (std::uint32_t m = sub; m; m &= m - 1) {
      const auto nb = g_.neighbors(bind_[std::countr_zero(m)]);
      if (!filled) {
        difference_into(base, nb, out);
        filled = true;
      } else {
        retain_difference(out, nb);
      }
    }
    if (!filled) out.assign(base.begin(), base.end());
    ctx_.buffer_high_water = std::max(ctx_.buffer_high_water, out.size());
    inter = sub = 0;
    return out;
  }

  std::uint64_t count(const SetExpr& e, VertexList cand, std::uint32_t inter, std::uint32_t sub,
                      const ForestMember& m) const {
    const VertexId u = upper(m.upper_mask());
    const VertexList list = bound_list(cand, u);
    std::uint64_t n = 0;
    if (!e.label && sub == 0 && inter == 0) {
      n = list.size();
    } else if (!e.label && sub == 0 && std::popcount(inter) == 1) {
      n = intersect_count(list, g_.neighbors(bind_[std::countr_zero(inter)]));
    } else if (!e.label && inter == 0 && std::popcount(sub) == 1) {
      n = difference_count(list, g_.neighbors(bind_[std::countr_zero(sub)]));
    } else {
      for (VertexId x : list)
        if (label_ok(e, x) && in_rest(inter, sub, x)) ++n;
    }
    for (std::uint32_t ex = m.exclude; ex; ex &= ex - 1) {
      const VertexId y = bind_[std::countr_zero(ex)];
      if (y < u && label_ok(e, y) && in_rest(e.intersect, e.subtract, y)) --n;
    }
    return n;
  }

  void expand(int n, std::uint64_t want) {
    const auto& node = f_.nodes[n];
    const auto& in = info_[n];
    std::uint32_t inter, sub;
    const VertexList cand = candidates(n, inter, sub);
    const int d = node.depth;

    if (want & in.count_mask) {
      for (const auto& m : node.members) {
        if (!((want & in.count_mask) >> m.pattern & 1u)) continue;
        const std::uint64_t c = count(node.expr, cand, inter, sub, m);
        ctx_.counters[m.pattern] += m.action.kind == ActionKind::binomial_count ? binomial(c, m.action.tail) : c;
      }
    }
    const std::uint64_t iter = want & in.iter_mask;
    if (!iter) return;

    // Iterate up to the loosest bound among the members still interested.
    VertexId loosest = 0;
    for (const auto& m : node.members)
      if ((iter >> m.pattern) & 1u) loosest = std::max(loosest, upper(m.upper_mask()));
    for (VertexId x : bound_list(cand, loosest)) {
      if (stop_.load(std::memory_order_relaxed)) return;
      if (!label_ok(node.expr, x) || !in_rest(inter, sub, x)) continue;
      std::uint64_t alive = 0;
      for (const auto& m : node.members)
        if (((iter >> m.pattern) & 1u) && passes(m, x)) alive |= std::uint64_t{1} << m.pattern;
      if (!alive) continue;
      bind_[d] = x;
      after_bind(n, alive, false);
    }
  }

  const Graph& g_;
  const PlanForest& f_;
  const std::vector<NodeInfo>& info_;
  WorkerContext& ctx_;
  const MatchSink* sink_;
  std::mutex* sink_mu_;
  std::atomic<bool>& stop_;
  std::vector<VertexId> bind_;
  std::vector<VertexId> match_;
};

void check_compatible(const Graph& g, const PlanForest& f, const TaskSet& tasks) {
  if (f.oriented != g.oriented())
    throw UsageError(f.oriented ? "plan expects an oriented graph" : "plan expects an undirected graph");
  if (tasks.granularity != f.granularity) throw UsageError("task granularity does not match the plan");
  for (const auto& p : f.plans)
    for (const auto& lv : p.levels)
      if (lv.expr.label && !g.labeled()) throw UsageError("labeled pattern on an unlabeled graph");
}

}  // namespace

RunResult run_dfs(const Graph& g, const PlanForest& forest, const TaskSet& tasks, const ExecutionConfig& cfg,
                  const MatchSink& sink) {
  check_compatible(g, forest, tasks);
  const auto t0 = std::chrono::steady_clock::now();
  const auto info = prepare(forest);
  const int x = forest.num_buffers();
  RunResult r;
  r.num_buffers = x;
  r.workers = effective_workers(cfg, x, g.max_degree(), tasks.size());
  r.threads = std::max<std::size_t>(1, std::min(cfg.threads, r.workers));

  std::vector<WorkerContext> ctx(r.workers);
  for (auto& c : ctx) {
    c.scratch.resize(x);
    for (auto& s : c.scratch) s.reserve(g.max_degree());
    c.counters.assign(forest.num_patterns(), 0);
  }
  std::atomic<bool> stop{false};
  std::mutex sink_mu;
  const MatchSink* sinkp = sink ? &sink : nullptr;
  std::vector<std::unique_ptr<DfsWorker>> workers;
  workers.reserve(r.workers);
  for (auto& c : ctx)
    workers.push_back(std::make_unique<DfsWorker>(g, forest, info, c, sinkp,
                                                  cfg.serialize_sink ? &sink_mu : nullptr, stop));

  detail::for_each_task(tasks.size(), r.workers, r.threads, stop, [&](std::size_t w, std::size_t i) {
    ++ctx[w].tasks;
    if (tasks.granularity == Granularity::edge)
      workers[w]->run_edge(tasks.edges[i].first, tasks.edges[i].second, tasks.reduced);
    else
      workers[w]->run_vertex(tasks.vertices[i]);
  });

  r.counts = merge_results(ctx);
  r.counts.resize(forest.num_patterns(), 0);
  for (const auto& c : ctx) {
    r.buffer_high_water = std::max(r.buffer_high_water, c.buffer_high_water);
    r.tasks += c.tasks;
  }
  r.stopped = stop.load();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

RunResult run_dfs(const Graph& g, const SearchPlan& plan, const TaskSet& tasks, const ExecutionConfig& cfg,
                  const MatchSink& sink) {
  return run_dfs(g, single_plan_forest(plan), tasks, cfg, sink);
}

bool resolve_lgs(const ExecutionConfig& cfg, const Graph& g, const SearchPlan& plan) {
  switch (cfg.lgs) {
    case LgsMode::off: return false;
    case LgsMode::on: return true;
    case LgsMode::automatic: return plan.hub_rooted() && g.max_degree() < cfg.lgs_delta_threshold;
  }
  return false;
}

namespace {

// Reference level-synchronous executor. Each level's partial matches are
// produced into blocks; a full block is extended before more rows are made,
// so at most one block per level is alive.
class BfsReference {
 public:
  BfsReference(const Graph& g, const SearchPlan& plan, std::size_t block)
      : g_(g), plan_(plan), block_(std::max<std::size_t>(1, block)), k_(plan.size()) {
    blocks_.resize(k_ + 1);
  }

  void seed(VertexId a, std::optional<VertexId> b) {
    auto& blk = blocks_[b ? 2 : 1];
    if (!candidate_ok(0, {}, a)) return;
    std::vector<VertexId> row{a};
    if (b) {
      if (!contains(g_.neighbors(a), *b) || !candidate_ok(1, row, *b)) return;
      row.push_back(*b);
    }
    push(b ? 2 : 1, std::move(row));
    (void)blk;
  }

  std::uint64_t finish() {
    for (int l = 1; l <= k_; ++l) flush(l);
    return total_;
  }

 private:
  bool candidate_ok(int l, const std::vector<VertexId>& row, VertexId x) const {
    const auto& lv = plan_.levels[l];
    if (lv.expr.label && g_.label(x) != *lv.expr.label) return false;
    for (int j = 0; j < l; ++j) {
      if (row[j] == x) return false;
      const bool adj = contains(g_.neighbors(row[j]), x);
      if (((lv.expr.intersect >> j) & 1u) && !adj) return false;
      if (((lv.expr.subtract >> j) & 1u) && adj) return false;
      if (((lv.upper_mask() >> j) & 1u) && !(x < row[j])) return false;
    }
    return true;
  }

  void push(int depth, std::vector<VertexId> row) {
    // depth = number of bound vertices in row
    if (depth == k_) {
      ++total_;
      return;
    }
    blocks_[depth].push_back(std::move(row));
    if (blocks_[depth].size() >= block_) flush(depth);
  }

  void flush(int depth) {
    if (depth >= k_) return;
    std::vector<std::vector<VertexId>> rows;
    rows.swap(blocks_[depth]);
    const int l = depth;  // level to bind next
    const auto& lv = plan_.levels[l];
    for (const auto& row : rows) {
      std::vector<VertexId> cand;
      bool first = true;
      for (int j = 0; j < l; ++j) {
        if (!((lv.expr.intersect >> j) & 1u)) continue;
        if (first) {
          const auto nb = g_.neighbors(row[j]);
          cand.assign(nb.begin(), nb.end());
          first = false;
        } else {
          cand = intersect(cand, g_.neighbors(row[j]));
        }
      }
      if (lv.action.kind == ActionKind::binomial_count) {
        std::uint64_t n = 0;
        for (VertexId x : cand)
          if (candidate_ok(l, row, x)) ++n;
        total_ += binomial(n, lv.action.tail);
        continue;
      }
      for (VertexId x : cand) {
        if (!candidate_ok(l, row, x)) continue;
        auto next = row;
        next.push_back(x);
        push(depth + 1, std::move(next));
      }
    }
  }

  const Graph& g_;
  const SearchPlan& plan_;
  std::size_t block_;
  int k_;
  std::vector<std::vector<std::vector<VertexId>>> blocks_;
  std::uint64_t total_ = 0;
};

}  // namespace

std::uint64_t run_bfs_plan(const Graph& g, const SearchPlan& plan, const TaskSet& tasks, const ExecutionConfig& cfg) {
  if (plan.oriented != g.oriented()) throw UsageError("plan orientation does not match the graph");
  BfsReference bfs(g, plan, cfg.bfs_block_size);
  if (tasks.granularity == Granularity::edge) {
    for (auto [a, b] : tasks.edges) {
      bfs.seed(a, b);
      if (tasks.reduced) bfs.seed(b, a);
    }
  } else {
    for (VertexId v : tasks.vertices) bfs.seed(v, std::nullopt);
  }
  return bfs.finish();
}

}  // namespace patminer
