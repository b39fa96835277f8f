#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <limits>
#include <memory>
#include <mutex>

#include "parallel.hpp"
#include "patminer/errors.hpp"
#include "patminer/executor.hpp"

namespace patminer {

namespace {

constexpr VertexId kNoBound = std::numeric_limits<VertexId>::max();

// Searches the levels after the anchor inside a bitmap local graph. Local
// ids preserve original order, so symmetry bounds translate to prefixes.
class LgsWorker {
 public:
  LgsWorker(const Graph& g, const SearchPlan& plan, WorkerContext& ctx, const MatchSink* sink,
            std::mutex* sink_mu, std::atomic<bool>& stop)
      : g_(g), plan_(plan), ctx_(ctx), sink_(sink), sink_mu_(sink_mu), stop_(stop), k_(plan.size()) {
    // A second hub at level 2 lets the anchor shrink to N(v1) & N(v2).
    two_hubs_ = plan.granularity == Granularity::edge && k_ > 2;
    for (int l = 2; l < k_; ++l)
      if (!((plan.levels[l].expr.intersect >> 1) & 1u)) two_hubs_ = false;
    global_levels_ = two_hubs_ ? 2 : 1;
    bind_.assign(kMaxPatternSize, 0);
    local_.assign(kMaxPatternSize, 0);
    match_.assign(kMaxPatternSize, 0);
    level_bits_.resize(kMaxPatternSize);
  }

  void run_edge(VertexId a, VertexId b, bool reduced) {
    edge(a, b);
    if (reduced && !plan_.level2_bounded()) edge(b, a);
  }

  void run_vertex(VertexId v) {
    if (!label_ok(0, v)) return;
    bind_[0] = v;
    lg_.assign(g_, g_.neighbors(v));
    search(1);
  }

  std::size_t max_universe() const { return max_universe_; }

 private:
  bool label_ok(int l, VertexId x) const {
    const auto& e = plan_.levels[l].expr;
    return !e.label || g_.label(x) == *e.label;
  }

  VertexId upper(int l) const {
    VertexId u = kNoBound;
    for (std::uint32_t m = plan_.levels[l].upper_mask(); m; m &= m - 1) u = std::min(u, bind_[std::countr_zero(m)]);
    return u;
  }

  void edge(VertexId a, VertexId b) {
    if (!label_ok(0, a) || !label_ok(1, b)) return;
    bind_[0] = a;
    bind_[1] = b;
    if (!(b < upper(1))) return;
    if (two_hubs_) {
      intersect_into(g_.neighbors(a), g_.neighbors(b), anchor_);
      lg_.assign(g_, anchor_);
    } else {
      lg_.assign(g_, g_.neighbors(a));
      local_[1] = static_cast<std::uint32_t>(lg_.local_bound(b));
    }
    max_universe_ = std::max(max_universe_, lg_.size());
    if (k_ == 2) {
      terminal_single(1);
      return;
    }
    search(2);
  }

  void terminal_single(int l) {
    if (plan_.levels[l].action.kind == ActionKind::emit_match)
      emit(l);
    else
      ++ctx_.counters[0];
  }

  // Candidate bitmap for level l into level_bits_[l].
  bool build_bits(int l) {
    const auto& lv = plan_.levels[l];
    const std::size_t w = lg_.words();
    auto& bits = level_bits_[l];
    bits.assign(w, ~std::uint64_t{0});
    mask_below(bits, lg_.size());
    for (std::uint32_t m = lv.expr.intersect; m; m &= m - 1) {
      const int j = std::countr_zero(m);
      if (j < global_levels_) continue;  // every universe vertex is adjacent
      const auto row = lg_.row(local_[j]);
      for (std::size_t i = 0; i < w; ++i) bits[i] &= row[i];
    }
    for (std::uint32_t m = lv.expr.subtract; m; m &= m - 1) {
      const int j = std::countr_zero(m);
      if (j < global_levels_) return false;
      const auto row = lg_.row(local_[j]);
      for (std::size_t i = 0; i < w; ++i) bits[i] &= ~row[i];
    }
    for (std::uint32_t m = lv.exclude; m; m &= m - 1) {
      const int j = std::countr_zero(m);
      if (j < global_levels_) continue;  // global vertices are not in the universe
      bits[local_[j] / 64] &= ~(std::uint64_t{1} << (local_[j] % 64));
    }
    const VertexId u = upper(l);
    if (u != kNoBound) mask_below(bits, lg_.local_bound(u));
    return true;
  }

  void search(int l) {
    if (stop_.load(std::memory_order_relaxed)) return;
    const auto& lv = plan_.levels[l];
    if (!build_bits(l)) return;
    const auto& bits = level_bits_[l];
    const bool counting = lv.action.kind == ActionKind::emit_count || lv.action.kind == ActionKind::binomial_count;
    if (counting) {
      std::uint64_t n = 0;
      if (!lv.expr.label) {
        for (auto word : bits) n += std::popcount(word);
      } else {
        for (std::size_t w = 0; w < bits.size(); ++w)
          for (std::uint64_t word = bits[w]; word; word &= word - 1)
            if (label_ok(l, lg_.original(w * 64 + std::countr_zero(word)))) ++n;
      }
      ctx_.counters[0] += lv.action.kind == ActionKind::binomial_count ? binomial(n, lv.action.tail) : n;
      return;
    }
    for (std::size_t w = 0; w < bits.size(); ++w) {
      for (std::uint64_t word = bits[w]; word; word &= word - 1) {
        if (stop_.load(std::memory_order_relaxed)) return;
        const std::size_t i = w * 64 + std::countr_zero(word);
        const VertexId x = lg_.original(i);
        if (!label_ok(l, x)) continue;
        bind_[l] = x;
        local_[l] = static_cast<std::uint32_t>(i);
        if (lv.action.kind == ActionKind::emit_match)
          emit(l);
        else
          search(l + 1);
      }
    }
  }

  void emit(int depth) {
    for (int l = 0; l <= depth; ++l) match_[plan_.order[l]] = bind_[l];
    ++ctx_.counters[0];
    if (!sink_ || !*sink_) return;
    bool go;
    if (sink_mu_) {
      std::lock_guard lock(*sink_mu_);
      go = (*sink_)(0, std::span<const VertexId>(match_.data(), depth + 1));
    } else {
      go = (*sink_)(0, std::span<const VertexId>(match_.data(), depth + 1));
    }
    if (!go) stop_.store(true);
  }

  const Graph& g_;
  const SearchPlan& plan_;
  WorkerContext& ctx_;
  const MatchSink* sink_;
  std::mutex* sink_mu_;
  std::atomic<bool>& stop_;
  int k_;
  bool two_hubs_ = false;
  int global_levels_ = 1;
  LocalGraph lg_;
  std::vector<VertexId> anchor_;
  std::vector<VertexId> bind_;
  std::vector<std::uint32_t> local_;
  std::vector<VertexId> match_;
  std::vector<std::vector<std::uint64_t>> level_bits_;
  std::size_t max_universe_ = 0;
};

}  // namespace

RunResult run_dfs_lgs(const Graph& g, const SearchPlan& plan, const TaskSet& tasks, const ExecutionConfig& cfg,
                      const MatchSink& sink) {
  if (!plan.hub_rooted()) throw UsageError("local graph search needs a hub-rooted plan");
  if (plan.oriented != g.oriented())
    throw UsageError(plan.oriented ? "plan expects an oriented graph" : "plan expects an undirected graph");
  if (tasks.granularity != plan.granularity) throw UsageError("task granularity does not match the plan");
  for (const auto& lv : plan.levels)
    if (lv.expr.label && !g.labeled()) throw UsageError("labeled pattern on an unlabeled graph");

  const auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  r.lgs = true;
  r.num_buffers = 0;
  r.workers = effective_workers(cfg, 0, g.max_degree(), tasks.size());
  r.threads = std::max<std::size_t>(1, std::min(cfg.threads, r.workers));
  std::vector<WorkerContext> ctx(r.workers);
  for (auto& c : ctx) c.counters.assign(1, 0);
  std::atomic<bool> stop{false};
  std::mutex sink_mu;
  const MatchSink* sinkp = sink ? &sink : nullptr;
  std::vector<std::unique_ptr<LgsWorker>> workers;
  for (auto& c : ctx)
    workers.push_back(std::make_unique<LgsWorker>(g, plan, c, sinkp, cfg.serialize_sink ? &sink_mu : nullptr, stop));

  detail::for_each_task(tasks.size(), r.workers, r.threads, stop, [&](std::size_t w, std::size_t i) {
    ++ctx[w].tasks;
    if (tasks.granularity == Granularity::edge)
      workers[w]->run_edge(tasks.edges[i].first, tasks.edges[i].second, tasks.reduced);
    else
      workers[w]->run_vertex(tasks.vertices[i]);
  });
  r.counts = merge_results(ctx);
  r.counts.resize(1, 0);
  for (std::size_t w = 0; w < ctx.size(); ++w) {
    r.tasks += ctx[w].tasks;
    r.buffer_high_water = std::max(r.buffer_high_water, workers[w]->max_universe());
  }
  r.stopped = stop.load();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace patminer
