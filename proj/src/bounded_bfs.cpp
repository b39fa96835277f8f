#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "parallel.hpp"
#include "patminer/errors.hpp"
#include "patminer/executor.hpp"

namespace patminer {

std::uint64_t minimum_image_support(const Pattern&, const std::vector<std::vector<VertexId>>& domains) {
  if (domains.empty()) return 0;
  std::uint64_t s = domains[0].size();
  for (const auto& d : domains) s = std::min<std::uint64_t>(s, d.size());
  return s;
}

namespace {

constexpr int kMaxFsmEdges = 7;

// One embedding: edges (low, high) in canonical extension order.
struct Row {
  std::array<Edge, kMaxFsmEdges> edges;
  std::uint8_t size = 0;
  std::uint32_t pattern = 0;
};

struct Canon {
  CanonicalForm form;
  std::vector<int> perm;  // canonical position -> quick vertex position
};

Edge norm(VertexId a, VertexId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Greedy edge order: smallest edge first, then repeatedly the smallest edge
// touching the vertices seen so far. Each connected edge set has exactly one
// such order, so generating a child only when the new edge comes last in it
// produces every subgraph once.
bool extension_is_canonical(const Row& parent, Edge e) {
  std::array<Edge, kMaxFsmEdges + 1> s;
  const int n = parent.size + 1;
  std::copy(parent.edges.begin(), parent.edges.begin() + parent.size, s.begin());
  s[parent.size] = e;
  std::array<bool, kMaxFsmEdges + 1> used{};
  std::array<VertexId, 2 * (kMaxFsmEdges + 1)> verts;
  int nv = 0;
  auto seen = [&](VertexId v) { return std::find(verts.begin(), verts.begin() + nv, v) != verts.begin() + nv; };
  Edge last{};
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (step > 0 && !seen(s[i].first) && !seen(s[i].second)) continue;
      if (best < 0 || s[i] < s[best]) best = i;
    }
    used[best] = true;
    last = s[best];
    if (!seen(last.first)) verts[nv++] = last.first;
    if (!seen(last.second)) verts[nv++] = last.second;
  }
  return last == e;
}

class Aggregator {
 public:
  explicit Aggregator(const Graph& g) : g_(g) {}

  // Quick pattern: vertices in first-seen order, their labels and the edge
  // position pairs. Equal quick patterns are isomorphic, so the canonical
  // form is computed once per quick pattern.
  const Canon& canon(const Row& r, std::array<VertexId, kMaxPatternSize>& verts, int& nv) {
    nv = 0;
    std::array<std::pair<int, int>, kMaxFsmEdges> pos;
    auto index = [&](VertexId v) {
      for (int i = 0; i < nv; ++i)
        if (verts[i] == v) return i;
      verts[nv] = v;
      return nv++;
    };
    for (int i = 0; i < r.size; ++i) {
      const int a = index(r.edges[i].first);
      const int b = index(r.edges[i].second);
      pos[i] = {a, b};
    }
    key_.clear();
    key_.push_back(static_cast<char>(nv));
    for (int i = 0; i < nv; ++i) {
      const Label l = g_.label(verts[i]);
      key_.append(reinterpret_cast<const char*>(&l), sizeof l);
    }
    for (int i = 0; i < r.size; ++i) {
      key_.push_back(static_cast<char>(pos[i].first));
      key_.push_back(static_cast<char>(pos[i].second));
    }
    auto it = cache_.find(key_);
    if (it != cache_.end()) return it->second;
    std::vector<Label> labels(nv);
    for (int i = 0; i < nv; ++i) labels[i] = g_.label(verts[i]);
    Pattern p(nv, std::span<const std::pair<int, int>>(pos.data(), r.size), InducedMode::edge, labels);
    auto [form, perm] = canonicalize(p);
    return cache_.emplace(key_, Canon{std::move(form), std::move(perm)}).first->second;
  }

  void add(const Row& r) {
    std::array<VertexId, kMaxPatternSize> verts;
    int nv;
    const Canon& c = canon(r, verts, nv);
    auto& dom = domains_[c.form];
    if (dom.empty()) dom.resize(nv);
    for (int i = 0; i < nv; ++i) dom[i].insert(verts[c.perm[i]]);
    ++embeddings_;
  }

  std::map<CanonicalForm, std::vector<std::unordered_set<VertexId>>>& domains() { return domains_; }
  std::size_t embeddings() const { return embeddings_; }

 private:
  const Graph& g_;
  std::string key_;
  std::unordered_map<std::string, Canon> cache_;
  std::map<CanonicalForm, std::vector<std::unordered_set<VertexId>>> domains_;
  std::size_t embeddings_ = 0;
};

template <typename Fn>
void for_each_child(const Graph& g, const Row& parent, const std::vector<bool>& allowed, Fn&& fn) {
  std::array<VertexId, kMaxPatternSize> verts;
  int nv = 0;
  for (int i = 0; i < parent.size; ++i)
    for (VertexId v : {parent.edges[i].first, parent.edges[i].second})
      if (std::find(verts.begin(), verts.begin() + nv, v) == verts.begin() + nv) verts[nv++] = v;
  std::vector<Edge> cand;
  for (int i = 0; i < nv; ++i) {
    const VertexId x = verts[i];
    for (VertexId y : g.neighbors(x)) {
      if (!allowed[y]) continue;
      const bool new_vertex = std::find(verts.begin(), verts.begin() + nv, y) == verts.begin() + nv;
      if (new_vertex && nv == kMaxPatternSize) continue;
      const Edge e = norm(x, y);
      if (std::find(parent.edges.begin(), parent.edges.begin() + parent.size, e) != parent.edges.begin() + parent.size)
        continue;
      cand.push_back(e);
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (Edge e : cand) {
    if (!extension_is_canonical(parent, e)) continue;
    Row child = parent;
    child.edges[child.size++] = e;
    fn(child);
  }
}

}  // namespace

FsmResult run_bounded_bfs(const Graph& g, const FsmConfig& fsm, const ExecutionConfig& cfg) {
  if (!g.labeled()) throw UsageError("frequent subgraph mining needs a labeled graph");
  if (g.oriented()) throw UsageError("frequent subgraph mining needs an undirected graph");
  if (fsm.max_edges < 1 || fsm.max_edges > kMaxFsmEdges)
    throw UsageError("max_edges must be in [1, " + std::to_string(kMaxFsmEdges) + "]");
  const SupportFn support = fsm.support ? fsm.support : SupportFn(minimum_image_support);
  const std::uint64_t sigma = fsm.min_support;
  const PatternFilter filter =
      fsm.filter ? fsm.filter : PatternFilter([sigma](const Pattern&, std::uint64_t s) { return s >= sigma; });
  const std::size_t block = std::max<std::size_t>(1, cfg.bfs_block_size);
  const std::size_t threads = std::max<std::size_t>(1, cfg.threads);

  FsmResult result;
  std::vector<bool> allowed(g.num_vertices(), true);
  if (fsm.label_pruning) {
    // A vertex whose label is rarer than sigma cannot sit in any frequent
    // pattern: the domain of its pattern vertex is bounded by that frequency.
    const auto stats = label_frequency(g);
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
      if (!stats.is_frequent(g.label(static_cast<VertexId>(v)), sigma)) {
        allowed[v] = false;
        ++result.pruned_vertices;
      }
  }

  // Level 1 seeds: one row per undirected edge.
  std::vector<std::vector<Row>> parents;
  auto seed_rows = [&](auto&& fn) {
    for (std::size_t u = 0; u < g.num_vertices(); ++u) {
      if (!allowed[u]) continue;
      for (VertexId v : g.neighbors(static_cast<VertexId>(u))) {
        if (v <= u || !allowed[v]) continue;
        Row r;
        r.edges[0] = {static_cast<VertexId>(u), v};
        r.size = 1;
        fn(r);
      }
    }
  };

  std::atomic<bool> never{false};
  for (int level = 1; level <= fsm.max_edges; ++level) {
    FsmLevelStats st;
    st.edges = level;
    // Pass 1: aggregate domains of every child pattern.
    std::vector<Aggregator> aggs;
    aggs.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) aggs.emplace_back(g);
    if (level == 1) {
      seed_rows([&](const Row& r) { aggs[0].add(r); });
    } else {
      for (const auto& blk : parents)
        detail::for_each_task(blk.size(), threads, threads, never, [&](std::size_t w, std::size_t i) {
          for_each_child(g, blk[i], allowed, [&](const Row& c) { aggs[w].add(c); });
        });
    }
    std::map<CanonicalForm, std::vector<std::unordered_set<VertexId>>> merged;
    for (auto& a : aggs) {
      st.embeddings += a.embeddings();
      for (auto& [form, dom] : a.domains()) {
        auto& m = merged[form];
        if (m.empty()) {
          m = std::move(dom);
        } else {
          for (std::size_t i = 0; i < dom.size(); ++i) m[i].insert(dom[i].begin(), dom[i].end());
        }
      }
    }
    st.candidate_patterns = merged.size();

    std::map<CanonicalForm, std::uint32_t> frequent;
    for (auto& [form, dom] : merged) {
      Pattern p = pattern_from_form(form);
      // Domains are per canonical position; merge them over orbits so each
      // pattern vertex sees every data vertex any isomorphism maps onto it.
      const int k = p.size();
      std::vector<int> rep(k);
      for (int i = 0; i < k; ++i) rep[i] = i;
      for (const auto& perm : automorphisms(p))
        for (int i = 0; i < k; ++i) rep[i] = std::min(rep[i], perm[i]);
      std::vector<std::vector<VertexId>> domains(k);
      for (int i = 0; i < k; ++i) domains[rep[i]].insert(domains[rep[i]].end(), dom[i].begin(), dom[i].end());
      for (int i = 0; i < k; ++i) {
        if (rep[i] != i) continue;
        std::sort(domains[i].begin(), domains[i].end());
        domains[i].erase(std::unique(domains[i].begin(), domains[i].end()), domains[i].end());
      }
      for (int i = 0; i < k; ++i)
        if (rep[i] != i) domains[i] = domains[rep[i]];
      const std::uint64_t s = support(p, domains);
      if (!filter(p, s)) continue;
      frequent.emplace(form, static_cast<std::uint32_t>(result.patterns.size()));
      result.patterns.push_back(FrequentPattern{std::move(p), form, s});
    }
    st.frequent_patterns = frequent.size();

    // Pass 2: keep the embeddings of frequent patterns for the next level,
    // packed into blocks. The last level is never stored.
    std::vector<std::vector<Row>> next;
    if (level < fsm.max_edges && !frequent.empty()) {
      std::vector<std::vector<Row>> out(threads);
      std::vector<Aggregator> canon;
      canon.reserve(threads);
      for (std::size_t t = 0; t < threads; ++t) canon.emplace_back(g);
      auto keep = [&](std::size_t w, Row r) {
        std::array<VertexId, kMaxPatternSize> verts;
        int nv;
        const Canon& c = canon[w].canon(r, verts, nv);
        auto it = frequent.find(c.form);
        if (it == frequent.end()) return;
        r.pattern = it->second;
        out[w].push_back(r);
      };
      if (level == 1) {
        seed_rows([&](const Row& r) { keep(0, r); });
      } else {
        for (const auto& blk : parents)
          detail::for_each_task(blk.size(), threads, threads, never, [&](std::size_t w, std::size_t i) {
            for_each_child(g, blk[i], allowed, [&](const Row& c) { keep(w, c); });
          });
      }
      for (auto& rows : out)
        for (auto& r : rows) {
          if (next.empty() || next.back().size() >= block) next.emplace_back().reserve(std::min(block, rows.size()));
          next.back().push_back(r);
        }
    }
    st.blocks = next.size();
    for (const auto& b : next) st.max_block_rows = std::max(st.max_block_rows, b.size());
    result.levels.push_back(st);
    parents = std::move(next);
    if (parents.empty()) break;
  }

  std::sort(result.patterns.begin(), result.patterns.end(), [](const FrequentPattern& a, const FrequentPattern& b) {
    const int ea = a.pattern.num_edges(), eb = b.pattern.num_edges();
    return ea != eb ? ea < eb : a.form < b.form;
  });
  return result;
}

}  // namespace patminer
