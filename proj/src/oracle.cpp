#include "patminer/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "patminer/errors.hpp"

namespace patminer::oracle {

namespace {

struct Small {
  int k = 0;
  bool adj[kMaxPatternSize][kMaxPatternSize] = {};
  Label label[kMaxPatternSize] = {};
  bool labeled = false;
};

Small small_of(const Pattern& p) {
  Small s;
  s.k = p.size();
  s.labeled = p.labeled();
  for (int i = 0; i < s.k; ++i) {
    s.label[i] = p.labeled() ? p.label(i) : 0;
    for (int j = 0; j < s.k; ++j) s.adj[i][j] = i != j && p.adjacent(i, j);
  }
  return s;
}

void check_work(std::uint64_t& work, std::uint64_t limit) {
  if (++work > limit) throw CapacityError("oracle work limit exceeded; instance too large for brute force");
}

// Each connected k-vertex set exactly once (Wernicke's ESU).
template <typename Visit>
void for_each_connected_set(const Graph& g, int k, std::uint64_t limit, Visit&& visit) {
  std::uint64_t work = 0;
  std::vector<VertexId> sub;
  auto near_sub = [&](VertexId x) {
    for (VertexId s : sub)
      if (s == x || g.adjacent(s, x)) return true;
    return false;
  };
  auto extend = [&](auto& self, std::vector<VertexId> ext, VertexId root) -> void {
    if (static_cast<int>(sub.size()) == k) {
      check_work(work, limit);
      visit(std::span<const VertexId>(sub));
      return;
    }
    while (!ext.empty()) {
      const VertexId w = ext.back();
      ext.pop_back();
      std::vector<VertexId> next = ext;
      for (VertexId u : g.neighbors(w))
        if (u > root && !near_sub(u) && std::find(next.begin(), next.end(), u) == next.end()) next.push_back(u);
      sub.push_back(w);
      self(self, std::move(next), root);
      sub.pop_back();
    }
  };
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    sub.assign(1, v);
    std::vector<VertexId> ext;
    for (VertexId u : g.neighbors(v))
      if (u > v) ext.push_back(u);
    extend(extend, std::move(ext), v);
  }
}

// Calls f(map) for every bijection pattern -> set that maps pattern edges to
// graph edges (and non-edges to non-edges when exact) with matching labels.
template <typename F>
void for_each_embedding(const Graph& g, const Small& p, std::span<const VertexId> set, bool exact, F&& f) {
  VertexId map[kMaxPatternSize];
  bool used[kMaxPatternSize] = {};
  auto rec = [&](auto& self, int i) -> void {
    if (i == p.k) {
      f(std::span<const VertexId>(map, p.k));
      return;
    }
    for (int c = 0; c < p.k; ++c) {
      if (used[c]) continue;
      const VertexId x = set[c];
      if (p.labeled && g.label(x) != p.label[i]) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        const bool e = g.adjacent(map[j], x);
        if (p.adj[i][j] ? !e : (exact && e)) ok = false;
      }
      if (!ok) continue;
      used[c] = true;
      map[i] = x;
      self(self, i + 1);
      used[c] = false;
    }
  };
  rec(rec, 0);
}

MatchKey edge_key(const Small& p, std::span<const VertexId> map) {
  std::vector<std::pair<VertexId, VertexId>> es;
  for (int i = 0; i < p.k; ++i)
    for (int j = i + 1; j < p.k; ++j)
      if (p.adj[i][j]) es.emplace_back(std::min(map[i], map[j]), std::max(map[i], map[j]));
  std::sort(es.begin(), es.end());
  MatchKey key;
  for (auto [a, b] : es) {
    key.push_back(a);
    key.push_back(b);
  }
  return key;
}

int induced_edges(const Graph& g, std::span<const VertexId> set) {
  int e = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) e += g.adjacent(set[i], set[j]);
  return e;
}

void require_undirected(const Graph& g) {
  if (g.oriented()) throw UsageError("oracle expects an undirected graph");
}

}  // namespace

std::uint64_t automorphism_count(const Pattern& p) {
  const Small s = small_of(p);
  std::vector<int> perm(s.k);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t n = 0;
  do {
    bool ok = true;
    for (int i = 0; i < s.k && ok; ++i) {
      if (s.label[i] != s.label[perm[i]]) ok = false;
      for (int j = 0; j < s.k && ok; ++j)
        if (s.adj[i][j] != s.adj[perm[i]][perm[j]]) ok = false;
    }
    n += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n;
}

CanonicalForm canonical_form(const Pattern& p) {
  const Small s = small_of(p);
  std::vector<int> perm(s.k);
  std::iota(perm.begin(), perm.end(), 0);
  CanonicalForm best;
  bool first = true;
  do {
    CanonicalForm f;
    f.size = s.k;
    if (s.labeled)
      for (int i = 0; i < s.k; ++i) f.labels.push_back(s.label[perm[i]]);
    int bit = 0;
    for (int i = 0; i < s.k; ++i)
      for (int j = i + 1; j < s.k; ++j, ++bit)
        if (s.adj[perm[i]][perm[j]]) f.adjacency |= std::uint64_t{1} << bit;
    if (first || f < best) best = f;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

MatchKey match_key(const Pattern& p, std::span<const VertexId> match) {
  if (p.induced_mode() == InducedMode::edge) return edge_key(small_of(p), match);
  MatchKey key(match.begin(), match.end());
  std::sort(key.begin(), key.end());
  return key;
}

std::uint64_t brute_force_count(const Graph& g, const Pattern& p, InducedMode mode, std::uint64_t work_limit) {
  require_undirected(g);
  const Small s = small_of(p);
  const int pe = p.num_edges();
  std::uint64_t total = 0;
  if (mode == InducedMode::vertex) {
    for_each_connected_set(g, s.k, work_limit, [&](std::span<const VertexId> set) {
      if (induced_edges(g, set) != pe) return;
      bool found = false;
      for_each_embedding(g, s, set, true, [&](std::span<const VertexId>) { found = true; });
      total += found;
    });
    return total;
  }
  const std::uint64_t aut = automorphism_count(p);
  for_each_connected_set(g, s.k, work_limit, [&](std::span<const VertexId> set) {
    if (induced_edges(g, set) < pe) return;
    std::uint64_t maps = 0;
    for_each_embedding(g, s, set, false, [&](std::span<const VertexId>) { ++maps; });
    total += maps / aut;
  });
  return total;
}

std::uint64_t brute_force_count(const Graph& g, const Pattern& p, std::uint64_t work_limit) {
  return brute_force_count(g, p, p.induced_mode(), work_limit);
}

std::vector<MatchKey> brute_force_matches(const Graph& g, const Pattern& p, std::uint64_t work_limit) {
  require_undirected(g);
  const Small s = small_of(p);
  const bool exact = p.induced_mode() == InducedMode::vertex;
  std::set<MatchKey> keys;
  for_each_connected_set(g, s.k, work_limit, [&](std::span<const VertexId> set) {
    for_each_embedding(g, s, set, exact, [&](std::span<const VertexId> map) { keys.insert(match_key(p, map)); });
  });
  return {keys.begin(), keys.end()};
}

std::uint64_t ordered_tuple_count(const Graph& g, const Pattern& p, std::uint64_t work_limit) {
  require_undirected(g);
  const Small s = small_of(p);
  const bool exact = p.induced_mode() == InducedMode::vertex;
  // Breadth-first order from pattern vertex 0 so each vertex after the first
  // has an earlier neighbor to extend from.
  std::vector<int> order{0}, anchor{-1};
  std::vector<bool> seen(s.k, false);
  seen[0] = true;
  for (std::size_t h = 0; h < order.size(); ++h)
    for (int j = 0; j < s.k; ++j)
      if (!seen[j] && s.adj[order[h]][j]) {
        seen[j] = true;
        order.push_back(j);
        anchor.push_back(static_cast<int>(h));
      }
  std::uint64_t work = 0, total = 0;
  std::vector<VertexId> bind(s.k);
  auto rec = [&](auto& self, int l) -> void {
    if (l == s.k) {
      ++total;
      return;
    }
    auto try_vertex = [&](VertexId x) {
      check_work(work, work_limit);
      const int u = order[l];
      if (s.labeled && g.label(x) != s.label[u]) return;
      for (int j = 0; j < l; ++j) {
        if (bind[j] == x) return;
        const bool e = g.adjacent(bind[j], x);
        if (s.adj[u][order[j]] ? !e : (exact && e)) return;
      }
      bind[l] = x;
      self(self, l + 1);
    };
    if (l == 0) {
      for (VertexId x = 0; x < g.num_vertices(); ++x) try_vertex(x);
    } else {
      for (VertexId x : g.neighbors(bind[anchor[l]])) try_vertex(x);
    }
  };
  rec(rec, 0);
  return total;
}

std::map<CanonicalForm, std::uint64_t> brute_force_fsm(const Graph& g, int max_edges, std::uint64_t min_support,
                                                       std::uint64_t work_limit) {
  require_undirected(g);
  std::uint64_t work = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    for (VertexId w : g.neighbors(v))
      if (v < w) edges.emplace_back(v, w);

  std::map<CanonicalForm, std::vector<std::set<VertexId>>> domains;
  std::set<std::vector<std::size_t>> level;
  for (std::size_t e = 0; e < edges.size(); ++e) level.insert({e});
  for (int size = 1; size <= max_edges && !level.empty(); ++size) {
    for (const auto& es : level) {
      check_work(work, work_limit);
      std::vector<VertexId> vs;
      for (std::size_t e : es) {
        vs.push_back(edges[e].first);
        vs.push_back(edges[e].second);
      }
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      if (static_cast<int>(vs.size()) > kMaxPatternSize) continue;
      auto local = [&](VertexId x) {
        return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), x) - vs.begin());
      };
      std::vector<std::pair<int, int>> pe;
      for (std::size_t e : es) pe.emplace_back(local(edges[e].first), local(edges[e].second));
      std::vector<Label> labels;
      for (VertexId x : vs) labels.push_back(g.labeled() ? g.label(x) : 0);
      const Pattern occ(static_cast<int>(vs.size()), pe, InducedMode::edge, labels);
      const CanonicalForm form = canonical_form(occ);

      // Every way the canonical pattern maps onto this edge set.
      Small cp;
      cp.k = form.size;
      cp.labeled = true;
      for (int i = 0, bit = 0; i < cp.k; ++i)
        for (int j = i + 1; j < cp.k; ++j, ++bit)
          cp.adj[i][j] = cp.adj[j][i] = (form.adjacency >> bit) & 1u;
      for (int i = 0; i < cp.k; ++i) cp.label[i] = form.labels[i];
      auto& dom = domains[form];
      dom.resize(cp.k);
      std::vector<bool> used(cp.k, false);
      std::vector<int> map(cp.k);
      auto rec = [&](auto& self, int i) -> void {
        if (i == cp.k) {
          for (int u = 0; u < cp.k; ++u) dom[u].insert(vs[map[u]]);
          return;
        }
        for (int c = 0; c < cp.k; ++c) {
          if (used[c] || labels[c] != cp.label[i]) continue;
          bool ok = true;
          for (int j = 0; j < i && ok; ++j) {
            const bool in_set = std::find(pe.begin(), pe.end(), std::pair{std::min(c, map[j]), std::max(c, map[j])}) != pe.end();
            if (cp.adj[i][j] != in_set) ok = false;
          }
          if (!ok) continue;
          used[c] = true;
          map[i] = c;
          self(self, i + 1);
          used[c] = false;
        }
      };
      rec(rec, 0);
    }
    if (size == max_edges) break;
    std::set<std::vector<std::size_t>> next;
    for (const auto& es : level) {
      std::set<VertexId> vs;
      for (std::size_t e : es) {
        vs.insert(edges[e].first);
        vs.insert(edges[e].second);
      }
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (std::binary_search(es.begin(), es.end(), e)) continue;
        if (!vs.count(edges[e].first) && !vs.count(edges[e].second)) continue;
        check_work(work, work_limit);
        auto grown = es;
        grown.insert(std::lower_bound(grown.begin(), grown.end(), e), e);
        next.insert(std::move(grown));
      }
    }
    level = std::move(next);
  }

  std::map<CanonicalForm, std::uint64_t> out;
  for (const auto& [form, dom] : domains) {
    std::uint64_t support = UINT64_MAX;
    for (const auto& d : dom) support = std::min<std::uint64_t>(support, d.size());
    if (support >= min_support) out.emplace(form, support);
  }
  return out;
}

}  // namespace patminer::oracle
