// Acceptance run: one PASS/FAIL/N/A line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "patminer/errors.hpp"
#include "patminer/scheduler.hpp"
#include "patminer/setops.hpp"
#include "unit/helpers.hpp"

using namespace patminer;
using namespace testutil;

namespace {

enum class Verdict { pass, fail, na };

struct Outcome {
  Verdict verdict = Verdict::pass;
  std::string detail;
};

// Collects failures inside one criterion; the first few are kept for the report.
struct Checker {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    if (failures == 0) return {Verdict::pass, summary};
    return {Verdict::fail, std::to_string(failures) + "/" + std::to_string(checks) + " checks failed: " + first};
  }
};

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

std::string str(std::uint64_t v) { return std::to_string(v); }

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Seeded ER sweep over n in [20, 200] and p in [0.05, 0.3]. Dense draws on
// large n are thinned so the expected degree stays near 10, which keeps the
// brute-force 5-vertex enumeration tractable.
std::vector<Graph> er_sweep(int count) {
  std::vector<Graph> out;
  for (int i = 0; i < count; ++i) {
    const std::size_t n = 20 + static_cast<std::size_t>(i) * 180 / std::max(1, count - 1);
    double p = 0.05 + 0.25 * static_cast<double>((i * 7) % count) / std::max(1, count - 1);
    p = std::max(0.05, std::min(p, 10.0 / static_cast<double>(n)));
    out.push_back(generate_erdos_renyi(n, p, 1000 + i));
  }
  return out;
}

std::map<std::string, std::uint64_t> by_name(const JobResult& r) {
  std::map<std::string, std::uint64_t> m;
  for (const auto& pc : r.results) m[pc.name] = pc.count;
  return m;
}

Outcome oracle_equivalence() {
  Checker c;
  const auto graphs = er_sweep(50);
  const std::vector<Pattern> explicit_patterns{generate_cycle(4), generate_diamond()};
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    const std::string tag = "graph " + str(gi) + " ";
    for (int k = 3; k <= 5; ++k) {
      const auto got = k_clique(g, k).count();
      const auto want = oracle::brute_force_count(g, generate_clique(k));
      c.expect(got == want, tag + str(k) + "-clique " + str(got) + " != " + str(want));
    }
    for (const Pattern& p : explicit_patterns) {
      const auto got = subgraph_listing(g, p).count();
      const auto want = oracle::brute_force_count(g, p);
      c.expect(got == want, tag + p.name() + " " + str(got) + " != " + str(want));
    }
    for (int k = 3; k <= 4; ++k)
      for (const auto& pc : k_motif(g, k).results) {
        const auto want = oracle::brute_force_count(g, pc.pattern);
        c.expect(pc.count == want, tag + pc.name + " " + str(pc.count) + " != " + str(want));
      }
  }
  return c.done(str(graphs.size()) + " graphs, " + str(c.checks) + " counts equal the oracle");
}

Outcome list_completeness() {
  Checker c;
  std::vector<Pattern> patterns{generate_clique(3), generate_clique(4), generate_cycle(4), generate_diamond(),
                                generate_path(4), generate_star(4), generate_tailed_triangle(), generate_path(3)};
  for (int k = 3; k <= 4; ++k)
    for (const auto& m : generate_all_motifs(k)) patterns.push_back(m);
  std::size_t matches = 0;
  for (int i = 0; i < 8; ++i) {
    const Graph g = generate_erdos_renyi(20 + 5 * i, 0.08 + 0.02 * i, 2000 + i);
    for (const Pattern& p : patterns) {
      JobOptions opts;
      opts.exec.threads = 1 + i % 2;
      auto want = oracle::brute_force_matches(g, p);
      std::sort(want.begin(), want.end());
      const auto got = listed_keys(g, p, opts);
      matches += got.size();
      c.expect(got == want, "graph " + str(i) + " " + p.name() + " listed " + str(got.size()) + " vs oracle " +
                                str(want.size()));
    }
  }
  return c.done(str(c.checks) + " (graph, pattern) streams, " + str(matches) + " matches, each exactly once");
}

Outcome counting_rewrite() {
  Checker c;
  std::vector<Graph> graphs = er_sweep(20);
  graphs.push_back(complete_graph(4));
  graphs.push_back(complete_graph(7));
  graphs.push_back(generate_power_law(500, 6, 3));
  const Pattern d = generate_diamond();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto plain = plan_count(graphs[i], d, Granularity::edge, false);
    const auto rewritten = plan_count(graphs[i], d, Granularity::edge, true);
    c.expect(plain == rewritten, "graph " + str(i) + " " + str(plain) + " vs " + str(rewritten));
    if (graphs[i].num_vertices() <= 200) {
      const auto want = oracle::brute_force_count(graphs[i], d);
      c.expect(plain == want, "graph " + str(i) + " oracle " + str(want));
    }
  }
  const auto k4 = plan_count(complete_graph(4), d, Granularity::edge, true);
  c.expect(k4 == 6, "K4 diamond " + str(k4));
  const auto a = analyze_pattern(d, GraphStats{1000, 10});
  c.expect(apply_counting_rewrite(build_plan(a), a.properties).rewritten(), "diamond plan not rewritten");
  return c.done(str(graphs.size()) + " graphs agree, K4 -> " + str(k4));
}

Outcome orientation() {
  Checker c;
  std::vector<Graph> graphs = er_sweep(12);
  graphs.push_back(complete_graph(8));
  std::size_t counted = 0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const Graph& g = graphs[i];
    const Graph dag = orient(g);
    c.expect(dag.num_edges() * 2 == g.num_edges(),
             "graph " + str(i) + " slots " + str(dag.num_edges()) + " vs " + str(g.num_edges()));
    for (int k = 3; k <= 5; ++k) {
      PlanOptions po;
      po.oriented = true;
      const SearchPlan plan = build_plan(analyze_pattern(generate_clique(k), graph_stats(g)), po);
      const auto got = run_dfs(dag, plan, TaskSet::from_edges(build_edge_tasks(dag, false))).counts[0];
      const auto want = oracle::brute_force_count(g, generate_clique(k));
      c.expect(got == want, "graph " + str(i) + " " + str(k) + "-clique " + str(got) + " vs " + str(want));
      ++counted;
    }
  }
  return c.done(str(counted) + " oriented clique counts equal the oracle, slots halved on all " +
                str(graphs.size()) + " graphs");
}

Outcome edge_reduction() {
  Checker c;
  const auto graphs = er_sweep(12);
  std::vector<Pattern> patterns{generate_clique(3), generate_clique(4), generate_clique(5), generate_diamond(),
                                generate_cycle(4)};
  std::size_t compared = 0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const Graph& g = graphs[i];
    const auto full = build_edge_tasks(g, false);
    const auto reduced = build_edge_tasks(g, true);
    c.expect(reduced.size() * 2 == full.size(), "graph " + str(i) + " reduced " + str(reduced.size()));
    c.expect(std::all_of(reduced.edges.begin(), reduced.edges.end(), [](const Edge& e) { return e.first > e.second; }),
             "graph " + str(i) + " reduced list keeps src > dst");
    for (const Pattern& p : patterns) {
      const SearchPlan plan = build_plan(analyze_pattern(p, graph_stats(g)));
      if (!plan.level2_bounded()) continue;
      const auto a = run_dfs(g, plan, TaskSet::from_edges(full)).counts[0];
      const auto b = run_dfs(g, plan, TaskSet::from_edges(reduced)).counts[0];
      c.expect(a == b, "graph " + str(i) + " " + p.name() + " " + str(a) + " vs " + str(b));
      ++compared;
    }
  }
  c.expect(compared >= graphs.size() * 3, "too few plans carry the level-2 bound");
  return c.done(str(compared) + " bounded plans give identical counts on m/2 tasks");
}

Outcome local_graph_search() {
  Checker c;
  const auto graphs = er_sweep(20);
  const std::vector<Pattern> hubs{generate_clique(3), generate_clique(4), generate_clique(5), generate_diamond(),
                                  generate_tailed_triangle(), generate_star(4)};
  std::size_t compared = 0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const Graph& g = graphs[i];
    if (g.max_degree() >= 1024) continue;
    for (const Pattern& p : hubs) {
      JobOptions on, off;
      on.exec.lgs = LgsMode::on;
      off.exec.lgs = LgsMode::off;
      const auto a = mine(g, {p}, on);
      const auto b = mine(g, {p}, off);
      c.expect(a.count() == b.count(), "graph " + str(i) + " " + p.name() + " " + str(a.count()) + " vs " +
                                           str(b.count()));
      c.expect(a.lgs && !b.lgs, "graph " + str(i) + " " + p.name() + " lgs flag");
      const auto aut = mine(g, {p});
      c.expect(find_decision(aut.log, 'E')->applied, "graph " + str(i) + " " + p.name() + " auto did not select LGS");
      // Cliques search the oriented graph, so its degree is the one compared.
      const VertexId host_delta = find_decision(aut.log, 'A')->applied ? orient(g).max_degree() : g.max_degree();
      JobOptions low;
      low.exec.lgs_delta_threshold = host_delta;
      c.expect(!find_decision(mine(g, {p}, low).log, 'E')->applied,
               "graph " + str(i) + " " + p.name() + " auto selected LGS above threshold");
      ++compared;
    }
    c.expect(!find_decision(mine(g, {generate_cycle(4)}).log, 'E')->applied, "4-cycle selected LGS");
  }
  // Plan-level too: the bitmap kernel against the list kernel.
  for (std::size_t i = 0; i < 5; ++i)
    for (const Pattern& p : hubs) {
      const auto a = analyze_pattern(p, graph_stats(graphs[i]));
      const SearchPlan plan = build_plan(a);
      const auto tasks = TaskSet::from_edges(build_edge_tasks(graphs[i], plan));
      c.expect(run_dfs_lgs(graphs[i], plan, tasks).counts[0] == run_dfs(graphs[i], plan, tasks).counts[0],
               "plan-level " + p.name());
    }
  return c.done(str(compared) + " hub-pattern jobs agree; auto mode follows the threshold in the log");
}

Outcome scheduling() {
  Checker c;
  const Graph g = generate_erdos_renyi(300, 0.05, 77);
  const std::vector<Pattern> patterns{generate_clique(3), generate_diamond(), generate_cycle(4)};
  const auto base_motif = by_name(k_motif(g, 3));
  const auto base_mine = by_name(mine(g, patterns));
  std::size_t runs = 0;
  for (auto pol : {Policy::even_split, Policy::round_robin, Policy::chunked_rr})
    for (std::size_t n : {1, 2, 4, 8}) {
      JobOptions o;
      o.schedule.devices = n;
      o.schedule.policy = pol;
      const std::string tag = std::string(to_string(pol)) + " n=" + str(n);
      c.expect(by_name(k_motif(g, 3, o)) == base_motif, tag + " 3-motif counts differ");
      c.expect(by_name(mine(g, patterns, o)) == base_mine, tag + " pattern counts differ");
      runs += 2;
    }
  // Queue identities. The even-split identity needs n | m: with a remainder
  // even_split deals sizes differing by one while ceil-sized chunks leave the
  // last queue short.
  std::size_t identities = 0;
  const std::size_t m_graph = build_edge_tasks(g, true).size() / 8 * 8;
  for (std::size_t m : {std::size_t{8}, std::size_t{64}, std::size_t{1000}, m_graph})
    for (std::size_t n : {1, 2, 4, 8}) {
      const std::string tag = "m=" + str(m) + " n=" + str(n);
      c.expect(split_chunked(m, n, 1).queues == split_round_robin(m, n).queues, tag + " c=1 differs from rr");
      c.expect(split_chunked(m, n, (m + n - 1) / n).queues == split_even(m, n).queues, tag + " c=m/n differs from even");
      c.expect(split_chunked_rr(m, n, 1, 1).queues == split_round_robin(m, n).queues, tag + " y=1 a=1 differs from rr");
      identities += 3;
    }
  return c.done(str(runs) + " multi-device jobs match n=1; " + str(identities) + " queue identities hold");
}

double median3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome load_balance() {
  const Graph g = generate_power_law(20000, 16, 2024);
  const auto base = by_name(k_motif(g, 3));
  std::vector<double> even, chunked;
  bool counts_ok = true;
  for (int run = 0; run < 3; ++run)
    for (auto pol : {Policy::even_split, Policy::chunked_rr}) {
      JobOptions o;
      o.schedule.devices = 4;
      o.schedule.policy = pol;
      o.schedule.device_mode = DeviceMode::sequential;
      const auto r = k_motif(g, 3, o);
      counts_ok = counts_ok && by_name(r) == base;
      (pol == Policy::even_split ? even : chunked).push_back(r.devices->imbalance());
    }
  const double re = median3(even), rc = median3(chunked);
  const double gain = re / rc;
  std::string detail = "max/mean even=" + fixed(re) + " chunked=" + fixed(rc) + " ratio=" + fixed(gain) +
                       " (|V|=20000, max degree " + str(g.max_degree()) + ")";
  if (!counts_ok) return {Verdict::fail, "device counts differ; " + detail};
  return {gain >= 1.5 && rc < re ? Verdict::pass : Verdict::fail, detail};
}

Outcome scaling() {
  const Graph g = generate_power_law(20000, 16, 2024);
  auto time_with = [&](std::size_t n) {
    std::vector<double> t;
    for (int run = 0; run < 3; ++run) {
      JobOptions o;
      o.schedule.devices = n;
      o.schedule.policy = Policy::chunked_rr;
      o.exec.threads = 1;
      const double t0 = now_ms();
      k_motif(g, 3, o);
      t.push_back(now_ms() - t0);
    }
    return median3(t);
  };
  const double t1 = time_with(1), t4 = time_with(4);
  const unsigned hw = std::thread::hardware_concurrency();
  const std::string detail = "t1=" + fixed(t1, 1) + "ms t4=" + fixed(t4, 1) + "ms ratio=" + fixed(t4 / t1) +
                             " on " + str(hw) + " hardware threads";
  if (hw < 8) return {Verdict::na, detail + " (needs >= 8)"};
  return {t4 <= 0.5 * t1 ? Verdict::pass : Verdict::fail, detail};
}

// Drops one edge of a canonical FSM pattern; returns the remaining connected
// pattern (an endpoint left isolated is removed) or nothing.
std::optional<Pattern> drop_edge(const Pattern& p, std::size_t which) {
  auto edges = p.edges();
  edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(which));
  std::vector<int> deg(p.size(), 0);
  for (auto [a, b] : edges) ++deg[a], ++deg[b];
  std::vector<int> id(p.size(), -1);
  std::vector<Label> labels;
  for (int v = 0; v < p.size(); ++v)
    if (deg[v] > 0) {
      id[v] = static_cast<int>(labels.size());
      labels.push_back(p.label(v));
    }
  if (labels.size() < 2) return std::nullopt;
  std::vector<std::pair<int, int>> renamed;
  for (auto [a, b] : edges) renamed.emplace_back(id[a], id[b]);
  unsigned seen = 1, grown = 1;
  do {
    seen = grown;
    for (auto [a, b] : renamed)
      if (((seen >> a) | (seen >> b)) & 1u) grown |= (1u << a) | (1u << b);
  } while (grown != seen);
  if (seen != (1u << labels.size()) - 1) return std::nullopt;
  return Pattern(static_cast<int>(labels.size()), renamed, InducedMode::edge, labels);
}

Outcome fsm() {
  Checker c;
  std::size_t patterns = 0, pairs = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 10 + static_cast<std::size_t>(i) * 2;
    const std::size_t labels = 1 + i % 6;
    const int max_edges = 1 + (i % 5 == 0 ? 0 : i % 5 == 1 ? 1 : 2);
    const std::uint64_t sigma = 1 + i % 3;
    const Graph g = with_labels(generate_erdos_renyi(n, 3.0 / static_cast<double>(n), 3000 + i),
                                random_labels(n, labels, 4000 + i));
    const auto want = oracle::brute_force_fsm(g, max_edges, sigma);
    std::map<CanonicalForm, std::uint64_t> got[2];
    for (bool prune : {true, false}) {
      JobOptions o;
      o.label_pruning = prune;
      for (const auto& fp : k_fsm(g, max_edges, sigma, o).fsm.patterns)
        got[prune][oracle::canonical_form(fp.pattern)] = fp.support;
    }
    const std::string tag = "graph " + str(i);
    c.expect(got[1] == want, tag + " pruned result " + str(got[1].size()) + " vs oracle " + str(want.size()));
    c.expect(got[0] == got[1], tag + " pruning changed the result");
    patterns += want.size();
    for (const auto& fp : k_fsm(g, max_edges, sigma).fsm.patterns) {
      if (fp.pattern.num_edges() < 2) continue;
      for (std::size_t e = 0; e < static_cast<std::size_t>(fp.pattern.num_edges()); ++e) {
        const auto parent = drop_edge(fp.pattern, e);
        if (!parent) continue;
        const auto it = got[1].find(oracle::canonical_form(*parent));
        c.expect(it != got[1].end() && it->second >= fp.support, tag + " parent of a frequent pattern missing");
        ++pairs;
      }
    }
  }
  return c.done("20 labeled graphs, " + str(patterns) + " frequent patterns match the oracle with and without "
                "pruning; " + str(pairs) + " parent/child pairs anti-monotone");
}

Outcome buffers_and_workers() {
  Checker c;
  for (int k = 3; k <= 8; ++k) {
    const SearchPlan plan = build_plan(analyze_pattern(generate_clique(k), GraphStats{10000, 50}));
    c.expect(plan.num_buffers <= k - 3, str(k) + "-clique plan uses " + str(plan.num_buffers) + " buffers");
  }
  for (int k = 3; k <= 5; ++k)
    for (const auto& m : generate_all_motifs(k)) {
      const SearchPlan plan = build_plan(analyze_pattern(m, GraphStats{10000, 50}));
      c.expect(plan.num_buffers <= std::max(0, k - 3), m.name() + " uses " + str(plan.num_buffers) + " buffers");
    }
  const Graph g = generate_erdos_renyi(200, 0.12, 55);
  for (int k = 4; k <= 6; ++k) {
    const SearchPlan plan = build_plan(analyze_pattern(generate_clique(k), graph_stats(g)));
    const auto r = run_dfs(g, plan, TaskSet::from_edges(build_edge_tasks(g, plan)));
    c.expect(r.num_buffers <= k - 3, str(k) + "-clique run buffers " + str(r.num_buffers));
    c.expect(r.buffer_high_water <= g.max_degree(), str(k) + "-clique high water " + str(r.buffer_high_water));
  }
  const SearchPlan k5 = build_plan(analyze_pattern(generate_clique(5), graph_stats(g)));
  const TaskSet tasks = TaskSet::from_edges(build_edge_tasks(g, k5));
  const std::size_t x = static_cast<std::size_t>(k5.num_buffers), delta = g.max_degree();
  std::string seen;
  for (std::size_t budget : {x * delta * 4, x * delta * 4 * 5 + 17, std::size_t{1} << 40}) {
    ExecutionConfig cfg;
    cfg.memory_budget = budget;
    cfg.threads = 2;
    const std::size_t want = std::min(budget / (x * delta * 4), tasks.size());
    const auto r = run_dfs(g, k5, tasks, cfg);
    c.expect(r.workers == want, "budget " + str(budget) + " gave " + str(r.workers) + " workers, want " + str(want));
    c.expect(r.buffer_high_water <= delta, "budget run high water");
    seen += (seen.empty() ? "" : ",") + str(r.workers);
  }
  return c.done("buffer bounds hold, high water <= " + str(delta) + ", workers {" + seen + "} for three budgets");
}

std::vector<VertexId> random_set(std::mt19937_64& rng, std::size_t max_len, VertexId universe) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<VertexId> val(0, universe - 1);
  std::set<VertexId> s;
  const std::size_t n = std::min<std::size_t>(len(rng), universe);
  while (s.size() < n) s.insert(val(rng));
  return {s.begin(), s.end()};
}

std::vector<VertexId> merge_scan(const std::vector<VertexId>& a, const std::vector<VertexId>& b,
                                 std::optional<VertexId> bound, bool keep_common) {
  std::vector<VertexId> out;
  std::size_t j = 0;
  for (VertexId x : a) {
    while (j < b.size() && b[j] < x) ++j;
    const bool common = j < b.size() && b[j] == x;
    if (common == keep_common && (!bound || x < *bound)) out.push_back(x);
  }
  return out;
}

Outcome setop_fuzz() {
  Checker c;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int op = 0; op < 4; ++op)
    for (int t = 0; t < 10000; ++t) {
      const VertexId universe = 1 + static_cast<VertexId>(rng() % 5000);
      // Skewed lengths exercise the galloping path.
      const std::size_t la = coin(rng) == 0 ? 4 : 300, lb = coin(rng) == 0 ? 2000 : 300;
      const auto a = random_set(rng, la, universe), b = random_set(rng, lb, universe);
      std::optional<VertexId> bound;
      if (coin(rng) != 0) bound = static_cast<VertexId>(rng() % (universe + 1));
      switch (op) {
        case 0: c.expect(intersect(a, b, bound) == merge_scan(a, b, bound, true), "intersect"); break;
        case 1: c.expect(intersect_count(a, b, bound) == merge_scan(a, b, bound, true).size(), "intersect_count"); break;
        case 2: c.expect(difference(a, b, bound) == merge_scan(a, b, bound, false), "difference"); break;
        default: c.expect(difference_count(a, b, bound) == merge_scan(a, b, bound, false).size(), "difference_count");
      }
    }
  std::size_t pairs = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 20 + rng() % 150;
    const Graph g = generate_erdos_renyi(n, 0.05 + 0.3 * static_cast<double>(rng() % 100) / 100.0, 5000 + t);
    const auto anchor = random_set(rng, n, static_cast<VertexId>(n));
    const LocalGraph lg = build_local_graph(g, anchor);
    std::vector<std::vector<VertexId>> rows(lg.size());
    for (std::size_t i = 0; i < lg.size(); ++i) rows[i] = intersect(g.neighbors(anchor[i]), anchor);
    for (int q = 0; q < 20 && lg.size() > 0; ++q) {
      const std::size_t i = rng() % lg.size(), j = rng() % lg.size();
      std::optional<std::size_t> b;
      if (coin(rng) != 0) b = rng() % (lg.size() + 1);
      std::optional<VertexId> vb;
      if (b && *b < lg.size()) vb = anchor[*b];
      const std::size_t want = merge_scan(rows[i], rows[j], vb, true).size();
      c.expect(bitmap_intersect_count(lg, i, j, b) == want, "bitmap row pair");
      ++pairs;
    }
  }
  return c.done("4 x 10000 list triples and " + str(pairs) + " bitmap row pairs over 1000 local graphs agree");
}

int edge_index(int a, int b) {
  int idx = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j, ++idx)
      if (i == a && j == b) return idx;
  return -1;
}

// Connected graphs on k vertices up to isomorphism, by exhaustive edge subsets
// and permutation minima.
std::size_t count_connected_classes(int k) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) slots.emplace_back(i, j);
  std::vector<int> perm(k);
  std::set<std::uint64_t> classes;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    bool adj[8][8] = {};
    for (std::size_t s = 0; s < slots.size(); ++s)
      if ((mask >> s) & 1u) adj[slots[s].first][slots[s].second] = adj[slots[s].second][slots[s].first] = true;
    unsigned seen = 1, grown = 1;
    do {
      seen = grown;
      for (int i = 0; i < k; ++i)
        if ((seen >> i) & 1u)
          for (int j = 0; j < k; ++j)
            if (adj[i][j]) grown |= 1u << j;
    } while (grown != seen);
    if (seen != (1u << k) - 1) continue;
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t best = ~std::uint64_t{0};
    do {
      std::uint64_t code = 0;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          if (adj[perm[i]][perm[j]]) code |= std::uint64_t{1} << edge_index(i, j);
      best = std::min(best, code);
    } while (std::next_permutation(perm.begin(), perm.end()));
    classes.insert(best);
  }
  return classes.size();
}

Outcome motif_family() {
  Checker c;
  std::string sizes;
  for (int k = 3; k <= 5; ++k) {
    const auto motifs = generate_all_motifs(k);
    const std::size_t want = count_connected_classes(k);
    c.expect(motifs.size() == want, str(k) + "-motifs " + str(motifs.size()) + " vs " + str(want));
    for (std::size_t i = 0; i < motifs.size(); ++i) {
      c.expect(motifs[i].is_connected() && motifs[i].size() == k, motifs[i].name() + " malformed");
      c.expect(motifs[i].induced_mode() == InducedMode::vertex, motifs[i].name() + " not vertex-induced");
      for (std::size_t j = 0; j < i; ++j)
        c.expect(oracle::canonical_form(motifs[i]) != oracle::canonical_form(motifs[j]), "duplicate motif");
    }
    sizes += (sizes.empty() ? "" : "/") + str(motifs.size());
  }
  const auto k4 = by_name(k_motif(complete_graph(4), 3));
  c.expect(k4.size() == 2 && k4.at("wedge") == 0 && k4.at("triangle") == 4, "K4 3-motifs");
  return c.done(sizes + " motifs for k=3/4/5; K4 3-motifs {wedge 0, triangle 4}");
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::set<std::size_t> only;
  for (int a = 1; a < argc; ++a) only.insert(std::stoul(argv[a]));
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence, explicit patterns", oracle_equivalence},
      {"list-mode uniqueness and completeness", list_completeness},
      {"counting rewrite equivalence", counting_rewrite},
      {"orientation soundness", orientation},
      {"edgelist reduction", edge_reduction},
      {"local graph search equivalence", local_graph_search},
      {"scheduling invariance and identities", scheduling},
      {"load-balance direction", load_balance},
      {"scaling direction", scaling},
      {"frequent subgraph mining", fsm},
      {"buffer and worker formulas", buffers_and_workers},
      {"set-op fuzz", setop_fuzz},
      {"motif family sanity", motif_family},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    const double t0 = now_ms();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "N/A ";
    failed += o.verdict == Verdict::fail;
    std::printf("%s %2zu %s: %s [%.1fs]\n", tag, i + 1, criteria[i].first.c_str(), o.detail.c_str(),
                (now_ms() - t0) / 1000.0);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
