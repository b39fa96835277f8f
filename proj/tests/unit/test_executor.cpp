#include "doctest.h"
#include "helpers.hpp"
#include "patminer/errors.hpp"

using namespace patminer;
using namespace testutil;

TEST_SUITE("executor") {
  TEST_CASE("binomial") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(1, 2) == 0);
    CHECK(binomial(60, 30) == 118264581564861424ull);
    CHECK(binomial(1000000, 8) == UINT64_MAX);
  }

  TEST_CASE("small explicit counts") {
    const Graph k4 = complete_graph(4);
    CHECK(plan_count(k4, generate_diamond()) == 6);
    CHECK(plan_count(k4, generate_cycle(4)) == 3);
    CHECK(plan_count(k4, generate_clique(3)) == 4);
    CHECK(plan_count(complete_graph(6), generate_clique(5)) == 6);
    CHECK(plan_count(cycle_graph(5), generate_clique(3)) == 0);
    const Graph fig1 = graph_of(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}, {4, 5}, {5, 2}});
    CHECK(plan_count(fig1, generate_clique(3)) == 3);
  }

  TEST_CASE("granularity, reduction and rewrite agree with the oracle") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const Graph g = generate_erdos_renyi(35, 0.2, seed);
      for (const Pattern& p : {generate_clique(4), generate_diamond(), generate_cycle(4), generate_tailed_triangle(),
                               generate_star(4), generate_path(4)}) {
        const auto want = oracle::brute_force_count(g, p);
        CHECK(plan_count(g, p, Granularity::edge) == want);
        CHECK(plan_count(g, p, Granularity::vertex) == want);
        CHECK(plan_count(g, p, Granularity::edge, false, true) == want);
        CHECK(plan_count(g, p, Granularity::edge, true, true) == want);
        CHECK(plan_count(g, p, Granularity::vertex, true) == want);
      }
    }
  }

  TEST_CASE("threads and logical workers do not change counts") {
    const Graph g = generate_erdos_renyi(150, 0.08, 3);
    const auto a = analyze_pattern(generate_clique(4), graph_stats(g));
    const SearchPlan plan = build_plan(a, {});
    const TaskSet tasks = TaskSet::from_edges(build_edge_tasks(g, true));
    const auto base = run_dfs(g, plan, tasks).counts[0];
    for (std::size_t threads : {1, 2, 4})
      for (std::size_t workers : {0, 3, 17}) {
        ExecutionConfig cfg;
        cfg.threads = threads;
        cfg.workers = workers;
        CHECK(run_dfs(g, plan, tasks, cfg).counts[0] == base);
      }
  }

  TEST_CASE("worker formula and buffer high water") {
    const Graph g = generate_erdos_renyi(150, 0.1, 5);
    const SearchPlan plan = build_plan(analyze_pattern(generate_clique(5), graph_stats(g)), {});
    const TaskSet tasks = TaskSet::from_edges(build_edge_tasks(g, true));
    const std::size_t per = static_cast<std::size_t>(plan.num_buffers) * g.max_degree() * 4;
    REQUIRE(per > 0);
    for (std::size_t mult : {1, 7, 1000000}) {
      ExecutionConfig cfg;
      cfg.memory_budget = per * mult;
      const auto r = run_dfs(g, plan, tasks, cfg);
      CHECK(r.workers == std::min<std::size_t>(mult, tasks.size()));
      CHECK(r.buffer_high_water <= g.max_degree());
      CHECK(r.num_buffers <= 2);
    }
    ExecutionConfig tight;
    tight.memory_budget = per - 1;
    CHECK_THROWS_AS(run_dfs(g, plan, tasks, tight), ResourceError);
  }

  TEST_CASE("local graph search equals plain search") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const Graph g = generate_erdos_renyi(120, 0.12, seed);
      for (const Pattern& p : {generate_clique(4), generate_clique(5), generate_diamond(), generate_tailed_triangle()}) {
        const auto a = analyze_pattern(p, graph_stats(g));
        for (auto gran : {Granularity::edge, Granularity::vertex}) {
          PlanOptions po;
          po.granularity = gran;
          const SearchPlan plan = build_plan(a, po);
          if (!plan.hub_rooted()) continue;
          const TaskSet tasks = gran == Granularity::edge ? TaskSet::from_edges(build_edge_tasks(g, plan))
                                                          : TaskSet::all_vertices(g);
          CHECK(run_dfs_lgs(g, plan, tasks).counts[0] == run_dfs(g, plan, tasks).counts[0]);
          if (a.properties.decomposition) {
            const SearchPlan r = apply_counting_rewrite(plan, a.properties);
            CHECK(run_dfs_lgs(g, r, tasks).counts[0] == run_dfs(g, plan, tasks).counts[0]);
          }
        }
      }
    }
    const Graph k6 = complete_graph(6);
    const SearchPlan p5 = build_plan(analyze_pattern(generate_clique(5), graph_stats(k6)), {});
    CHECK(run_dfs_lgs(k6, p5, TaskSet::from_edges(build_edge_tasks(k6, p5))).counts[0] == 6);
    const SearchPlan c4 = build_plan(analyze_pattern(generate_cycle(4), graph_stats(k6)), {});
    CHECK_THROWS_AS(run_dfs_lgs(k6, c4, TaskSet::from_edges(build_edge_tasks(k6, false))), UsageError);
  }

  TEST_CASE("level-synchronous reference") {
    const Graph g = generate_erdos_renyi(40, 0.2, 9);
    for (const Pattern& p : {generate_diamond(), generate_cycle(4), generate_clique(4)}) {
      const SearchPlan plan = build_plan(analyze_pattern(p, graph_stats(g)), {});
      ExecutionConfig cfg;
      cfg.bfs_block_size = 7;
      CHECK(run_bfs_plan(g, plan, TaskSet::from_edges(build_edge_tasks(g, false)), cfg) ==
            oracle::brute_force_count(g, p));
    }
  }

  TEST_CASE("mismatched inputs") {
    const Graph g = complete_graph(5);
    const SearchPlan plan = build_plan(analyze_pattern(generate_clique(3), graph_stats(g)), {});
    CHECK_THROWS_AS(run_dfs(orient(g), plan, TaskSet::from_edges(build_edge_tasks(orient(g), false))), UsageError);
    CHECK_THROWS_AS(run_dfs(g, plan, TaskSet::all_vertices(g)), UsageError);
    const std::vector<std::pair<int, int>> e{{0, 1}};
    const Pattern labeled(2, e, InducedMode::edge, {0, 1});
    const SearchPlan lp = build_plan(analyze_pattern(labeled, graph_stats(g)), {});
    CHECK_THROWS_AS(run_dfs(g, lp, TaskSet::from_edges(build_edge_tasks(g, false))), UsageError);
  }

  TEST_CASE("sink can stop the run") {
    const Graph g = generate_erdos_renyi(100, 0.2, 1);
    PlanOptions po;
    po.mode = Mode::list;
    const SearchPlan plan = build_plan(analyze_pattern(generate_clique(3), graph_stats(g)), po);
    std::size_t seen = 0;
    ExecutionConfig cfg;
    cfg.serialize_sink = true;
    const auto r = run_dfs(g, plan, TaskSet::from_edges(build_edge_tasks(g, true)), cfg,
                           [&](int, std::span<const VertexId>) { return ++seen < 1; });
    CHECK(r.stopped);
    CHECK(seen >= 1);
    CHECK(seen < oracle::brute_force_count(g, generate_clique(3)));
  }

  TEST_CASE("FSM on hand-checked graphs") {
    const Graph g = graph_of(3, {{0, 1}, {1, 2}}, {0, 0, 1});
    FsmConfig fc;
    fc.max_edges = 1;
    const auto r = run_bounded_bfs(g, fc);
    REQUIRE(r.patterns.size() == 2);
    std::map<std::vector<Label>, std::uint64_t> got;
    for (const auto& fp : r.patterns) got[fp.form.labels] = fp.support;
    CHECK(got[{0, 0}] == 2);
    CHECK(got[{0, 1}] == 1);

    const Graph k4 = with_labels(complete_graph(4), {0, 0, 0, 0});
    fc.min_support = 4;
    const auto s = run_bounded_bfs(k4, fc);
    REQUIRE(s.patterns.size() == 1);
    CHECK(s.patterns[0].support == 4);
    fc.min_support = 5;
    CHECK(run_bounded_bfs(k4, fc).patterns.empty());
    CHECK_THROWS_AS(run_bounded_bfs(complete_graph(4), fc), UsageError);
  }

  TEST_CASE("FSM matches the oracle with and without pruning") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const Graph g = with_labels(generate_erdos_renyi(22, 0.15, seed), random_labels(22, 3, seed));
      for (std::uint64_t sigma : {1, 2, 3}) {
        const auto want = oracle::brute_force_fsm(g, 3, sigma);
        for (bool prune : {true, false}) {
          FsmConfig fc;
          fc.max_edges = 3;
          fc.min_support = sigma;
          fc.label_pruning = prune;
          ExecutionConfig cfg;
          cfg.bfs_block_size = 5;
          const auto r = run_bounded_bfs(g, fc, cfg);
          std::map<CanonicalForm, std::uint64_t> got;
          for (const auto& fp : r.patterns) got[fp.form] = fp.support;
          CHECK(got == want);
        }
      }
    }
  }
}
