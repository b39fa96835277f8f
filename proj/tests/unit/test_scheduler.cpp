#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "patminer/errors.hpp"
#include "patminer/scheduler.hpp"

using namespace patminer;
using namespace testutil;

namespace {

std::vector<std::size_t> range(std::size_t a, std::size_t b) {
  std::vector<std::size_t> v;
  for (std::size_t i = a; i < b; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_SUITE("scheduler") {
  TEST_CASE("even split") {
    const Schedule s = split_even(10, 2);
    CHECK(s.queues[0] == range(0, 5));
    CHECK(s.queues[1] == range(5, 10));
    const Schedule t = split_even(10, 3);
    CHECK(t.queues[0].size() == 4);
    CHECK(t.queues[1].size() == 3);
    CHECK(t.queues[2].size() == 3);
    CHECK(t.is_partition());
    CHECK(split_even(7, 1).queues[0] == range(0, 7));
    CHECK_THROWS_AS(split_even(7, 0), UsageError);
  }

  TEST_CASE("round robin") {
    const Schedule s = split_round_robin(5, 2);
    CHECK(s.queues[0] == std::vector<std::size_t>{0, 2, 4});
    CHECK(s.queues[1] == std::vector<std::size_t>{1, 3});
    CHECK(split_round_robin(4, 4).queues[3] == std::vector<std::size_t>{3});
    CHECK_THROWS_AS(split_round_robin(3, 0), UsageError);
  }

  TEST_CASE("chunked round robin") {
    const Schedule s = split_chunked_rr(100, 2, 5, 2);
    CHECK(s.chunk_size == 10);
    CHECK(s.queues[0].size() == 50);
    CHECK(s.queues[0][10] == 20);
    CHECK(s.queues[1][0] == 10);
    CHECK(s.is_partition());
    CHECK_THROWS_AS(split_chunked_rr(10, 2, 0, 2), UsageError);
    for (std::size_t n : {1, 2, 4, 8}) {
      const std::size_t m = 64;
      CHECK(split_chunked(m, n, 1).queues == split_round_robin(m, n).queues);
      CHECK(split_chunked(m, n, (m + n - 1) / n).queues == split_even(m, n).queues);
    }
    CHECK(parse_policy("chunked_rr") == Policy::chunked_rr);
    CHECK_THROWS_AS(parse_policy("fifo"), UsageError);
  }

  TEST_CASE("device runs keep counts") {
    const Graph g = generate_erdos_renyi(120, 0.1, 4);
    const SearchPlan plan = build_plan(analyze_pattern(generate_diamond(), graph_stats(g)), {});
    const PlanForest f = single_plan_forest(plan);
    const TaskSet tasks = TaskSet::from_edges(build_edge_tasks(g, plan));
    const auto base = run_dfs(g, f, tasks).counts[0];
    for (auto pol : {Policy::even_split, Policy::round_robin, Policy::chunked_rr})
      for (std::size_t n : {1, 2, 4, 8}) {
        const Schedule s = make_schedule(pol, tasks.size(), n, 2);
        const DeviceRun r = run_on_devices(g, f, tasks, s);
        CHECK(r.counts[0] == base);
        CHECK(r.devices.size() == n);
        std::size_t total = 0;
        for (const auto& d : r.devices) total += d.tasks;
        CHECK(total == tasks.size());
      }
    const DeviceRun one = run_on_devices(g, f, tasks, split_even(tasks.size(), 1), {}, DeviceMode::sequential);
    std::ostringstream os;
    write_load_report(os, one);
    CHECK(os.str().rfind("device_id,tasks,elapsed_ms,count\n0,", 0) == 0);
  }

  TEST_CASE("hub partitions") {
    const Graph k6 = complete_graph(6);
    const SearchPlan p5 = build_plan(analyze_pattern(generate_clique(5), graph_stats(k6)), {});
    const DeviceRun r = run_hub_partitioned(k6, p5, 2);
    CHECK(r.counts[0] == 6);
    const HubPartition one = partition_vertices(k6, 1);
    CHECK(one.subgraphs[0] == k6);
    const Graph g = generate_erdos_renyi(500, 0.03, 6);
    for (bool oriented : {false, true}) {
      const Graph h = oriented ? orient(g) : g;
      PlanOptions po;
      po.oriented = oriented;
      for (auto gran : {Granularity::edge, Granularity::vertex}) {
        po.granularity = gran;
        const SearchPlan plan = build_plan(analyze_pattern(generate_clique(4), graph_stats(g)), po);
        const TaskSet tasks = gran == Granularity::edge ? TaskSet::from_edges(build_edge_tasks(h, false))
                                                        : TaskSet::all_vertices(h);
        const auto want = run_dfs(h, plan, tasks).counts[0];
        for (std::size_t n : {2, 4}) CHECK(run_hub_partitioned(h, plan, n).counts[0] == want);
      }
    }
    const SearchPlan c4 = build_plan(analyze_pattern(generate_cycle(4), graph_stats(g)), {});
    CHECK_THROWS_AS(partition_vertices_for_hub(g, 2, c4), UsageError);
  }
}
