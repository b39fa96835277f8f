#include <atomic>

#include "doctest.h"
#include "helpers.hpp"
#include "patminer/errors.hpp"

using namespace patminer;
using namespace testutil;

namespace {

std::map<std::string, std::uint64_t> by_name(const JobResult& r) {
  std::map<std::string, std::uint64_t> m;
  for (const auto& pc : r.results) m[pc.name] = pc.count;
  return m;
}

}  // namespace

TEST_SUITE("apps") {
  TEST_CASE("triangle counting") {
    CHECK(triangle_count(complete_graph(4)) == 4);
    CHECK(triangle_count(cycle_graph(5)) == 0);
    const Graph g = generate_erdos_renyi(200, 0.1, 21);
    CHECK(triangle_count(g) == oracle::brute_force_count(g, generate_clique(3)));
    const auto r = k_clique(g, 3);
    CHECK(find_decision(r.log, 'A')->applied);
  }

  TEST_CASE("clique counting") {
    CHECK(k_clique(complete_graph(6), 5).count() == 6);
    CHECK(k_clique(complete_bipartite(4, 5), 3).count() == 0);
    const Graph g = generate_erdos_renyi(200, 0.1, 22);
    CHECK(k_clique(g, 4).count() == oracle::brute_force_count(g, generate_clique(4)));
    CHECK_THROWS_AS(k_clique(g, 2), UsageError);
    CHECK_THROWS_AS(k_clique(g, 9), UsageError);
  }

  TEST_CASE("subgraph listing") {
    const Graph k4 = complete_graph(4);
    CHECK(subgraph_listing(k4, generate_cycle(4)).count() == 3);
    CHECK(subgraph_listing(k4, generate_diamond()).count() == 6);
    CHECK(subgraph_listing(complete_graph(3), generate_diamond()).count() == 0);
  }

  TEST_CASE("motif counting") {
    const auto k4 = by_name(k_motif(complete_graph(4), 3));
    CHECK(k4.at("wedge") == 0);
    CHECK(k4.at("triangle") == 4);
    const auto p3 = by_name(k_motif(path_graph(3), 3));
    CHECK(p3.at("wedge") == 1);
    CHECK(p3.at("triangle") == 0);
    const Graph g = generate_erdos_renyi(100, 0.1, 23);
    const auto r = k_motif(g, 4);
    CHECK(find_decision(r.log, 'I')->applied);
    std::uint64_t sum = 0;
    for (const auto& pc : r.results) {
      CHECK(pc.count == oracle::brute_force_count(g, pc.pattern));
      sum += pc.count;
    }
    // Every connected 4-subset induces exactly one motif.
    std::uint64_t connected = 0;
    const VertexId n = static_cast<VertexId>(g.num_vertices());
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a + 1; b < n; ++b)
        for (VertexId c = b + 1; c < n; ++c)
          for (VertexId d = c + 1; d < n; ++d) {
            const VertexId s[4] = {a, b, c, d};
            unsigned seen = 1, grown = 1;
            do {
              seen = grown;
              for (int i = 0; i < 4; ++i)
                if ((seen >> i) & 1u)
                  for (int j = 0; j < 4; ++j)
                    if (g.adjacent(s[i], s[j])) grown |= 1u << j;
            } while (grown != seen);
            connected += seen == 0xFu;
          }
    CHECK(sum == connected);
    CHECK_THROWS_AS(k_motif(g, 6), UsageError);
  }

  TEST_CASE("count and list agree") {
    const Graph g = generate_erdos_renyi(60, 0.15, 24);
    for (const Pattern& p : {generate_diamond(), generate_cycle(4), generate_clique(4), generate_star(4)}) {
      JobOptions opts;
      const auto count = mine(g, {p}, opts).count();
      const auto keys = listed_keys(g, p);
      CHECK(keys.size() == count);
      CHECK(keys == oracle::brute_force_matches(g, p));
    }
  }

  TEST_CASE("granularities agree") {
    const Graph g = generate_erdos_renyi(80, 0.1, 25);
    for (const Pattern& p : {generate_diamond(), generate_cycle(4), generate_tailed_triangle()}) {
      JobOptions v, e;
      v.granularity = Granularity::vertex;
      e.granularity = Granularity::edge;
      CHECK(mine(g, {p}, v).count() == mine(g, {p}, e).count());
    }
  }

  TEST_CASE("early termination") {
    const Graph g = generate_erdos_renyi(100, 0.2, 26);
    JobOptions opts;
    opts.mode = Mode::list;
    opts.exec.threads = 2;
    std::atomic<int> seen{0};
    opts.sink = [&](int, std::span<const VertexId>) {
      ++seen;
      return false;
    };
    const auto r = k_clique(g, 3, opts);
    CHECK(r.stopped);
    CHECK(seen.load() >= 1);
  }

  TEST_CASE("subgraph filter") {
    const Graph g = generate_erdos_renyi(50, 0.2, 27);
    JobOptions opts;
    opts.filter = [](int, std::span<const VertexId> m) { return m[0] % 2 == 0; };
    const auto r = mine(g, {generate_diamond()}, opts);
    CHECK(!find_decision(r.log, 'D')->applied);
    std::uint64_t want = 0;
    JobOptions list;
    list.mode = Mode::list;
    list.exec.serialize_sink = true;
    list.sink = [&](int, std::span<const VertexId> m) {
      want += m[0] % 2 == 0;
      return true;
    };
    mine(g, {generate_diamond()}, list);
    CHECK(r.count() == want);
  }

  TEST_CASE("optimization log") {
    const Graph g = generate_erdos_renyi(80, 0.1, 28);
    const auto d = mine(g, {generate_diamond()});
    CHECK(find_decision(d.log, 'D')->applied);
    CHECK(!find_decision(d.log, 'A')->applied);
    CHECK(find_decision(d.log, 'E')->applied);
    CHECK(find_decision(d.log, 'C')->applied);
    CHECK(format_log(d.log).find("D counting-only pruning: applied") != std::string::npos);
    JobOptions low;
    low.exec.lgs_delta_threshold = 2;
    CHECK(!find_decision(mine(g, {generate_diamond()}, low).log, 'E')->applied);
    JobOptions no;
    no.counting_rewrite = false;
    no.orientation = false;
    no.fusion = false;
    no.edge_reduction = false;
    no.exec.lgs = LgsMode::off;
    const auto plain = k_motif(g, 4, no);
    const auto fast = k_motif(g, 4);
    CHECK(by_name(plain) == by_name(fast));
    CHECK(!find_decision(plain.log, 'I')->applied);
  }

  TEST_CASE("multi-device jobs") {
    const Graph g = generate_erdos_renyi(150, 0.08, 29);
    const auto base = by_name(k_motif(g, 3));
    for (auto pol : {Policy::even_split, Policy::round_robin, Policy::chunked_rr}) {
      JobOptions o;
      o.schedule.devices = 4;
      o.schedule.policy = pol;
      const auto r = k_motif(g, 3, o);
      CHECK(by_name(r) == base);
      REQUIRE(r.devices);
      CHECK(r.devices->devices.size() == 4);
    }
    JobOptions hub;
    hub.schedule.devices = 3;
    hub.schedule.hub_partition = true;
    const auto r = k_clique(g, 4, hub);
    CHECK(find_decision(r.log, 'B')->applied);
    CHECK(r.count() == k_clique(g, 4).count());
  }

  TEST_CASE("frequent subgraph mining") {
    const Graph k4 = with_labels(complete_graph(4), {0, 0, 0, 0});
    const auto one = k_fsm(k4, 1, 4);
    REQUIRE(one.fsm.patterns.size() == 1);
    CHECK(one.fsm.patterns[0].support == 4);
    CHECK(k_fsm(k4, 2, 5).fsm.patterns.empty());
    CHECK(find_decision(one.log, 'N')->applied);
    CHECK_THROWS_AS(k_fsm(complete_graph(4), 1, 1), UsageError);
  }
}
