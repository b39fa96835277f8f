#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "patminer/executor.hpp"
#include "patminer/graph.hpp"
#include "patminer/plan.hpp"

namespace patminer {

enum class Policy { even_split, round_robin, chunked_rr };
const char* to_string(Policy p);
// Throws UsageError for an unknown name.
Policy parse_policy(std::string_view name);

// queues[i] lists the task indices of device i in execution order.
struct Schedule {
  Policy policy = Policy::even_split;
  std::size_t chunk_size = 0;  // chunked_rr only
  std::size_t num_tasks = 0;
  std::vector<std::vector<std::size_t>> queues;

  std::size_t num_devices() const { return queues.size(); }
  // Every index in [0, num_tasks) appears in exactly one queue.
  bool is_partition() const;
};

// All throw UsageError when n == 0.
// Consecutive ranges; the first m % n ranges hold one extra task.
Schedule split_even(std::size_t m, std::size_t n);
// Task j goes to queue j mod n.
Schedule split_round_robin(std::size_t m, std::size_t n);
// Chunks of c = alpha * y consecutive tasks dealt round-robin. UsageError
// when y or alpha is 0.
Schedule split_chunked_rr(std::size_t m, std::size_t n, std::size_t workers_y, std::size_t alpha = 2);
// Same dealing with an explicit chunk length c >= 1.
Schedule split_chunked(std::size_t m, std::size_t n, std::size_t c);

Schedule make_schedule(Policy policy, std::size_t m, std::size_t n, std::size_t workers_y, std::size_t alpha = 2);

struct DeviceLoad {
  std::size_t device = 0;
  std::size_t tasks = 0;
  double elapsed_ms = 0;
  std::uint64_t count = 0;  // sum of this device's pattern counts
};

struct DeviceRun {
  std::vector<std::uint64_t> counts;
  std::vector<DeviceLoad> devices;
  double elapsed_ms = 0;  // wall time of the whole run
  bool stopped = false;

  // max / mean device time; 1 when every device took (close to) no time.
  double imbalance() const;
};

// Concurrent: every device runs on its own thread group at the same time.
// Sequential: devices run one after another, so each device's time is
// measured without contention from the others.
enum class DeviceMode { concurrent, sequential };

using DeviceRunner = std::function<RunResult(const TaskSet&)>;

DeviceRun run_on_devices(const TaskSet& tasks, const Schedule& schedule, const DeviceRunner& runner,
                         DeviceMode mode = DeviceMode::concurrent);
DeviceRun run_on_devices(const Graph& g, const PlanForest& forest, const TaskSet& tasks, const Schedule& schedule,
                         const ExecutionConfig& cfg = {}, DeviceMode mode = DeviceMode::concurrent);

// Device i owns a contiguous range of vertex ids and receives the subgraph
// induced by its owned vertices and their neighbors. Hub-rooted searches
// started at owned vertices never leave it.
struct HubPartition {
  std::vector<Graph> subgraphs;
  std::vector<std::vector<VertexId>> local_to_global;  // per device, ascending
  std::vector<std::vector<VertexId>> owned;            // local ids of owned vertices
  std::vector<std::size_t> owner;                      // global vertex -> device
};

HubPartition partition_vertices(const Graph& g, std::size_t n);
// Throws UsageError when the plan is not hub-rooted.
HubPartition partition_vertices_for_hub(const Graph& g, std::size_t n, const SearchPlan& plan);

// Runs a vertex-granularity hub-rooted plan on every partition, rooted only
// at owned vertices. Matches passed to the sink carry global ids.
DeviceRun run_hub_partitioned(const Graph& g, const SearchPlan& plan, std::size_t n, const ExecutionConfig& cfg = {},
                              DeviceMode mode = DeviceMode::concurrent, const MatchSink& sink = {});

// CSV with header device_id,tasks,elapsed_ms,count.
void write_load_report(std::ostream& os, const DeviceRun& run);

}  // namespace patminer
