#include "patminer/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "patminer/errors.hpp"

namespace patminer {

const char* to_string(Policy p) {
  switch (p) {
    case Policy::even_split: return "even";
    case Policy::round_robin: return "rr";
    case Policy::chunked_rr: return "chunked";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  if (name == "even" || name == "even_split") return Policy::even_split;
  if (name == "rr" || name == "round_robin") return Policy::round_robin;
  if (name == "chunked" || name == "chunked_rr") return Policy::chunked_rr;
  throw UsageError("unknown scheduling policy '" + std::string(name) + "' (even, rr, chunked)");
}

bool Schedule::is_partition() const {
  std::vector<char> seen(num_tasks, 0);
  std::size_t total = 0;
  for (const auto& q : queues)
    for (std::size_t t : q) {
      if (t >= num_tasks || seen[t]) return false;
      seen[t] = 1;
      ++total;
    }
  return total == num_tasks;
}

namespace {

void require_devices(std::size_t n) {
  if (n == 0) throw UsageError("device count must be at least 1");
}

}  // namespace

Schedule split_even(std::size_t m, std::size_t n) {
  require_devices(n);
  Schedule s;
  s.policy = Policy::even_split;
  s.num_tasks = m;
  s.queues.resize(n);
  const std::size_t base = m / n, extra = m % n;
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    s.queues[i].reserve(len);
    for (std::size_t j = 0; j < len; ++j) s.queues[i].push_back(next++);
  }
  return s;
}

Schedule split_round_robin(std::size_t m, std::size_t n) {
  require_devices(n);
  Schedule s;
  s.policy = Policy::round_robin;
  s.num_tasks = m;
  s.queues.resize(n);
  for (std::size_t j = 0; j < m; ++j) s.queues[j % n].push_back(j);
  return s;
}

Schedule split_chunked(std::size_t m, std::size_t n, std::size_t c) {
  require_devices(n);
  if (c == 0) throw UsageError("chunk length must be at least 1");
  Schedule s;
  s.policy = Policy::chunked_rr;
  s.chunk_size = c;
  s.num_tasks = m;
  s.queues.resize(n);
  for (std::size_t begin = 0, chunk = 0; begin < m; begin += c, ++chunk) {
    auto& q = s.queues[chunk % n];
    for (std::size_t j = begin; j < std::min(m, begin + c); ++j) q.push_back(j);
  }
  return s;
}

Schedule split_chunked_rr(std::size_t m, std::size_t n, std::size_t workers_y, std::size_t alpha) {
  if (workers_y == 0 || alpha == 0) throw UsageError("chunked round-robin needs workers and alpha >= 1");
  return split_chunked(m, n, alpha * workers_y);
}

Schedule make_schedule(Policy policy, std::size_t m, std::size_t n, std::size_t workers_y, std::size_t alpha) {
  switch (policy) {
    case Policy::even_split: return split_even(m, n);
    case Policy::round_robin: return split_round_robin(m, n);
    case Policy::chunked_rr: return split_chunked_rr(m, n, workers_y, alpha);
  }
  throw UsageError("unknown scheduling policy");
}

double DeviceRun::imbalance() const {
  if (devices.empty()) return 1.0;
  double mx = 0, sum = 0;
  for (const auto& d : devices) {
    mx = std::max(mx, d.elapsed_ms);
    sum += d.elapsed_ms;
  }
  const double mean = sum / static_cast<double>(devices.size());
  return mean > 0 ? mx / mean : 1.0;
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs job(i) for each device, in parallel or one after another.
template <typename Job>
void for_each_device(std::size_t n, DeviceMode mode, Job&& job) {
  if (mode == DeviceMode::sequential || n == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    pool.emplace_back([&, i] {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void accumulate(DeviceRun& run, const std::vector<RunResult>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& r = parts[i];
    if (run.counts.size() < r.counts.size()) run.counts.resize(r.counts.size(), 0);
    std::uint64_t total = 0;
    for (std::size_t p = 0; p < r.counts.size(); ++p) {
      run.counts[p] += r.counts[p];
      total += r.counts[p];
    }
    run.devices[i].count = total;
    run.devices[i].elapsed_ms = r.elapsed_ms;
    run.stopped = run.stopped || r.stopped;
  }
}

}  // namespace

DeviceRun run_on_devices(const TaskSet& tasks, const Schedule& schedule, const DeviceRunner& runner,
                         DeviceMode mode) {
  if (schedule.num_tasks != tasks.size()) throw UsageError("schedule does not match the task list");
  const std::size_t n = schedule.num_devices();
  require_devices(n);
  const auto t0 = Clock::now();
  DeviceRun run;
  run.devices.resize(n);
  std::vector<RunResult> parts(n);
  for_each_device(n, mode, [&](std::size_t i) {
    const TaskSet sub = tasks.subset(schedule.queues[i]);
    const auto d0 = Clock::now();
    parts[i] = runner(sub);
    parts[i].elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - d0).count();
  });
  for (std::size_t i = 0; i < n; ++i) {
    run.devices[i].device = i;
    run.devices[i].tasks = schedule.queues[i].size();
  }
  accumulate(run, parts);
  run.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return run;
}

DeviceRun run_on_devices(const Graph& g, const PlanForest& forest, const TaskSet& tasks, const Schedule& schedule,
                         const ExecutionConfig& cfg, DeviceMode mode) {
  return run_on_devices(
      tasks, schedule, [&](const TaskSet& sub) { return run_dfs(g, forest, sub, cfg); }, mode);
}

HubPartition partition_vertices(const Graph& g, std::size_t n) {
  require_devices(n);
  const std::size_t nv = g.num_vertices();
  HubPartition hp;
  hp.owner.assign(nv, 0);
  hp.subgraphs.reserve(n);
  const std::size_t base = nv / n, extra = nv % n;
  std::size_t lo = 0;
  std::vector<char> mark(nv, 0);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t hi = lo + base + (d < extra ? 1 : 0);
    std::vector<VertexId> members;
    for (std::size_t v = lo; v < hi; ++v) {
      hp.owner[v] = d;
      if (!mark[v]) {
        mark[v] = 1;
        members.push_back(static_cast<VertexId>(v));
      }
      for (VertexId w : g.neighbors(static_cast<VertexId>(v)))
        if (!mark[w]) {
          mark[w] = 1;
          members.push_back(w);
        }
    }
    std::sort(members.begin(), members.end());
    for (VertexId v : members) mark[v] = 0;
    std::vector<VertexId> owned;
    for (std::size_t i = 0; i < members.size(); ++i)
      if (members[i] >= lo && members[i] < hi) owned.push_back(static_cast<VertexId>(i));
    hp.subgraphs.push_back(induced_subgraph(g, members));
    hp.local_to_global.push_back(std::move(members));
    hp.owned.push_back(std::move(owned));
    lo = hi;
  }
  return hp;
}

HubPartition partition_vertices_for_hub(const Graph& g, std::size_t n, const SearchPlan& plan) {
  if (!plan.hub_rooted()) throw UsageError("hub partitioning needs a hub-rooted plan");
  return partition_vertices(g, n);
}

DeviceRun run_hub_partitioned(const Graph& g, const SearchPlan& plan, std::size_t n, const ExecutionConfig& cfg,
                              DeviceMode mode, const MatchSink& sink) {
  const auto t0 = Clock::now();
  const HubPartition hp = partition_vertices_for_hub(g, n, plan);
  DeviceRun run;
  run.devices.resize(n);
  std::vector<RunResult> parts(n);
  std::mutex sink_mu;
  for_each_device(n, mode, [&](std::size_t d) {
    const Graph& sg = hp.subgraphs[d];
    const auto& l2g = hp.local_to_global[d];
    TaskSet tasks;
    tasks.granularity = plan.granularity;
    if (plan.granularity == Granularity::vertex) {
      tasks.vertices = hp.owned[d];
    } else {
      // Every directed edge leaving an owned vertex; nothing is reduced since
      // the reverse edge may belong to another device.
      for (VertexId v : hp.owned[d])
        for (VertexId w : sg.neighbors(v)) tasks.edges.emplace_back(v, w);
    }
    MatchSink local;
    if (sink) {
      local = [&](int p, std::span<const VertexId> m) {
        VertexId buf[kMaxPatternSize];
        for (std::size_t i = 0; i < m.size(); ++i) buf[i] = l2g[m[i]];
        std::lock_guard lock(sink_mu);
        return sink(p, std::span<const VertexId>(buf, m.size()));
      };
    }
    const auto d0 = Clock::now();
    parts[d] = run_dfs(sg, plan, tasks, cfg, local);
    parts[d].elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - d0).count();
    run.devices[d].device = d;
    run.devices[d].tasks = tasks.size();
  });
  accumulate(run, parts);
  run.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return run;
}

void write_load_report(std::ostream& os, const DeviceRun& run) {
  os << "device_id,tasks,elapsed_ms,count\n";
  for (const auto& d : run.devices) os << d.device << ',' << d.tasks << ',' << d.elapsed_ms << ',' << d.count << '\n';
}

}  // namespace patminer
