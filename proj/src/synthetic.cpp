#include "patminer/synthetic.hpp"

#include <cmath>
#include <random>

#include "patminer/errors.hpp"

namespace patminer {

Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("edge probability must be in [0, 1]");
  std::vector<Edge> edges;
  if (n >= 2 && p > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (p >= 1.0) {
      for (std::size_t v = 1; v < n; ++v)
        for (std::size_t w = 0; w < v; ++w) edges.emplace_back(v, w);
    } else {
      // Geometric skipping over the lower triangle (Batagelj and Brandes).
      const double lq = std::log(1.0 - p);
      long long v = 1, w = -1;
      const long long nn = static_cast<long long>(n);
      while (v < nn) {
        const double r = unit(rng);
        w += 1 + static_cast<long long>(std::floor(std::log(1.0 - r) / lq));
        while (w >= v && v < nn) {
          w -= v;
          ++v;
        }
        if (v < nn) edges.emplace_back(static_cast<VertexId>(v), static_cast<VertexId>(w));
      }
    }
  }
  return Graph::from_edges(n, edges);
}

Graph generate_power_law(std::size_t n, double avg_degree, std::uint64_t seed, double exponent) {
  if (exponent <= 2.0) throw UsageError("power-law exponent must exceed 2");
  if (avg_degree < 0.0) throw UsageError("average degree must be non-negative");
  std::vector<Edge> edges;
  if (n >= 2 && avg_degree > 0.0) {
    std::vector<double> weight(n);
    const double beta = 1.0 / (exponent - 1.0);
    for (std::size_t i = 0; i < n; ++i) weight[i] = std::pow(static_cast<double>(i + 1), -beta);
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(weight.begin(), weight.end());
    const auto m = static_cast<std::size_t>(std::llround(static_cast<double>(n) * avg_degree / 2.0));
    edges.reserve(m);
    for (std::size_t e = 0; e < m; ++e) {
      const std::size_t a = pick(rng), b = pick(rng);
      if (a != b) edges.emplace_back(static_cast<VertexId>(a), static_cast<VertexId>(b));
    }
  }
  return Graph::from_edges(n, edges);
}

std::vector<Label> random_labels(std::size_t n, std::size_t num_labels, std::uint64_t seed) {
  if (num_labels == 0) throw UsageError("label count must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Label> dist(0, static_cast<Label>(num_labels - 1));
  std::vector<Label> labels(n);
  for (auto& l : labels) l = dist(rng);
  return labels;
}

Graph with_labels(const Graph& g, std::vector<Label> labels) {
  const auto off = g.row_offsets();
  const auto adj = g.neighbor_array();
  return Graph(std::vector<EdgeIndex>(off.begin(), off.end()), std::vector<VertexId>(adj.begin(), adj.end()),
               std::move(labels), g.oriented());
}

Graph complete_graph(std::size_t n) { return generate_erdos_renyi(n, 1.0, 0); }

}  // namespace patminer
