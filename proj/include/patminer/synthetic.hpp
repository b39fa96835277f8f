#pragma once

#include <cstdint>
#include <vector>

#include "patminer/graph.hpp"

namespace patminer {

// G(n, p). Deterministic for a fixed seed. UsageError unless 0 <= p <= 1.
Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

// Chung-Lu graph with expected degrees following a power law of the given
// exponent (> 2) and mean avg_degree. Vertex 0 has the largest weight, so
// low ids are the hubs.
Graph generate_power_law(std::size_t n, double avg_degree, std::uint64_t seed, double exponent = 2.1);

// Uniform labels in [0, num_labels).
std::vector<Label> random_labels(std::size_t n, std::size_t num_labels, std::uint64_t seed);

// Same graph with labels attached.
Graph with_labels(const Graph& g, std::vector<Label> labels);

// Complete graph on n vertices.
Graph complete_graph(std::size_t n);

}  // namespace patminer
