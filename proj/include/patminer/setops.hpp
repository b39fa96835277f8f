#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "patminer/types.hpp"

namespace patminer {

class Graph;

using VertexList = std::span<const VertexId>;

// Sorted-list kernels. Inputs must be strictly ascending. An optional bound
// keeps only elements strictly below it.
//
// Intersection uses a two-pointer merge when the lists are within a factor of
// four in length and galloping binary search of the shorter list's elements
// in the longer one otherwise.
std::vector<VertexId> intersect(VertexList a, VertexList b, std::optional<VertexId> bound = std::nullopt);
std::size_t intersect_count(VertexList a, VertexList b, std::optional<VertexId> bound = std::nullopt);
void intersect_into(VertexList a, VertexList b, std::vector<VertexId>& out,
                    std::optional<VertexId> bound = std::nullopt);

std::vector<VertexId> difference(VertexList a, VertexList b, std::optional<VertexId> bound = std::nullopt);
std::size_t difference_count(VertexList a, VertexList b, std::optional<VertexId> bound = std::nullopt);
void difference_into(VertexList a, VertexList b, std::vector<VertexId>& out,
                     std::optional<VertexId> bound = std::nullopt);

// In-place variants for buffers: keep elements of inout also in (or not in) b.
void retain_intersection(std::vector<VertexId>& inout, VertexList b);
void retain_difference(std::vector<VertexId>& inout, VertexList b);

// Prefix of a strictly below y (binary search).
VertexList bound_list(VertexList a, VertexId y);

bool contains(VertexList a, VertexId x);

// Induced subgraph over a small sorted universe, one bitmap row per local
// vertex. Local id i is universe[i], so id order is preserved. For oriented
// hosts rows hold out-adjacency.
class LocalGraph {
 public:
  LocalGraph() = default;

  std::size_t size() const { return universe_.size(); }
  std::size_t words() const { return words_; }
  VertexList universe() const { return universe_; }
  VertexId original(std::size_t i) const { return universe_[i]; }
  std::span<const std::uint64_t> row(std::size_t i) const {
    return {bits_.data() + i * words_, words_};
  }
  bool adjacent(std::size_t i, std::size_t j) const {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  // Number of local ids whose original id is < v.
  std::size_t local_bound(VertexId v) const;

  // Rebuilds in place, reusing storage.
  void assign(const Graph& g, VertexList anchor);

 private:
  std::vector<VertexId> universe_;
  std::vector<std::uint64_t> bits_;
  std::size_t words_ = 0;
};

// Throws UsageError when anchor is not strictly ascending.
LocalGraph build_local_graph(const Graph& g, VertexList anchor);

// popcount(row_i & row_j), restricted to local ids < bound when given.
// Throws UsageError for rows out of range.
std::size_t bitmap_intersect_count(const LocalGraph& lg, std::size_t row_i, std::size_t row_j,
                                   std::optional<std::size_t> bound = std::nullopt);

// Bitmap helpers over rows of a fixed word count.
std::size_t popcount_below(std::span<const std::uint64_t> bits, std::size_t bound);
void mask_below(std::span<std::uint64_t> bits, std::size_t bound);

}  // namespace patminer
