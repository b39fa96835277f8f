#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "patminer/types.hpp"

namespace patminer {

using Edge = std::pair<VertexId, VertexId>;

// Immutable CSR adjacency. Neighbor lists are strictly ascending. When the
// graph is oriented, neighbors(v) holds out-neighbors only and the directed
// graph is acyclic.
class Graph {
 public:
  Graph();

  // Takes ownership of already-built CSR arrays and checks the structural
  // invariants (offsets monotone, ids in range, lists strictly ascending).
  Graph(std::vector<EdgeIndex> row_offsets, std::vector<VertexId> neighbors,
        std::vector<Label> labels = {}, bool oriented = false);

  // Builds a symmetric graph from an arbitrary edge list. Self-loops and
  // duplicate edges (in either direction) are dropped.
  static Graph from_edges(std::size_t num_vertices, std::span<const Edge> edges,
                          std::vector<Label> labels = {});

  std::size_t num_vertices() const { return row_offsets_.size() - 1; }
  // Directed edge slots (twice the undirected count unless oriented).
  EdgeIndex num_edges() const { return neighbors_.size(); }
  EdgeIndex num_undirected_edges() const {
    return oriented_ ? num_edges() : num_edges() / 2;
  }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + row_offsets_[v],
            static_cast<std::size_t>(row_offsets_[v + 1] - row_offsets_[v])};
  }
  VertexId degree(VertexId v) const {
    return static_cast<VertexId>(row_offsets_[v + 1] - row_offsets_[v]);
  }
  VertexId max_degree() const { return max_degree_; }
  double average_degree() const;

  // Directed query: is v in neighbors(u)? Binary search.
  bool has_edge(VertexId u, VertexId v) const;
  // Undirected adjacency even for oriented graphs.
  bool adjacent(VertexId u, VertexId v) const {
    return has_edge(u, v) || (oriented_ && has_edge(v, u));
  }

  bool oriented() const { return oriented_; }
  bool labeled() const { return labeled_; }
  Label label(VertexId v) const { return labels_[v]; }
  std::span<const Label> labels() const { return labels_; }
  // Number of distinct label ids (labels are dense, 0..num_labels()-1).
  std::size_t num_labels() const { return num_labels_; }

  std::span<const EdgeIndex> row_offsets() const { return row_offsets_; }
  std::span<const VertexId> neighbor_array() const { return neighbors_; }

  // Full invariant check including adjacency symmetry (undirected) or
  // acyclicity (oriented). O(|E| log Δ); meant for tests and loaders.
  bool check_invariants() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  void finalize();

  std::vector<EdgeIndex> row_offsets_;
  std::vector<VertexId> neighbors_;
  std::vector<Label> labels_;
  bool oriented_ = false;
  bool labeled_ = false;
  VertexId max_degree_ = 0;
  std::size_t num_labels_ = 0;
};

// Edge tasks seeding edge-parallel search. reduced lists keep only src > dst.
struct EdgeTaskList {
  std::vector<Edge> edges;
  bool reduced = false;

  std::size_t size() const { return edges.size(); }
};

struct LabelStats {
  std::vector<std::uint64_t> frequency;  // indexed by dense label id

  std::uint64_t total() const;
  std::vector<Label> frequent_labels(std::uint64_t min_support) const;
  bool is_frequent(Label l, std::uint64_t min_support) const {
    return l < frequency.size() && frequency[l] >= min_support;
  }
};

// Text edgelist, "u v" per line; '#' and '%' lines are comments. When
// label_path is given, line i of that file holds the raw label of vertex i;
// raw labels are remapped to dense ids in first-seen order.
Graph load_edgelist(const std::filesystem::path& path,
                    const std::optional<std::filesystem::path>& label_path = std::nullopt);

// Binary CSR layout: "GCSR", u32 version=1, u64 |V|, u64 edge slots,
// u32 flags (bit0 labeled, bit1 oriented), u64 offsets[|V|+1],
// u32 neighbors[slots], optional u32 labels[|V|]. Little-endian.
Graph load_binary(const std::filesystem::path& path);
void save_binary(const Graph& g, const std::filesystem::path& path);

// Loads by extension: ".bin"/".csr" use the binary layout, anything else
// is parsed as a text edgelist.
Graph load_graph(const std::filesystem::path& path,
                 const std::optional<std::filesystem::path>& label_path = std::nullopt);

void write_edgelist(const Graph& g, const std::filesystem::path& path);

// Keeps u->v iff (deg u, u) < (deg v, v). Throws UsageError when already
// oriented.
Graph orient(const Graph& g);

// Renames vertices so degree is non-increasing in id order (ties by old id).
// The permutation maps new id -> old id.
std::pair<Graph, std::vector<VertexId>> reorder_by_degree(const Graph& g);

// Induced subgraph over a strictly ascending vertex subset. Renaming is
// order-preserving: local id i corresponds to vertices[i].
Graph induced_subgraph(const Graph& g, std::span<const VertexId> vertices);

// All directed edge slots, or only src > dst when reduce is set. Reducing an
// oriented graph is a UsageError (orientation already halves the list).
EdgeTaskList build_edge_tasks(const Graph& g, bool reduce);

LabelStats label_frequency(const Graph& g);

}  // namespace patminer
