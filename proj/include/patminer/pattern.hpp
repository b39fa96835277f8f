#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "patminer/types.hpp"

namespace patminer {

class Graph;

// A small connected pattern graph, 2 <= k <= 8 vertices. Adjacency is kept
// as one bitmask row per vertex.
class Pattern {
 public:
  Pattern() = default;
  Pattern(int size, std::span<const std::pair<int, int>> edges,
          InducedMode mode = InducedMode::edge, std::vector<Label> labels = {},
          std::string name = {});

  int size() const { return size_; }
  int num_edges() const;
  bool adjacent(int a, int b) const { return (rows_[a] >> b) & 1u; }
  std::uint32_t neighbor_mask(int u) const { return rows_[u]; }
  int degree(int u) const;
  std::vector<std::pair<int, int>> edges() const;

  bool labeled() const { return !labels_.empty(); }
  Label label(int u) const { return labels_[u]; }
  std::span<const Label> labels() const { return labels_; }

  InducedMode induced_mode() const { return mode_; }
  Pattern with_mode(InducedMode mode) const;

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  bool is_connected() const;

  // Structural equality (same vertex numbering); ignores the name.
  friend bool operator==(const Pattern& a, const Pattern& b) {
    return a.size_ == b.size_ && a.rows_ == b.rows_ && a.labels_ == b.labels_ &&
           a.mode_ == b.mode_;
  }

 private:
  int size_ = 0;
  std::array<std::uint32_t, kMaxPatternSize> rows_{};
  std::vector<Label> labels_;
  InducedMode mode_ = InducedMode::edge;
  std::string name_;
};

// Isomorphism-invariant form: labels and upper-triangle adjacency under the
// permutation that minimizes (labels, adjacency bits) lexicographically.
struct CanonicalForm {
  std::vector<Label> labels;
  std::uint64_t adjacency = 0;
  int size = 0;

  auto operator<=>(const CanonicalForm&) const = default;
};

// perm[i] = original vertex placed at canonical position i.
std::pair<CanonicalForm, std::vector<int>> canonicalize(const Pattern& p);
bool isomorphic(const Pattern& a, const Pattern& b);
// Pattern whose vertex numbering is the canonical one.
Pattern pattern_from_form(const CanonicalForm& form, InducedMode mode = InducedMode::edge);

Pattern parse_pattern(const std::filesystem::path& path, InducedMode mode = InducedMode::edge);
Pattern parse_pattern_text(std::string_view text, InducedMode mode = InducedMode::edge,
                           const std::string& origin = "<pattern>");

Pattern generate_clique(int k);
Pattern generate_cycle(int k);
Pattern generate_path(int k);
Pattern generate_star(int k);
Pattern generate_diamond();
Pattern generate_tailed_triangle();

// Every connected k-vertex graph up to isomorphism (3 <= k <= 5), in
// vertex-induced mode, sorted by (edge count, canonical form).
std::vector<Pattern> generate_all_motifs(int k);

// Conventional motif name ("wedge", "diamond", ...) or a generated one.
std::string motif_name(const Pattern& p);

using Permutation = std::vector<int>;
std::vector<Permutation> automorphisms(const Pattern& p);

// order[l] is the pattern vertex bound at level l (0-based). conn[l] and
// anti_conn[l] are bitmasks over earlier levels: the level-l vertex must be
// adjacent to every level in conn and (vertex-induced only) non-adjacent to
// every level in anti_conn.
struct MatchingOrder {
  std::vector<int> order;
  std::vector<std::uint32_t> conn;
  std::vector<std::uint32_t> anti_conn;
  std::vector<std::optional<Label>> labels;

  int size() const { return static_cast<int>(order.size()); }
  int level_of(int pattern_vertex) const;

  // Per-level (conn, anti_conn, label) signature used for dedup and ties.
  auto signature() const {
    return std::tie(conn, anti_conn, labels);
  }
};

MatchingOrder make_matching_order(const Pattern& p, std::span<const int> order);
std::vector<MatchingOrder> enumerate_matching_orders(const Pattern& p);

struct GraphStats {
  double num_vertices = 1;
  double average_degree = 1;
};
GraphStats graph_stats(const Graph& g);

using CostModel = std::function<double(const MatchingOrder&, const GraphStats&)>;

// Sum over levels i >= 2 of prod_{j<i} s(j), with s(j) = d if |conn(j)| == 1
// and d * r^(|conn(j)|-1) otherwise, r = d / |V|. Level 1 has |conn| = 0,
// which makes s = |V|.
double default_order_cost(const MatchingOrder& mo, const GraphStats& stats);

MatchingOrder select_matching_order(std::span<const MatchingOrder> orders, const GraphStats& stats,
                                    const CostModel& cost = default_order_cost);

// Each pair (i, j), i < j, requires the data vertex at level i to have a
// larger id than the one at level j.
struct SymmetryOrder {
  std::vector<std::pair<int, int>> constraints;

  bool contains(int i, int j) const;
  // Transitive closure as bitmasks: greater[j] has bit i set when v_i > v_j
  // is implied.
  std::vector<std::uint32_t> closure(int k) const;
  bool operator==(const SymmetryOrder&) const = default;
};

SymmetryOrder generate_symmetry_order(const Pattern& p, const MatchingOrder& mo);

struct Decomposition {
  int prefix_length = 0;  // levels [0, prefix_length) are enumerated
  int tail = 0;           // interchangeable tail levels counted as C(n, tail)
};

struct PatternProperties {
  bool is_clique = false;
  std::vector<int> hub_vertices;
  std::optional<Decomposition> decomposition;
  std::size_t automorphism_count = 1;

  bool is_hub_pattern() const { return !hub_vertices.empty(); }
};

PatternProperties detect_properties(const Pattern& p, const MatchingOrder& mo,
                                    const SymmetryOrder& so);

struct PatternAnalysis {
  Pattern pattern;
  MatchingOrder order;
  SymmetryOrder symmetry;
  PatternProperties properties;
};

PatternAnalysis analyze_pattern(const Pattern& p, const GraphStats& stats,
                                const CostModel& cost = default_order_cost);
// Analysis with a fixed matching order.
PatternAnalysis analyze_pattern(const Pattern& p, const MatchingOrder& mo);

// Debug dump: matching order, per-level Conn/AntiConn, symmetry constraints.
std::string dump_analysis(const PatternAnalysis& a);

}  // namespace patminer
