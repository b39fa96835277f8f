#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "patminer/graph.hpp"
#include "patminer/pattern.hpp"
#include "patminer/types.hpp"

namespace patminer {

// Candidate set for one level: intersection of N(v_j) for j in intersect,
// minus the union of N(v_j) for j in subtract, filtered by label. An empty
// intersect mask means "all vertices" (level 1 only).
struct SetExpr {
  std::uint32_t intersect = 0;
  std::uint32_t subtract = 0;
  std::optional<Label> label;

  int terms() const;
  // True when every term of *this also appears in other, so other's set is a
  // subset of this one.
  bool contained_in(const SetExpr& other) const;
  auto operator<=>(const SetExpr&) const = default;
};

enum class ActionKind { descend, emit_match, emit_count, binomial_count };
const char* to_string(ActionKind a);

struct Action {
  ActionKind kind = ActionKind::descend;
  int tail = 0;  // binomial_count only
  bool operator==(const Action&) const = default;
};

struct PlanLevel {
  int pattern_vertex = 0;
  SetExpr expr;
  // Candidate must be < v_bound; extra_bounds are further upper bounds not
  // implied by it (incomparable under the symmetry chain).
  std::optional<int> bound;
  std::vector<int> extra_bounds;
  // Bound levels the candidate may coincide with and must be checked
  // against explicitly.
  std::uint32_t exclude = 0;
  std::optional<int> buffer_slot;  // materialize candidates into this slot
  std::optional<int> source_slot;  // start from this earlier buffer
  Action action;

  std::uint32_t upper_mask() const;  // bound | extra_bounds as a level mask
  bool operator==(const PlanLevel&) const = default;
};

struct SearchPlan {
  std::vector<PlanLevel> levels;
  int num_buffers = 0;
  Granularity granularity = Granularity::edge;
  int pattern_id = 0;
  std::string name;
  Mode mode = Mode::count;
  bool oriented = false;  // runs on an oriented (DAG) host, bounds dropped
  std::vector<int> order;  // level -> pattern vertex
  SymmetryOrder symmetry;

  int size() const { return static_cast<int>(levels.size()); }
  // The level-2 candidate is bounded by level 1 (v1 > v2).
  bool level2_bounded() const;
  // Level 1 binds a pattern hub, so all later levels lie in N(v1).
  bool hub_rooted() const;
  bool rewritten() const;
  bool operator==(const SearchPlan&) const = default;
};

struct PlanOptions {
  Mode mode = Mode::count;
  Granularity granularity = Granularity::edge;
  bool oriented = false;
  int pattern_id = 0;
};

// Throws UsageError when oriented is requested for a non-clique pattern.
SearchPlan build_plan(const Pattern& p, const MatchingOrder& mo, const SymmetryOrder& so,
                      const PlanOptions& opts = {});
SearchPlan build_plan(const PatternAnalysis& a, const PlanOptions& opts = {});

// Replaces the interchangeable tail with binomial_count(t). Returns the plan
// unchanged when no decomposition is present. Throws UsageError in list mode.
SearchPlan apply_counting_rewrite(const SearchPlan& plan, const PatternProperties& props);

// Per-pattern behaviour at a fused node.
struct ForestMember {
  int pattern = 0;  // index into PlanForest::plans
  int level = 0;
  std::optional<int> bound;
  std::vector<int> extra_bounds;
  std::uint32_t exclude = 0;
  Action action;

  std::uint32_t upper_mask() const;
};

struct ForestNode {
  SetExpr expr;
  int depth = 0;
  int parent = -1;
  std::optional<int> buffer_slot;
  std::optional<int> source_slot;
  std::vector<ForestMember> members;
  std::vector<int> children;  // indices into PlanForest::nodes
  std::uint64_t pattern_mask = 0;  // patterns passing through this node
};

struct ForestTree {
  int root = 0;
  std::vector<int> patterns;
  int num_buffers = 0;
  // Every member pattern bounds level 2 by level 1; a reduced edge list is
  // then enough for the whole tree.
  bool level2_bounded = true;
};

struct PlanForest {
  std::vector<SearchPlan> plans;
  std::vector<ForestNode> nodes;
  std::vector<ForestTree> trees;
  Granularity granularity = Granularity::edge;
  bool oriented = false;

  int num_patterns() const { return static_cast<int>(plans.size()); }
  int num_buffers() const;
  int max_depth() const;
};

// Minimum number of leading levels two plans must share before they are put
// in the same tree. The first two levels are plain edge enumeration and
// shared by everything, so sharing them alone is no reason to fuse.
inline constexpr int kMinFusedLevels = 3;

// Throws UsageError for an empty list, mixed granularity or orientation, or
// more than 64 patterns.
PlanForest fuse_multi_pattern(const std::vector<SearchPlan>& plans);
PlanForest single_plan_forest(const SearchPlan& plan);

std::string emit_source(const SearchPlan& plan);
std::string emit_source(const PlanForest& forest);

// Reduced (src > dst only) iff the plan bounds level 2 by level 1.
EdgeTaskList build_edge_tasks(const Graph& g, const SearchPlan& plan);

}  // namespace patminer
