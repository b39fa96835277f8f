#include "patminer/plan.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "patminer/errors.hpp"

namespace patminer {

int SetExpr::terms() const { return std::popcount(intersect) + std::popcount(subtract); }

bool SetExpr::contained_in(const SetExpr& other) const {
  return (intersect & ~other.intersect) == 0 && (subtract & ~other.subtract) == 0;
}

const char* to_string(ActionKind a) {
  switch (a) {
    case ActionKind::descend: return "descend";
    case ActionKind::emit_match: return "emit_match";
    case ActionKind::emit_count: return "emit_count";
    case ActionKind::binomial_count: return "binomial_count";
  }
  return "?";
}

namespace {

std::uint32_t bounds_mask(const std::optional<int>& bound, const std::vector<int>& extra) {
  std::uint32_t m = bound ? 1u << *bound : 0u;
  for (int b : extra) m |= 1u << b;
  return m;
}

bool is_terminal(ActionKind a) { return a != ActionKind::descend; }

// A level is buffered when it has a real set operation, is iterated, and a
// later level's expression contains it.
int assign_buffers(std::vector<PlanLevel>& levels) {
  const int k = static_cast<int>(levels.size());
  int slots = 0;
  for (auto& lv : levels) {
    lv.buffer_slot.reset();
    lv.source_slot.reset();
  }
  for (int l = 0; l < k; ++l) {
    auto& lv = levels[l];
    if (lv.expr.terms() < 2 || is_terminal(lv.action.kind)) continue;
    bool consumed = false;
    for (int m = l + 1; m < k && !consumed; ++m)
      consumed = lv.expr.contained_in(levels[m].expr);
    if (consumed) lv.buffer_slot = slots++;
  }
  for (int m = 1; m < k; ++m)
    for (int l = m - 1; l >= 0; --l)
      if (levels[l].buffer_slot && levels[l].expr.contained_in(levels[m].expr)) {
        levels[m].source_slot = levels[l].buffer_slot;
        break;
      }
  return slots;
}

}  // namespace

std::uint32_t PlanLevel::upper_mask() const { return bounds_mask(bound, extra_bounds); }
std::uint32_t ForestMember::upper_mask() const { return bounds_mask(bound, extra_bounds); }

bool SearchPlan::level2_bounded() const {
  return levels.size() >= 2 && (levels[1].upper_mask() & 1u);
}

bool SearchPlan::hub_rooted() const {
  const int k = size();
  for (int l = 1; l < k; ++l)
    if (!(levels[l].expr.intersect & 1u)) return false;
  return k >= 2;
}

bool SearchPlan::rewritten() const {
  return !levels.empty() && levels.back().action.kind == ActionKind::binomial_count;
}

SearchPlan build_plan(const Pattern& p, const MatchingOrder& mo, const SymmetryOrder& so,
                      const PlanOptions& opts) {
  const int k = p.size();
  if (mo.size() != k || static_cast<int>(mo.conn.size()) != k) throw Error("build_plan: matching order does not fit the pattern");
  for (auto [i, j] : so.constraints)
    if (i < 0 || j <= i || j >= k) throw Error("build_plan: symmetry constraint is not level-forward");
  if (opts.oriented && p.num_edges() != k * (k - 1) / 2)
    throw UsageError("oriented execution is only valid for clique patterns");

  SearchPlan plan;
  plan.granularity = opts.granularity;
  plan.pattern_id = opts.pattern_id;
  plan.name = p.name();
  plan.mode = opts.mode;
  plan.oriented = opts.oriented;
  plan.order = mo.order;
  plan.symmetry = opts.oriented ? SymmetryOrder{} : so;

  const auto greater = plan.symmetry.closure(k);
  for (int l = 0; l < k; ++l) {
    PlanLevel lv;
    lv.pattern_vertex = mo.order[l];
    lv.expr.intersect = mo.conn[l];
    lv.expr.subtract = mo.anti_conn[l];
    lv.expr.label = mo.labels[l];
    if (l > 0 && lv.expr.intersect == 0) throw Error("build_plan: level without connectivity");
    const std::uint32_t g = greater[l];
    // Keep only the minimal upper bounds; the rest follow through the chain.
    std::vector<int> minimal;
    for (int b = 0; b < l; ++b) {
      if (!((g >> b) & 1u)) continue;
      bool implied = false;
      for (int c = 0; c < l && !implied; ++c)
        if (c != b && ((g >> c) & 1u) && ((greater[c] >> b) & 1u)) implied = true;
      if (!implied) minimal.push_back(b);
    }
    if (!minimal.empty()) {
      lv.bound = minimal.back();
      minimal.pop_back();
      lv.extra_bounds = std::move(minimal);
    }
    const std::uint32_t prior = (1u << l) - 1;
    lv.exclude = prior & ~lv.expr.intersect & ~g;
    if (l + 1 < k)
      lv.action.kind = ActionKind::descend;
    else
      lv.action.kind = opts.mode == Mode::list ? ActionKind::emit_match : ActionKind::emit_count;
    plan.levels.push_back(std::move(lv));
  }
  plan.num_buffers = assign_buffers(plan.levels);
  return plan;
}

SearchPlan build_plan(const PatternAnalysis& a, const PlanOptions& opts) {
  return build_plan(a.pattern, a.order, a.symmetry, opts);
}

SearchPlan apply_counting_rewrite(const SearchPlan& plan, const PatternProperties& props) {
  if (plan.mode == Mode::list) throw UsageError("counting rewrite requires count mode");
  if (!props.decomposition || plan.rewritten()) return plan;
  const auto& d = *props.decomposition;
  if (d.prefix_length + d.tail != plan.size() || d.tail < 2 || d.prefix_length < 1)
    throw Error("apply_counting_rewrite: decomposition does not fit the plan");
  SearchPlan out = plan;
  out.levels.resize(d.prefix_length + 1);
  out.levels.back().action = Action{ActionKind::binomial_count, d.tail};
  out.num_buffers = assign_buffers(out.levels);
  return out;
}

int PlanForest::num_buffers() const {
  int x = 0;
  for (const auto& t : trees) x = std::max(x, t.num_buffers);
  return x;
}

int PlanForest::max_depth() const {
  int d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth + 1);
  return d;
}

PlanForest fuse_multi_pattern(const std::vector<SearchPlan>& plans) {
  if (plans.empty()) throw UsageError("fuse_multi_pattern: no plans");
  if (plans.size() > 64) throw UsageError("fuse_multi_pattern: at most 64 patterns per forest");
  PlanForest f;
  f.plans = plans;
  f.granularity = plans[0].granularity;
  f.oriented = plans[0].oriented;
  for (const auto& p : plans)
    if (p.granularity != f.granularity || p.oriented != f.oriented)
      throw UsageError("fuse_multi_pattern: plans differ in granularity or orientation");

  // Trees are keyed by the leading kMinFusedLevels expressions; shorter plans
  // only join a tree whose key they match completely.
  std::map<std::vector<SetExpr>, int> tree_of;
  for (int pi = 0; pi < f.num_patterns(); ++pi) {
    const auto& plan = plans[pi];
    std::vector<SetExpr> key;
    for (int l = 0; l < std::min(plan.size(), kMinFusedLevels); ++l) key.push_back(plan.levels[l].expr);
    if (plan.size() < kMinFusedLevels) key.push_back(SetExpr{~0u, ~0u, std::nullopt});  // never shared
    auto [it, fresh] = tree_of.try_emplace(key, static_cast<int>(f.trees.size()));
    if (fresh) {
      ForestTree t;
      t.root = static_cast<int>(f.nodes.size());
      ForestNode root;
      root.expr = plan.levels[0].expr;
      f.nodes.push_back(root);
      f.trees.push_back(t);
    }
    auto& tree = f.trees[it->second];
    tree.patterns.push_back(pi);
    tree.level2_bounded = tree.level2_bounded && plan.level2_bounded();

    int node = tree.root;
    for (int l = 0; l < plan.size(); ++l) {
      const auto& lv = plan.levels[l];
      if (l > 0) {
        int next = -1;
        for (int c : f.nodes[node].children)
          if (f.nodes[c].expr == lv.expr) next = c;
        if (next < 0) {
          next = static_cast<int>(f.nodes.size());
          ForestNode n;
          n.expr = lv.expr;
          n.depth = l;
          n.parent = node;
          f.nodes.push_back(n);
          f.nodes[node].children.push_back(next);
        }
        node = next;
      }
      ForestMember m;
      m.pattern = pi;
      m.level = l;
      m.bound = lv.bound;
      m.extra_bounds = lv.extra_bounds;
      m.exclude = lv.exclude;
      m.action = lv.action;
      f.nodes[node].members.push_back(std::move(m));
      f.nodes[node].pattern_mask |= std::uint64_t{1} << pi;
    }
  }

  // Buffering follows the single-plan rule along each root-to-leaf path.
  // Slots are per depth, so one DFS path never has two live buffers in a slot.
  for (auto& tree : f.trees) {
    std::vector<int> path;
    std::vector<bool> depth_used(kMaxPatternSize, false);
    auto contained_below = [&](auto& self, int n, const SetExpr& e) -> bool {
      for (int c : f.nodes[n].children)
        if (e.contained_in(f.nodes[c].expr) || self(self, c, e)) return true;
      return false;
    };
    std::vector<int> stack{tree.root};
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      auto& node = f.nodes[n];
      const bool iterated = std::any_of(node.members.begin(), node.members.end(),
                                        [](const ForestMember& m) { return m.action.kind == ActionKind::descend; });
      if (node.expr.terms() >= 2 && iterated && contained_below(contained_below, n, node.expr))
        depth_used[node.depth] = true, node.buffer_slot = node.depth;
      for (int c : node.children) stack.push_back(c);
    }
    std::vector<int> rank(kMaxPatternSize, -1);
    int slots = 0;
    for (int d = 0; d < kMaxPatternSize; ++d)
      if (depth_used[d]) rank[d] = slots++;
    tree.num_buffers = slots;
    // Renumber slots densely and pick each node's source buffer.
    auto visit = [&](auto& self, int n, std::vector<int>& ancestors) -> void {
      auto& node = f.nodes[n];
      if (node.buffer_slot) node.buffer_slot = rank[*node.buffer_slot];
      for (auto it = ancestors.rbegin(); it != ancestors.rend(); ++it) {
        const auto& a = f.nodes[*it];
        if (a.buffer_slot && a.expr.contained_in(node.expr)) {
          node.source_slot = a.buffer_slot;
          break;
        }
      }
      ancestors.push_back(n);
      for (int c : node.children) self(self, c, ancestors);
      ancestors.pop_back();
    };
    std::vector<int> anc;
    visit(visit, tree.root, anc);
  }
  return f;
}

PlanForest single_plan_forest(const SearchPlan& plan) { return fuse_multi_pattern({plan}); }

namespace {

std::string expr_text(const SetExpr& e, const std::optional<int>& source_slot, const std::vector<SetExpr>& path_exprs) {
  std::ostringstream os;
  std::uint32_t inter = e.intersect;
  std::uint32_t sub = e.subtract;
  bool first = true;
  if (source_slot) {
    os << "W" << *source_slot;
    // The source node's expression is the buffer's content.
    for (auto it = path_exprs.rbegin(); it != path_exprs.rend(); ++it)
      if (it->contained_in(e)) {
        inter &= ~it->intersect;
        sub &= ~it->subtract;
        break;
      }
    first = false;
  }
  if (e.intersect == 0) {
    os << "V";
    first = false;
  }
  for (int j = 0; j < 32; ++j)
    if ((inter >> j) & 1u) {
      os << (first ? "" : " & ") << "N(v" << j + 1 << ")";
      first = false;
    }
  for (int j = 0; j < 32; ++j)
    if ((sub >> j) & 1u) os << " - N(v" << j + 1 << ")";
  if (e.label) os << " [label " << *e.label << "]";
  return os.str();
}

std::string member_lines(const ForestMember& m, int level, const std::string& indent, const std::string& set_text,
                         const std::string& who) {
  std::ostringstream os;
  const int vl = level + 1;
  if (m.bound || !m.extra_bounds.empty()) {
    std::vector<int> all = m.extra_bounds;
    if (m.bound) all.push_back(*m.bound);
    std::sort(all.begin(), all.end());
    for (int b : all) os << indent << "bound: v" << vl << " < v" << b + 1 << who << "\n";
  }
  if (m.exclude) {
    os << indent << "distinct:";
    for (int j = 0; j < 32; ++j)
      if ((m.exclude >> j) & 1u) os << " v" << j + 1;
    os << who << "\n";
  }
  switch (m.action.kind) {
    case ActionKind::descend: break;
    case ActionKind::emit_match: {
      os << indent << "emit match (";
      for (int j = 0; j <= level; ++j) os << (j ? ", " : "") << "v" << j + 1;
      os << ")" << who << "\n";
      break;
    }
    case ActionKind::emit_count: os << indent << "count += 1" << who << "\n"; break;
    case ActionKind::binomial_count:
      (void)set_text;
      os << indent << "count += C(n, " << m.action.tail << ")" << who << "\n";
      break;
  }
  return os.str();
}

void emit_node(std::ostringstream& os, const PlanForest& f, int n, int depth_indent,
               std::vector<SetExpr>& path_exprs, bool fused) {
  const auto& node = f.nodes[n];
  std::string indent(2 * depth_indent, ' ');
  const int vl = node.depth + 1;
  std::string set = expr_text(node.expr, node.source_slot, path_exprs);
  if (node.buffer_slot) {
    os << indent << "W" << *node.buffer_slot << " = " << set << "\n";
    set = "W" + std::to_string(*node.buffer_slot);
  }
  const bool binomial_only = std::all_of(node.members.begin(), node.members.end(), [](const ForestMember& m) {
    return m.action.kind == ActionKind::binomial_count;
  });
  if (binomial_only) {
    os << indent << "n = |" << set << "|\n";
  } else {
    os << indent << "for v" << vl << " in " << set << ":\n";
  }
  const std::string inner = binomial_only ? indent : indent + "  ";
  for (const auto& m : node.members) {
    const std::string who = fused ? "  [" + (f.plans[m.pattern].name.empty() ? "p" + std::to_string(m.pattern) : f.plans[m.pattern].name) + "]" : "";
    os << member_lines(m, node.depth, m.action.kind == ActionKind::binomial_count ? indent : inner, set, who);
  }
  if (node.buffer_slot) path_exprs.push_back(node.expr);
  for (int c : node.children) emit_node(os, f, c, depth_indent + 1, path_exprs, fused);
  if (node.buffer_slot) path_exprs.pop_back();
}

}  // namespace

std::string emit_source(const PlanForest& forest) {
  std::ostringstream os;
  for (std::size_t t = 0; t < forest.trees.size(); ++t) {
    const auto& tree = forest.trees[t];
    os << "tree " << t << ":";
    for (int p : tree.patterns) os << " " << (forest.plans[p].name.empty() ? "p" + std::to_string(p) : forest.plans[p].name);
    os << " (" << to_string(forest.granularity) << "-parallel" << (forest.oriented ? ", oriented" : "") << ")\n";
    for (int s = 0; s < tree.num_buffers; ++s) os << "buffer W" << s << "[max_degree]\n";
    std::vector<SetExpr> path;
    emit_node(os, forest, tree.root, 0, path, tree.patterns.size() > 1);
  }
  return os.str();
}

std::string emit_source(const SearchPlan& plan) { return emit_source(single_plan_forest(plan)); }

EdgeTaskList build_edge_tasks(const Graph& g, const SearchPlan& plan) {
  return build_edge_tasks(g, plan.level2_bounded());
}

}  // namespace patminer
