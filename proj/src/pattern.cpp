#include "patminer/pattern.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "patminer/errors.hpp"
#include "patminer/graph.hpp"

namespace patminer {

namespace {

bool mask_connected(int k, std::span<const std::uint32_t> rows) {
  if (k == 0) return false;
  const std::uint32_t all = (1u << k) - 1;
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (int u = 0; u < k; ++u)
      if ((frontier >> u) & 1u) next |= rows[u];
    frontier = next & ~seen;
    seen |= next;
  }
  return (seen & all) == all;
}

int pair_index(int i, int j, int k) {
  // Row-major index of (i, j), i < j, in the strict upper triangle.
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

std::uint64_t adjacency_code(const Pattern& p, std::span<const int> perm) {
  const int k = p.size();
  std::uint64_t code = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (p.adjacent(perm[i], perm[j])) code |= std::uint64_t{1} << pair_index(i, j, k);
  return code;
}

}  // namespace

Pattern::Pattern(int size, std::span<const std::pair<int, int>> edges, InducedMode mode,
                 std::vector<Label> labels, std::string name)
    : size_(size), labels_(std::move(labels)), mode_(mode), name_(std::move(name)) {
  if (size > kMaxPatternSize)
    throw CapacityError("pattern has " + std::to_string(size) + " vertices; at most " +
                        std::to_string(kMaxPatternSize) + " are supported");
  if (size < 2) throw UsageError("pattern must have at least 2 vertices");
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= size || b >= size) throw UsageError("pattern edge endpoint out of range");
    if (a == b) throw UsageError("pattern self-loop");
    rows_[a] |= 1u << b;
    rows_[b] |= 1u << a;
  }
  if (!labels_.empty() && static_cast<int>(labels_.size()) != size)
    throw UsageError("pattern label count must equal its size");
  if (!mask_connected(size_, rows_)) throw UsageError("pattern is disconnected");
}

int Pattern::num_edges() const {
  int e = 0;
  for (int u = 0; u < size_; ++u) e += std::popcount(rows_[u]);
  return e / 2;
}

int Pattern::degree(int u) const { return std::popcount(rows_[u]); }

std::vector<std::pair<int, int>> Pattern::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < size_; ++a)
    for (int b = a + 1; b < size_; ++b)
      if (adjacent(a, b)) out.emplace_back(a, b);
  return out;
}

Pattern Pattern::with_mode(InducedMode mode) const {
  Pattern p = *this;
  p.mode_ = mode;
  return p;
}

bool Pattern::is_connected() const { return mask_connected(size_, rows_); }

std::pair<CanonicalForm, std::vector<int>> canonicalize(const Pattern& p) {
  const int k = p.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  CanonicalForm best;
  std::vector<int> best_perm;
  bool first = true;
  std::vector<Label> labels(p.labeled() ? k : 0);
  do {
    if (p.labeled()) {
      for (int i = 0; i < k; ++i) labels[i] = p.label(perm[i]);
      if (!first && labels > best.labels) continue;
    }
    const std::uint64_t code = adjacency_code(p, perm);
    if (first || labels < best.labels || (labels == best.labels && code < best.adjacency)) {
      best.labels = labels;
      best.adjacency = code;
      best.size = k;
      best_perm = perm;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, best_perm};
}

bool isomorphic(const Pattern& a, const Pattern& b) {
  if (a.size() != b.size() || a.num_edges() != b.num_edges() || a.labeled() != b.labeled())
    return false;
  return canonicalize(a).first == canonicalize(b).first;
}

Pattern pattern_from_form(const CanonicalForm& form, InducedMode mode) {
  const int k = form.size;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if ((form.adjacency >> pair_index(i, j, k)) & 1u) edges.emplace_back(i, j);
  Pattern p(k, edges, mode, form.labels);
  p.set_name(motif_name(p));
  return p;
}

Pattern parse_pattern_text(std::string_view text, InducedMode mode, const std::string& origin) {
  std::vector<std::pair<int, int>> edges;
  int max_id = -1;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#' || line.front() == '%') continue;
    long long vals[2];
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    for (auto& v : vals) {
      while (cur < end && (*cur == ' ' || *cur == '\t')) ++cur;
      auto [ptr, ec] = std::from_chars(cur, end, v);
      if (ec != std::errc{} || ptr == cur || v < 0)
        throw ParseError(origin + ":" + std::to_string(lineno) + ": expected \"u v\"", lineno);
      cur = ptr;
    }
    while (cur < end && (*cur == ' ' || *cur == '\t')) ++cur;
    if (cur != end) throw ParseError(origin + ":" + std::to_string(lineno) + ": trailing garbage", lineno);
    if (vals[0] >= kMaxPatternSize || vals[1] >= kMaxPatternSize)
      throw CapacityError(origin + ": pattern vertex id " + std::to_string(std::max(vals[0], vals[1])) +
                          " exceeds the " + std::to_string(kMaxPatternSize) + "-vertex limit");
    edges.emplace_back(static_cast<int>(vals[0]), static_cast<int>(vals[1]));
    max_id = std::max<int>(max_id, static_cast<int>(std::max(vals[0], vals[1])));
  }
  if (max_id < 1) throw ParseError(origin + ": pattern has no edges");
  Pattern p(max_id + 1, edges, mode);
  p.set_name(motif_name(p));
  return p;
}

Pattern parse_pattern(const std::filesystem::path& path, InducedMode mode) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pattern file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pattern_text(ss.str(), mode, path.string());
}

Pattern generate_clique(int k) {
  if (k < 2 || k > kMaxPatternSize) throw UsageError("clique size must be in [2, 8]");
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) edges.emplace_back(a, b);
  return Pattern(k, edges, InducedMode::edge, {}, k == 2 ? "edge" : k == 3 ? "triangle" : std::to_string(k) + "-clique");
}

Pattern generate_cycle(int k) {
  if (k < 3 || k > kMaxPatternSize) throw UsageError("cycle size must be in [3, 8]");
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < k; ++a) edges.emplace_back(a, (a + 1) % k);
  return Pattern(k, edges, InducedMode::edge, {}, k == 3 ? "triangle" : std::to_string(k) + "-cycle");
}

Pattern generate_path(int k) {
  if (k < 2 || k > kMaxPatternSize) throw UsageError("path size must be in [2, 8]");
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a + 1 < k; ++a) edges.emplace_back(a, a + 1);
  Pattern p(k, edges);
  p.set_name(motif_name(p));
  return p;
}

Pattern generate_star(int k) {
  if (k < 2 || k > kMaxPatternSize) throw UsageError("star size must be in [2, 8]");
  std::vector<std::pair<int, int>> edges;
  for (int a = 1; a < k; ++a) edges.emplace_back(0, a);
  Pattern p(k, edges);
  p.set_name(motif_name(p));
  return p;
}

Pattern generate_diamond() {
  const std::pair<int, int> edges[] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}};
  return Pattern(4, edges, InducedMode::edge, {}, "diamond");
}

Pattern generate_tailed_triangle() {
  const std::pair<int, int> edges[] = {{0, 1}, {0, 2}, {1, 2}, {0, 3}};
  return Pattern(4, edges, InducedMode::edge, {}, "tailed-triangle");
}

std::string motif_name(const Pattern& p) {
  const int k = p.size();
  const int e = p.num_edges();
  if (p.labeled()) {
    std::string s = "labeled-" + std::to_string(k) + "v" + std::to_string(e) + "e";
    return s;
  }
  if (k == 2) return "edge";
  if (e == k * (k - 1) / 2) return k == 3 ? "triangle" : std::to_string(k) + "-clique";
  std::vector<int> degs(k);
  for (int u = 0; u < k; ++u) degs[u] = p.degree(u);
  std::sort(degs.begin(), degs.end());
  const bool all_two = std::all_of(degs.begin(), degs.end(), [](int d) { return d == 2; });
  if (e == k && all_two) return std::to_string(k) + "-cycle";
  if (e == k - 1) {
    if (degs.back() == k - 1) return k == 3 ? "wedge" : std::to_string(k - 1) + "-star";
    if (degs.back() == 2) return std::to_string(k) + "-path";
  }
  if (k == 4 && e == 4) return "tailed-triangle";
  if (k == 4 && e == 5) return "diamond";
  std::ostringstream os;
  os << k << "v" << e << "e-" << std::hex << canonicalize(p).first.adjacency;
  return os.str();
}

std::vector<Pattern> generate_all_motifs(int k) {
  if (k < 3 || k > 5) throw UsageError("motif size must be in [3, 5]");
  const int pairs = k * (k - 1) / 2;
  std::map<std::pair<int, CanonicalForm>, Pattern> classes;
  for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
    std::array<std::uint32_t, kMaxPatternSize> rows{};
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if ((mask >> pair_index(i, j, k)) & 1u) {
          rows[i] |= 1u << j;
          rows[j] |= 1u << i;
          edges.emplace_back(i, j);
        }
    if (!mask_connected(k, rows)) continue;
    Pattern p(k, edges, InducedMode::vertex);
    auto form = canonicalize(p).first;
    classes.try_emplace({p.num_edges(), std::move(form)}, std::move(p));
  }
  std::vector<Pattern> out;
  out.reserve(classes.size());
  for (auto& [key, p] : classes) {
    p.set_name(motif_name(p));
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Permutation> automorphisms(const Pattern& p) {
  const int k = p.size();
  Permutation perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Permutation> out;
  do {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      if (p.labeled() && p.label(i) != p.label(perm[i])) ok = false;
      if (p.degree(i) != p.degree(perm[i])) ok = false;
      for (int j = i + 1; j < k && ok; ++j)
        if (p.adjacent(i, j) != p.adjacent(perm[i], perm[j])) ok = false;
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

int MatchingOrder::level_of(int pattern_vertex) const {
  for (int l = 0; l < size(); ++l)
    if (order[l] == pattern_vertex) return l;
  return -1;
}

MatchingOrder make_matching_order(const Pattern& p, std::span<const int> order) {
  const int k = p.size();
  if (static_cast<int>(order.size()) != k) throw UsageError("matching order length must equal pattern size");
  MatchingOrder mo;
  mo.order.assign(order.begin(), order.end());
  mo.conn.assign(k, 0);
  mo.anti_conn.assign(k, 0);
  mo.labels.assign(k, std::nullopt);
  std::uint32_t used = 0;
  for (int l = 0; l < k; ++l) {
    const int u = order[l];
    if (u < 0 || u >= k || ((used >> u) & 1u)) throw UsageError("matching order is not a permutation");
    used |= 1u << u;
    for (int j = 0; j < l; ++j) {
      if (p.adjacent(u, order[j]))
        mo.conn[l] |= 1u << j;
      else if (p.induced_mode() == InducedMode::vertex)
        mo.anti_conn[l] |= 1u << j;
    }
    if (p.labeled()) mo.labels[l] = p.label(u);
  }
  return mo;
}

std::vector<MatchingOrder> enumerate_matching_orders(const Pattern& p) {
  const int k = p.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<MatchingOrder> out;
  std::set<std::tuple<std::vector<std::uint32_t>, std::vector<std::uint32_t>, std::vector<std::optional<Label>>>> seen;
  do {
    // Connected extension: every later vertex touches an earlier one.
    bool ok = true;
    std::uint32_t placed = 1u << perm[0];
    for (int l = 1; l < k && ok; ++l) {
      if ((p.neighbor_mask(perm[l]) & placed) == 0) ok = false;
      placed |= 1u << perm[l];
    }
    if (!ok) continue;
    MatchingOrder mo = make_matching_order(p, perm);
    if (seen.emplace(mo.conn, mo.anti_conn, mo.labels).second) out.push_back(std::move(mo));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  s.num_vertices = std::max<double>(1.0, static_cast<double>(g.num_vertices()));
  s.average_degree = g.oriented() ? 2.0 * g.average_degree() : g.average_degree();
  if (s.average_degree <= 0) s.average_degree = 1.0;
  return s;
}

double default_order_cost(const MatchingOrder& mo, const GraphStats& stats) {
  const double d = stats.average_degree;
  const double r = d / stats.num_vertices;
  double total = 0;
  double prefix = 1;
  for (int i = 1; i < mo.size(); ++i) {
    const int c = std::popcount(mo.conn[i - 1]);
    const double s = c == 0 ? stats.num_vertices : c == 1 ? d : d * std::pow(r, c - 1);
    prefix *= s;
    total += prefix;
  }
  return total;
}

MatchingOrder select_matching_order(std::span<const MatchingOrder> orders, const GraphStats& stats,
                                    const CostModel& cost) {
  if (orders.empty()) throw UsageError("select_matching_order: no candidate orders");
  std::size_t best = 0;
  double best_cost = cost(orders[0], stats);
  for (std::size_t i = 1; i < orders.size(); ++i) {
    const double c = cost(orders[i], stats);
    const double tol = 1e-12 * std::max(std::abs(c), std::abs(best_cost));
    if (c < best_cost - tol ||
        (std::abs(c - best_cost) <= tol && orders[i].signature() < orders[best].signature())) {
      best = i;
      best_cost = std::min(c, best_cost);
    }
  }
  return orders[best];
}

bool SymmetryOrder::contains(int i, int j) const {
  return std::find(constraints.begin(), constraints.end(), std::pair{i, j}) != constraints.end();
}

std::vector<std::uint32_t> SymmetryOrder::closure(int k) const {
  std::vector<std::uint32_t> greater(k, 0);
  for (auto [i, j] : constraints) greater[j] |= 1u << i;
  // Constraints always point from an earlier to a later level, so one pass
  // in level order is a complete closure.
  for (int j = 0; j < k; ++j) {
    std::uint32_t acc = greater[j];
    for (int i = 0; i < j; ++i)
      if ((greater[j] >> i) & 1u) acc |= greater[i];
    greater[j] = acc;
  }
  return greater;
}

SymmetryOrder generate_symmetry_order(const Pattern& p, const MatchingOrder& mo) {
  auto group = automorphisms(p);
  SymmetryOrder so;
  // Stabilizer chain along the matching order: the vertex at each level must
  // beat every other vertex in its orbit under the automorphisms that fix
  // all earlier levels.
  for (int l = 0; l < mo.size(); ++l) {
    const int u = mo.order[l];
    std::set<int> orbit;
    for (const auto& sigma : group) orbit.insert(sigma[u]);
    for (int w : orbit) {
      if (w == u) continue;
      const int lw = mo.level_of(w);
      if (lw <= l) throw UsageError("symmetry generation: inconsistent matching order");
      so.constraints.emplace_back(l, lw);
    }
    std::erase_if(group, [u](const Permutation& sigma) { return sigma[u] != u; });
  }
  std::sort(so.constraints.begin(), so.constraints.end());
  return so;
}

PatternProperties detect_properties(const Pattern& p, const MatchingOrder& mo, const SymmetryOrder& so) {
  const int k = p.size();
  PatternProperties props;
  props.is_clique = p.num_edges() == k * (k - 1) / 2;
  for (int u = 0; u < k; ++u)
    if (p.degree(u) == k - 1) props.hub_vertices.push_back(u);
  props.automorphism_count = automorphisms(p).size();

  const auto greater = so.closure(k);
  for (int t = k - 2; t >= 2; --t) {
    const int start = k - t;
    const std::uint32_t prefix_mask = (1u << start) - 1;
    bool ok = true;
    for (int l = start; l < k && ok; ++l) {
      if (mo.conn[l] != mo.conn[start] || mo.anti_conn[l] != mo.anti_conn[start] ||
          mo.labels[l] != mo.labels[start])
        ok = false;
      if ((mo.conn[l] | mo.anti_conn[l]) & ~prefix_mask) ok = false;
      // Totally chained: v_a > v_b for all tail a < b.
      for (int a = start; a < l && ok; ++a)
        if (!((greater[l] >> a) & 1u)) ok = false;
      if ((greater[l] & prefix_mask) != (greater[start] & prefix_mask)) ok = false;
    }
    if (ok) {
      props.decomposition = Decomposition{start, t};
      break;
    }
  }
  return props;
}

PatternAnalysis analyze_pattern(const Pattern& p, const MatchingOrder& mo) {
  PatternAnalysis a;
  a.pattern = p;
  a.order = mo;
  a.symmetry = generate_symmetry_order(p, mo);
  a.properties = detect_properties(p, a.order, a.symmetry);
  return a;
}

PatternAnalysis analyze_pattern(const Pattern& p, const GraphStats& stats, const CostModel& cost) {
  const auto orders = enumerate_matching_orders(p);
  return analyze_pattern(p, select_matching_order(orders, stats, cost));
}

namespace {

std::string level_set(std::uint32_t mask) {
  std::string s = "{";
  bool first = true;
  for (int j = 0; j < 32; ++j)
    if ((mask >> j) & 1u) {
      if (!first) s += ",";
      s += std::to_string(j + 1);
      first = false;
    }
  return s + "}";
}

}  // namespace

std::string dump_analysis(const PatternAnalysis& a) {
  std::ostringstream os;
  const auto& mo = a.order;
  os << "pattern " << (a.pattern.name().empty() ? "<unnamed>" : a.pattern.name()) << " k="
     << a.pattern.size() << " " << to_string(a.pattern.induced_mode()) << "\n";
  os << "matching order:";
  for (int l = 0; l < mo.size(); ++l) os << (l ? " -> u" : " u") << mo.order[l];
  os << "\n";
  for (int l = 0; l < mo.size(); ++l) {
    os << "  level " << l + 1 << ": u" << mo.order[l] << " conn=" << level_set(mo.conn[l])
       << " anti=" << level_set(mo.anti_conn[l]);
    if (mo.labels[l]) os << " label=" << *mo.labels[l];
    os << "\n";
  }
  os << "symmetry order: {";
  for (std::size_t i = 0; i < a.symmetry.constraints.size(); ++i) {
    const auto [x, y] = a.symmetry.constraints[i];
    os << (i ? ", " : "") << "v" << x + 1 << ">v" << y + 1;
  }
  os << "}\n";
  const auto& pr = a.properties;
  os << "clique=" << (pr.is_clique ? "yes" : "no") << " hubs=" << pr.hub_vertices.size()
     << " automorphisms=" << pr.automorphism_count;
  if (pr.decomposition)
    os << " decomposition=prefix " << pr.decomposition->prefix_length << " + C(n," << pr.decomposition->tail << ")";
  os << "\n";
  return os.str();
}

}  // namespace patminer
