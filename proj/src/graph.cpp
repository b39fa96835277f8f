#include "patminer/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>

#include "patminer/errors.hpp"

namespace patminer {

namespace {

constexpr std::uint32_t kBinaryVersion = 1;
constexpr std::uint32_t kFlagLabeled = 1u << 0;
constexpr std::uint32_t kFlagOriented = 1u << 1;

static_assert(std::endian::native == std::endian::little,
              "binary CSR I/O assumes a little-endian host");

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Parses the next unsigned integer token. Returns false on malformed input.
bool next_uint(std::string_view& s, std::uint64_t& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr == first) return false;
  if (ptr != last && *ptr != ' ' && *ptr != '\t') return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - first));
  return true;
}

bool next_int(std::string_view& s, std::int64_t& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr == first) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - first));
  return trim(s).empty();
}

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& is, T& value, const std::string& path) {
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw ParseError(path + ": truncated binary CSR file");
}

template <typename T>
void read_array(std::istream& is, std::vector<T>& out, std::size_t n, const std::string& path) {
  out.resize(n);
  if (n == 0) return;
  if (!is.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(n * sizeof(T))))
    throw ParseError(path + ": truncated binary CSR file");
}

}  // namespace

Graph::Graph() : row_offsets_(1, 0) {}

Graph::Graph(std::vector<EdgeIndex> row_offsets, std::vector<VertexId> neighbors,
             std::vector<Label> labels, bool oriented)
    : row_offsets_(std::move(row_offsets)),
      neighbors_(std::move(neighbors)),
      labels_(std::move(labels)),
      oriented_(oriented) {
  if (row_offsets_.empty()) row_offsets_.push_back(0);
  const std::size_t n = row_offsets_.size() - 1;
  if (n > std::numeric_limits<VertexId>::max())
    throw CapacityError("vertex count exceeds 32-bit id space");
  if (row_offsets_.front() != 0 || row_offsets_.back() != neighbors_.size())
    throw UsageError("row_offsets must start at 0 and end at the neighbor count");
  for (std::size_t v = 0; v < n; ++v) {
    if (row_offsets_[v] > row_offsets_[v + 1])
      throw UsageError("row_offsets must be non-decreasing");
    const auto list = this->neighbors(static_cast<VertexId>(v));
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i] >= n) throw UsageError("neighbor id out of range");
      if (list[i] == v) throw UsageError("self-loop in CSR input");
      if (i > 0 && list[i - 1] >= list[i])
        throw UsageError("neighbor lists must be strictly ascending");
    }
  }
  if (!labels_.empty() && labels_.size() != n)
    throw UsageError("label array length must equal the vertex count");
  labeled_ = !labels_.empty();
  finalize();
}

void Graph::finalize() {
  max_degree_ = 0;
  for (std::size_t v = 0; v + 1 < row_offsets_.size(); ++v)
    max_degree_ = std::max(max_degree_, degree(static_cast<VertexId>(v)));
  num_labels_ = 0;
  for (Label l : labels_) num_labels_ = std::max<std::size_t>(num_labels_, l + 1);
}

Graph Graph::from_edges(std::size_t num_vertices, std::span<const Edge> edges,
                        std::vector<Label> labels) {
  if (num_vertices > std::numeric_limits<VertexId>::max())
    throw CapacityError("vertex count exceeds 32-bit id space");
  std::vector<EdgeIndex> offsets(num_vertices + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= num_vertices || v >= num_vertices) throw UsageError("edge endpoint out of range");
    if (u == v) continue;
    ++offsets[u + 1];
    ++offsets[v + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<VertexId> adj(offsets.back());
  std::vector<EdgeIndex> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    adj[cursor[u]++] = v;
    adj[cursor[v]++] = u;
  }
  // Sort and dedupe each list, compacting in place.
  std::vector<EdgeIndex> compact(num_vertices + 1, 0);
  EdgeIndex out = 0;
  for (std::size_t v = 0; v < num_vertices; ++v) {
    auto first = adj.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    auto last = adj.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) adj[out++] = *it;
    compact[v + 1] = out;
  }
  adj.resize(out);
  adj.shrink_to_fit();
  return Graph(std::move(compact), std::move(adj), std::move(labels), false);
}

double Graph::average_degree() const {
  const auto n = num_vertices();
  return n == 0 ? 0.0 : static_cast<double>(neighbors_.size()) / static_cast<double>(n);
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  const auto list = neighbors(u);
  return std::binary_search(list.begin(), list.end(), v);
}

bool Graph::check_invariants() const {
  const std::size_t n = num_vertices();
  if (row_offsets_.back() != neighbors_.size()) return false;
  VertexId max_deg = 0;
  for (VertexId v = 0; v < n; ++v) {
    const auto list = neighbors(v);
    max_deg = std::max(max_deg, degree(v));
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i] >= n || list[i] == v) return false;
      if (i > 0 && list[i - 1] >= list[i]) return false;
      if (!oriented_ && !has_edge(list[i], v)) return false;
      if (oriented_ && has_edge(list[i], v)) return false;
    }
  }
  if (max_deg != max_degree_) return false;
  if (oriented_) {
    // Kahn's algorithm: every vertex must be removable.
    std::vector<VertexId> indeg(n, 0);
    for (VertexId w : neighbors_) ++indeg[w];
    std::vector<VertexId> stack;
    for (VertexId v = 0; v < n; ++v)
      if (indeg[v] == 0) stack.push_back(v);
    std::size_t seen = 0;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      ++seen;
      for (VertexId w : neighbors(v))
        if (--indeg[w] == 0) stack.push_back(w);
    }
    if (seen != n) return false;
  }
  return true;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.oriented_ == b.oriented_ && a.row_offsets_ == b.row_offsets_ &&
         a.neighbors_ == b.neighbors_ && a.labels_ == b.labels_;
}

std::uint64_t LabelStats::total() const {
  return std::accumulate(frequency.begin(), frequency.end(), std::uint64_t{0});
}

std::vector<Label> LabelStats::frequent_labels(std::uint64_t min_support) const {
  std::vector<Label> out;
  for (Label l = 0; l < frequency.size(); ++l)
    if (frequency[l] >= min_support) out.push_back(l);
  return out;
}

Graph load_edgelist(const std::filesystem::path& path,
                    const std::optional<std::filesystem::path>& label_path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path.string());
  std::vector<Edge> edges;
  std::uint64_t max_id = 0;
  bool any = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#' || s.front() == '%') continue;
    std::uint64_t u = 0, v = 0;
    if (!next_uint(s, u) || !next_uint(s, v))
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected \"u v\"", lineno);
    if (!trim(s).empty())
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": trailing garbage after \"u v\"", lineno);
    if (u >= std::numeric_limits<VertexId>::max() || v >= std::numeric_limits<VertexId>::max())
      throw CapacityError(path.string() + ":" + std::to_string(lineno) +
                          ": vertex id exceeds 32-bit capacity");
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    max_id = std::max({max_id, u, v});
    any = true;
  }
  std::size_t n = any ? static_cast<std::size_t>(max_id) + 1 : 0;

  std::vector<Label> labels;
  if (label_path) {
    std::ifstream lin(*label_path);
    if (!lin) throw IoError("cannot open label file: " + label_path->string());
    std::unordered_map<std::int64_t, Label> dense;
    std::size_t lno = 0;
    while (std::getline(lin, line)) {
      ++lno;
      std::string_view s = trim(line);
      if (s.empty()) continue;
      if (s.front() == '#' || s.front() == '%') continue;
      std::int64_t raw = 0;
      if (!next_int(s, raw))
        throw ParseError(label_path->string() + ":" + std::to_string(lno) + ": expected an integer label", lno);
      auto [it, inserted] = dense.try_emplace(raw, static_cast<Label>(dense.size()));
      labels.push_back(it->second);
    }
    if (labels.size() < n)
      throw ParseError(label_path->string() + ": fewer labels (" + std::to_string(labels.size()) +
                       ") than vertices (" + std::to_string(n) + ")");
    n = labels.size();
  }
  return Graph::from_edges(n, edges, std::move(labels));
}

Graph load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open binary graph: " + path.string());
  const std::string p = path.string();
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "GCSR", 4) != 0)
    throw ParseError(p + ": bad magic, expected GCSR");
  std::uint32_t version = 0, flags = 0;
  std::uint64_t nv = 0, ne = 0;
  read_pod(in, version, p);
  if (version != kBinaryVersion) throw ParseError(p + ": unsupported version " + std::to_string(version));
  read_pod(in, nv, p);
  read_pod(in, ne, p);
  read_pod(in, flags, p);
  if (nv > std::numeric_limits<VertexId>::max()) throw CapacityError(p + ": vertex count too large");
  std::vector<EdgeIndex> offsets;
  std::vector<VertexId> adj;
  std::vector<Label> labels;
  read_array(in, offsets, nv + 1, p);
  read_array(in, adj, ne, p);
  if (flags & kFlagLabeled) read_array(in, labels, nv, p);
  try {
    return Graph(std::move(offsets), std::move(adj), std::move(labels), (flags & kFlagOriented) != 0);
  } catch (const UsageError& e) {
    throw ParseError(p + ": invalid CSR content: " + e.what());
  }
}

void save_binary(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write binary graph: " + path.string());
  out.write("GCSR", 4);
  write_pod(out, kBinaryVersion);
  write_pod(out, static_cast<std::uint64_t>(g.num_vertices()));
  write_pod(out, static_cast<std::uint64_t>(g.num_edges()));
  std::uint32_t flags = (g.labeled() ? kFlagLabeled : 0) | (g.oriented() ? kFlagOriented : 0);
  write_pod(out, flags);
  const auto offsets = g.row_offsets();
  out.write(reinterpret_cast<const char*>(offsets.data()),
            static_cast<std::streamsize>(offsets.size() * sizeof(EdgeIndex)));
  const auto adj = g.neighbor_array();
  out.write(reinterpret_cast<const char*>(adj.data()),
            static_cast<std::streamsize>(adj.size() * sizeof(VertexId)));
  if (g.labeled()) {
    const auto labels = g.labels();
    out.write(reinterpret_cast<const char*>(labels.data()),
              static_cast<std::streamsize>(labels.size() * sizeof(Label)));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Graph load_graph(const std::filesystem::path& path,
                 const std::optional<std::filesystem::path>& label_path) {
  const auto ext = path.extension().string();
  if (ext == ".bin" || ext == ".csr") {
    if (label_path) throw UsageError("binary CSR files carry their own labels");
    return load_binary(path);
  }
  return load_edgelist(path, label_path);
}

void write_edgelist(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write edgelist: " + path.string());
  out << "# " << g.num_vertices() << " vertices, " << g.num_undirected_edges() << " edges\n";
  std::string buf;
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    for (VertexId v : g.neighbors(u)) {
      if (!g.oriented() && v < u) continue;
      buf.clear();
      buf += std::to_string(u);
      buf += ' ';
      buf += std::to_string(v);
      buf += '\n';
      out << buf;
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Graph orient(const Graph& g) {
  if (g.oriented()) throw UsageError("orient: graph is already oriented");
  const std::size_t n = g.num_vertices();
  const auto precedes = [&g](VertexId a, VertexId b) {
    const auto da = g.degree(a), db = g.degree(b);
    return da < db || (da == db && a < b);
  };
  std::vector<EdgeIndex> offsets(n + 1, 0);
  for (VertexId u = 0; u < n; ++u) {
    EdgeIndex out = 0;
    for (VertexId v : g.neighbors(u))
      if (precedes(u, v)) ++out;
    offsets[u + 1] = offsets[u] + out;
  }
  std::vector<VertexId> adj(offsets.back());
  for (VertexId u = 0; u < n; ++u) {
    EdgeIndex pos = offsets[u];
    for (VertexId v : g.neighbors(u))
      if (precedes(u, v)) adj[pos++] = v;
  }
  std::vector<Label> labels(g.labels().begin(), g.labels().end());
  return Graph(std::move(offsets), std::move(adj), std::move(labels), true);
}

std::pair<Graph, std::vector<VertexId>> reorder_by_degree(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<VertexId> new_to_old(n);
  std::iota(new_to_old.begin(), new_to_old.end(), VertexId{0});
  // Stable sort keeps original id order among equal degrees.
  std::stable_sort(new_to_old.begin(), new_to_old.end(),
                   [&g](VertexId a, VertexId b) { return g.degree(a) > g.degree(b); });
  std::vector<VertexId> old_to_new(n);
  for (VertexId i = 0; i < n; ++i) old_to_new[new_to_old[i]] = i;

  std::vector<EdgeIndex> offsets(n + 1, 0);
  for (VertexId i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + g.degree(new_to_old[i]);
  std::vector<VertexId> adj(offsets.back());
  for (VertexId i = 0; i < n; ++i) {
    auto first = adj.begin() + static_cast<std::ptrdiff_t>(offsets[i]);
    auto it = first;
    for (VertexId w : g.neighbors(new_to_old[i])) *it++ = old_to_new[w];
    std::sort(first, it);
  }
  std::vector<Label> labels;
  if (g.labeled()) {
    labels.resize(n);
    for (VertexId i = 0; i < n; ++i) labels[i] = g.label(new_to_old[i]);
  }
  return {Graph(std::move(offsets), std::move(adj), std::move(labels), g.oriented()),
          std::move(new_to_old)};
}

Graph induced_subgraph(const Graph& g, std::span<const VertexId> vertices) {
  for (std::size_t i = 1; i < vertices.size(); ++i)
    if (vertices[i - 1] >= vertices[i]) throw UsageError("induced_subgraph: vertex subset must be strictly ascending");
  const std::size_t n = vertices.size();
  std::vector<EdgeIndex> offsets(n + 1, 0);
  std::vector<VertexId> adj;
  for (std::size_t i = 0; i < n; ++i) {
    const auto list = g.neighbors(vertices[i]);
    // Both sorted: merge to find members and their local positions.
    std::size_t a = 0, b = 0;
    while (a < list.size() && b < n) {
      if (list[a] < vertices[b]) {
        ++a;
      } else if (vertices[b] < list[a]) {
        b = static_cast<std::size_t>(std::lower_bound(vertices.begin() + static_cast<std::ptrdiff_t>(b), vertices.end(), list[a]) - vertices.begin());
      } else {
        adj.push_back(static_cast<VertexId>(b));
        ++a;
        ++b;
      }
    }
    offsets[i + 1] = adj.size();
  }
  std::vector<Label> labels;
  if (g.labeled()) {
    labels.reserve(n);
    for (VertexId v : vertices) labels.push_back(g.label(v));
  }
  return Graph(std::move(offsets), std::move(adj), std::move(labels), g.oriented());
}

EdgeTaskList build_edge_tasks(const Graph& g, bool reduce) {
  if (reduce && g.oriented())
    throw UsageError("edgelist reduction requested on an oriented graph");
  EdgeTaskList tasks;
  tasks.reduced = reduce;
  tasks.edges.reserve(reduce ? g.num_edges() / 2 : g.num_edges());
  for (VertexId u = 0; u < g.num_vertices(); ++u) {
    for (VertexId v : g.neighbors(u)) {
      if (reduce && !(u > v)) continue;
      tasks.edges.emplace_back(u, v);
    }
  }
  return tasks;
}

LabelStats label_frequency(const Graph& g) {
  if (!g.labeled()) throw UsageError("label_frequency: graph is unlabeled");
  LabelStats stats;
  stats.frequency.assign(g.num_labels(), 0);
  for (Label l : g.labels()) ++stats.frequency[l];
  return stats;
}

}  // namespace patminer
