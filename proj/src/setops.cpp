#include "patminer/setops.hpp"

#include <algorithm>
#include <bit>

#include "patminer/errors.hpp"
#include "patminer/graph.hpp"

namespace patminer {

namespace {

constexpr std::size_t kMergeRatio = 4;

VertexList clip(VertexList a, std::optional<VertexId> bound) {
  return bound ? bound_list(a, *bound) : a;
}

// First index in [lo, a.size()) with a[idx] >= x, galloping from lo.
std::size_t gallop(VertexList a, std::size_t lo, VertexId x) {
  std::size_t step = 1;
  std::size_t hi = lo;
  while (hi < a.size() && a[hi] < x) {
    lo = hi + 1;
    hi += step;
    step <<= 1;
  }
  hi = std::min(hi, a.size());
  return static_cast<std::size_t>(std::lower_bound(a.begin() + lo, a.begin() + hi, x) - a.begin());
}

// Calls emit(x) for every x in a ∩ b, ascending.
template <typename Emit>
void for_each_common(VertexList a, VertexList b, Emit&& emit) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return;
  if (b.size() < kMergeRatio * a.size()) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] < b[j])
        ++i;
      else if (b[j] < a[i])
        ++j;
      else {
        emit(a[i]);
        ++i;
        ++j;
      }
    }
    return;
  }
  std::size_t pos = 0;
  for (VertexId x : a) {
    pos = gallop(b, pos, x);
    if (pos == b.size()) return;
    if (b[pos] == x) emit(x);
  }
}

template <typename Emit>
void for_each_only_a(VertexList a, VertexList b, Emit&& emit) {
  if (b.empty()) {
    for (VertexId x : a) emit(x);
    return;
  }
  if (b.size() < kMergeRatio * a.size()) {
    std::size_t j = 0;
    for (VertexId x : a) {
      while (j < b.size() && b[j] < x) ++j;
      if (j == b.size() || b[j] != x) emit(x);
    }
    return;
  }
  std::size_t pos = 0;
  for (VertexId x : a) {
    pos = gallop(b, pos, x);
    if (pos == b.size() || b[pos] != x) emit(x);
  }
}

}  // namespace

VertexList bound_list(VertexList a, VertexId y) {
  return a.first(static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), y) - a.begin()));
}

bool contains(VertexList a, VertexId x) { return std::binary_search(a.begin(), a.end(), x); }

void intersect_into(VertexList a, VertexList b, std::vector<VertexId>& out, std::optional<VertexId> bound) {
  out.clear();
  for_each_common(clip(a, bound), clip(b, bound), [&](VertexId x) { out.push_back(x); });
}

std::vector<VertexId> intersect(VertexList a, VertexList b, std::optional<VertexId> bound) {
  std::vector<VertexId> out;
  intersect_into(a, b, out, bound);
  return out;
}

std::size_t intersect_count(VertexList a, VertexList b, std::optional<VertexId> bound) {
  std::size_t n = 0;
  for_each_common(clip(a, bound), clip(b, bound), [&](VertexId) { ++n; });
  return n;
}

void difference_into(VertexList a, VertexList b, std::vector<VertexId>& out, std::optional<VertexId> bound) {
  out.clear();
  for_each_only_a(clip(a, bound), clip(b, bound), [&](VertexId x) { out.push_back(x); });
}

std::vector<VertexId> difference(VertexList a, VertexList b, std::optional<VertexId> bound) {
  std::vector<VertexId> out;
  difference_into(a, b, out, bound);
  return out;
}

std::size_t difference_count(VertexList a, VertexList b, std::optional<VertexId> bound) {
  std::size_t n = 0;
  for_each_only_a(clip(a, bound), clip(b, bound), [&](VertexId) { ++n; });
  return n;
}

void retain_intersection(std::vector<VertexId>& inout, VertexList b) {
  std::size_t w = 0;
  // Output never overtakes input, so writing in place is safe.
  for_each_common(VertexList(inout), b, [&](VertexId x) { inout[w++] = x; });
  inout.resize(w);
}

void retain_difference(std::vector<VertexId>& inout, VertexList b) {
  std::size_t w = 0;
  for_each_only_a(VertexList(inout), b, [&](VertexId x) { inout[w++] = x; });
  inout.resize(w);
}

std::size_t LocalGraph::local_bound(VertexId v) const {
  return static_cast<std::size_t>(std::lower_bound(universe_.begin(), universe_.end(), v) - universe_.begin());
}

void LocalGraph::assign(const Graph& g, VertexList anchor) {
  for (std::size_t i = 1; i < anchor.size(); ++i)
    if (anchor[i - 1] >= anchor[i]) throw UsageError("local graph anchor set must be strictly ascending");
  universe_.assign(anchor.begin(), anchor.end());
  const std::size_t n = universe_.size();
  words_ = (n + 63) / 64;
  bits_.assign(n * words_, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (universe_[i] >= g.num_vertices()) throw UsageError("local graph anchor vertex out of range");
    std::uint64_t* row = bits_.data() + i * words_;
    const auto nbrs = g.neighbors(universe_[i]);
    // Walk the universe against the neighbor list; positions give local ids.
    if (nbrs.size() < kMergeRatio * n) {
      std::size_t p = 0;
      for (std::size_t j = 0; j < n; ++j) {
        while (p < nbrs.size() && nbrs[p] < universe_[j]) ++p;
        if (p == nbrs.size()) break;
        if (nbrs[p] == universe_[j]) row[j / 64] |= std::uint64_t{1} << (j % 64);
      }
    } else {
      std::size_t pos = 0;
      for (std::size_t j = 0; j < n; ++j) {
        pos = gallop(nbrs, pos, universe_[j]);
        if (pos == nbrs.size()) break;
        if (nbrs[pos] == universe_[j]) row[j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  }
}

LocalGraph build_local_graph(const Graph& g, VertexList anchor) {
  LocalGraph lg;
  lg.assign(g, anchor);
  return lg;
}

std::size_t popcount_below(std::span<const std::uint64_t> bits, std::size_t bound) {
  std::size_t n = 0;
  const std::size_t full = std::min(bound / 64, bits.size());
  for (std::size_t w = 0; w < full; ++w) n += std::popcount(bits[w]);
  if (full < bits.size() && bound % 64)
    n += std::popcount(bits[full] & ((std::uint64_t{1} << (bound % 64)) - 1));
  return n;
}

void mask_below(std::span<std::uint64_t> bits, std::size_t bound) {
  for (std::size_t w = 0; w < bits.size(); ++w) {
    const std::size_t lo = w * 64;
    if (bound <= lo)
      bits[w] = 0;
    else if (bound < lo + 64)
      bits[w] &= (std::uint64_t{1} << (bound - lo)) - 1;
  }
}

std::size_t bitmap_intersect_count(const LocalGraph& lg, std::size_t row_i, std::size_t row_j,
                                   std::optional<std::size_t> bound) {
  if (row_i >= lg.size() || row_j >= lg.size()) throw UsageError("bitmap row out of range");
  const auto a = lg.row(row_i);
  const auto b = lg.row(row_j);
  const std::size_t limit = bound ? std::min(*bound, lg.size()) : lg.size();
  std::size_t n = 0;
  const std::size_t full = limit / 64;
  for (std::size_t w = 0; w < full; ++w) n += std::popcount(a[w] & b[w]);
  if (limit % 64) n += std::popcount(a[full] & b[full] & ((std::uint64_t{1} << (limit % 64)) - 1));
  return n;
}

}  // namespace patminer
