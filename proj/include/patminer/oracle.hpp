#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "patminer/graph.hpp"
#include "patminer/pattern.hpp"

// Brute-force reference implementations. Slow on purpose; they use only the
// graph accessors and the Pattern value type.
namespace patminer::oracle {

// Refuse instances whose enumeration would visit more than this many
// connected vertex sets.
inline constexpr std::uint64_t kDefaultWorkLimit = 200'000'000;

// Sorted vertex set for vertex-induced patterns; sorted list of (min, max)
// edge pairs flattened for edge-induced ones.
using MatchKey = std::vector<VertexId>;

// Distinct occurrences of p in its own induced mode. The graph must be
// undirected. Throws CapacityError past the work limit.
std::uint64_t brute_force_count(const Graph& g, const Pattern& p, std::uint64_t work_limit = kDefaultWorkLimit);
std::uint64_t brute_force_count(const Graph& g, const Pattern& p, InducedMode mode,
                                std::uint64_t work_limit = kDefaultWorkLimit);

// All distinct occurrences, each as its canonical key, sorted.
std::vector<MatchKey> brute_force_matches(const Graph& g, const Pattern& p,
                                          std::uint64_t work_limit = kDefaultWorkLimit);

// Converts a match (data vertex per pattern vertex) to its canonical key.
MatchKey match_key(const Pattern& p, std::span<const VertexId> match);

// Injective maps of pattern vertices to data vertices that preserve edges
// (and non-edges, vertex-induced) and labels. No symmetry breaking.
std::uint64_t ordered_tuple_count(const Graph& g, const Pattern& p, std::uint64_t work_limit = kDefaultWorkLimit);

// Automorphism count by checking every permutation.
std::uint64_t automorphism_count(const Pattern& p);

// Minimum over (labels, upper-triangle adjacency bits) across all vertex
// permutations.
CanonicalForm canonical_form(const Pattern& p);

// Edge-induced patterns with 1..max_edges edges and minimum-image support
// >= min_support, keyed by canonical form.
std::map<CanonicalForm, std::uint64_t> brute_force_fsm(const Graph& g, int max_edges, std::uint64_t min_support,
                                                       std::uint64_t work_limit = kDefaultWorkLimit);

}  // namespace patminer::oracle
