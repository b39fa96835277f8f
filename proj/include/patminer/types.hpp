#pragma once

#include <cstdint>
#include <string_view>

namespace patminer {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint64_t;
using Label = std::uint32_t;

inline constexpr int kMaxPatternSize = 8;
inline constexpr VertexId kInvalidVertex = ~VertexId{0};

enum class InducedMode { vertex, edge };
enum class Granularity { vertex, edge };
enum class Mode { list, count };

constexpr std::string_view to_string(InducedMode m) {
  return m == InducedMode::vertex ? "vertex-induced" : "edge-induced";
}
constexpr std::string_view to_string(Granularity g) {
  return g == Granularity::vertex ? "vertex" : "edge";
}
constexpr std::string_view to_string(Mode m) {
  return m == Mode::list ? "list" : "count";
}

}  // namespace patminer
