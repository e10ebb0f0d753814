#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace optomech {

/// Small undirected simple graph stored as adjacency bitmasks (at most 32 nodes).
class Graph {
 public:
  static constexpr int kMaxNodes = 32;

  explicit Graph(int nodes);
  Graph(int nodes, const std::vector<std::pair<int, int>>& edges);

  static Graph path(int nodes);
  static Graph cycle(int nodes);
  static Graph complete(int nodes);

  void add_edge(int a, int b);
  bool has_edge(int a, int b) const { return (adjacency_[static_cast<std::size_t>(a)] >> b) & 1u; }
  int nodes() const { return static_cast<int>(adjacency_.size()); }
  int degree(int v) const;
  int edge_count() const;
  bool connected() const;
  std::uint32_t neighbours(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }

 private:
  std::vector<std::uint32_t> adjacency_;
};

/// Exact isomorphism test: colour refinement on the disjoint union, then
/// backtracking over colour-compatible assignments.
bool isomorphic(const Graph& a, const Graph& b);

}  // namespace optomech
