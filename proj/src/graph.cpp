#include "optomech/graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "optomech/errors.hpp"

namespace optomech {

Graph::Graph(int nodes) {
  if (nodes < 0 || nodes > kMaxNodes) throw BadIndices("graph size out of range");
  adjacency_.assign(static_cast<std::size_t>(nodes), 0u);
}

Graph::Graph(int nodes, const std::vector<std::pair<int, int>>& edges) : Graph(nodes) {
  for (auto [a, b] : edges) add_edge(a, b);
}

Graph Graph::path(int nodes) {
  Graph g(nodes);
  for (int v = 0; v + 1 < nodes; ++v) g.add_edge(v, v + 1);
  return g;
}

Graph Graph::cycle(int nodes) {
  Graph g = path(nodes);
  if (nodes > 2) g.add_edge(nodes - 1, 0);
  return g;
}

Graph Graph::complete(int nodes) {
  Graph g(nodes);
  for (int a = 0; a < nodes; ++a)
    for (int b = a + 1; b < nodes; ++b) g.add_edge(a, b);
  return g;
}

void Graph::add_edge(int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= nodes() || b >= nodes())
    throw BadIndices("invalid edge endpoints");
  adjacency_[static_cast<std::size_t>(a)] |= 1u << b;
  adjacency_[static_cast<std::size_t>(b)] |= 1u << a;
}

int Graph::degree(int v) const { return std::popcount(neighbours(v)); }

int Graph::edge_count() const {
  int twice = 0;
  for (int v = 0; v < nodes(); ++v) twice += degree(v);
  return twice / 2;
}

bool Graph::connected() const {
  if (nodes() == 0) return true;
  std::uint32_t seen = 1u;
  std::uint32_t frontier = 1u;
  while (frontier) {
    std::uint32_t next = 0u;
    for (int v = 0; v < nodes(); ++v)
      if ((frontier >> v) & 1u) next |= neighbours(v);
    frontier = next & ~seen;
    seen |= next;
  }
  return std::popcount(seen) == nodes();
}

namespace {

// 1-WL colours computed jointly so colour ids are comparable across graphs.
std::vector<int> refine_colours(const Graph& a, const Graph& b) {
  const int na = a.nodes();
  const int n = na + b.nodes();
  auto neighbours_of = [&](int v) {
    std::vector<int> out;
    const Graph& g = v < na ? a : b;
    const int base = v < na ? 0 : na;
    const std::uint32_t mask = g.neighbours(v - base);
    for (int u = 0; u < g.nodes(); ++u)
      if ((mask >> u) & 1u) out.push_back(base + u);
    return out;
  };

  std::vector<int> colour(static_cast<std::size_t>(n), 0);
  for (int round = 0; round <= n; ++round) {
    std::map<std::pair<int, std::vector<int>>, int> signatures;
    std::vector<std::pair<int, std::vector<int>>> keys;
    keys.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      std::vector<int> around;
      for (int u : neighbours_of(v)) around.push_back(colour[static_cast<std::size_t>(u)]);
      std::sort(around.begin(), around.end());
      keys.emplace_back(colour[static_cast<std::size_t>(v)], std::move(around));
      signatures.emplace(keys.back(), 0);
    }
    int next_id = 0;
    for (auto& [key, id] : signatures) id = next_id++;
    std::vector<int> next(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) next[static_cast<std::size_t>(v)] = signatures[keys[static_cast<std::size_t>(v)]];
    const bool stable = std::set<int>(colour.begin(), colour.end()).size() ==
                        static_cast<std::size_t>(next_id);
    colour = std::move(next);
    if (stable && round > 0) break;
  }
  return colour;
}

bool extend(const Graph& a, const Graph& b, const std::vector<int>& colour, std::vector<int>& map,
            std::uint32_t used, int v) {
  const int na = a.nodes();
  if (v == na) return true;
  for (int w = 0; w < b.nodes(); ++w) {
    if ((used >> w) & 1u) continue;
    if (colour[static_cast<std::size_t>(v)] != colour[static_cast<std::size_t>(na + w)]) continue;
    bool consistent = true;
    for (int u = 0; u < v && consistent; ++u)
      consistent = a.has_edge(u, v) == b.has_edge(map[static_cast<std::size_t>(u)], w);
    if (!consistent) continue;
    map[static_cast<std::size_t>(v)] = w;
    if (extend(a, b, colour, map, used | (1u << w), v + 1)) return true;
  }
  return false;
}

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.nodes() != b.nodes() || a.edge_count() != b.edge_count()) return false;
  const std::vector<int> colour = refine_colours(a, b);
  const auto na = static_cast<std::ptrdiff_t>(a.nodes());
  std::vector<int> ca(colour.begin(), colour.begin() + na);
  std::vector<int> cb(colour.begin() + na, colour.end());
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  if (ca != cb) return false;
  std::vector<int> map(static_cast<std::size_t>(a.nodes()), -1);
  return extend(a, b, colour, map, 0u, 0);
}

}  // namespace optomech
