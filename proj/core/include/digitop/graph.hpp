#pragma once

#include <cstdint>
#include <vector>

#include "digitop/image.hpp"

namespace digitop {

// Adjacency structure shared by the engines: digital images, abstract cycle
// domains and bounded path-space graphs all reduce to this. Irreflexive.
struct AdjGraph {
  int n = 0;
  std::vector<std::vector<int>> nbr;     // sorted
  std::vector<std::vector<int>> closed;  // sorted, includes self
  std::vector<std::uint64_t> bits;       // row-major adjacency bitset
  int words = 0;

  void finish();  // build closed lists and bitsets from nbr

  bool adj(int u, int v) const {
    return (bits[static_cast<size_t>(u) * words + (v >> 6)] >> (v & 63)) & 1u;
  }
  bool adj_or_eq(int u, int v) const { return u == v || adj(u, v); }
  int degree(int v) const { return static_cast<int>(nbr[v].size()); }

  static AdjGraph from_image(const DigitalImage& X);
  // Abstract cycle domain: m=1 a single vertex, m=2 one edge, m=3 a
  // triangle, m>=4 the m-cycle.
  static AdjGraph cycle(int m);

  std::vector<int> bfs_dist(int src) const;
  int component_count() const;
  bool connected() const { return component_count() == 1; }
  int diameter() const;  // max finite pairwise distance
  // Shortest path src -> dst as a vertex list; empty when unreachable.
  std::vector<int> shortest_path(int src, int dst) const;
};

}  // namespace digitop
