#include "digitop/loops.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "digitop/graph.hpp"

namespace digitop {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool loops_close(const AdjGraph& gx, const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t t = 0; t < a.size(); ++t)
    if (!gx.adj_or_eq(a[t], b[t])) return false;
  return true;
}

}  // namespace

std::vector<LoopMap> enumerate_loops(const DigitalImage& X, int m, std::uint64_t cap) {
  if (m < 1) throw input_error("enumerate_loops requires m >= 1");
  AdjGraph gx = AdjGraph::from_image(X);
  std::vector<LoopMap> out;
  std::vector<int> vals(m);
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, int t) -> void {
    if (t == m) {
      if (++count > cap)
        throw resource_limit_error("loop cap exceeded after " + std::to_string(cap) +
                                   " loops");
      out.push_back({m, vals});
      return;
    }
    if (t == 0) {
      for (int v = 0; v < gx.n; ++v) {
        vals[0] = v;
        self(self, 1);
      }
      return;
    }
    for (int v : gx.closed[vals[t - 1]]) {
      if (t == m - 1 && m > 2 && !gx.adj_or_eq(vals[0], v)) continue;
      vals[t] = v;
      self(self, t + 1);
    }
  };
  rec(rec, 0);
  return out;
}

bool is_simple_loop(const DigitalImage& X, const LoopMap& loop) {
  int m = loop.m;
  if (m < 4) return false;
  AdjGraph gx = AdjGraph::from_image(X);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (loop.values[i] == loop.values[j]) return false;
      bool consecutive = (j == i + 1) || (i == 0 && j == m - 1);
      if (gx.adj(loop.values[i], loop.values[j]) != consecutive) return false;
    }
  return true;
}

LoopClassTable count_loop_classes(const DigitalImage& X, int m, std::uint64_t budget) {
  LoopClassTable table;
  table.m = m;
  table.stats.budget = budget;

  std::vector<LoopMap> loops;
  try {
    loops = enumerate_loops(X, m, budget);
  } catch (const resource_limit_error& e) {
    table.definite = false;
    table.lower = 1;
    table.upper = 0;
    table.stats.note = std::string("enumeration incomplete: ") + e.what();
    return table;
  }
  int T = static_cast<int>(loops.size());
  table.total = loops.size();
  table.stats.visited = loops.size();
  AdjGraph gx = AdjGraph::from_image(X);

  UnionFind uf(T);
  if (T <= 4000) {
    // Full pairwise scan: exact map-graph edges.
    for (int i = 0; i < T; ++i)
      for (int j = i + 1; j < T; ++j)
        if (loops_close(gx, loops[i].values, loops[j].values)) uf.unite(i, j);
  } else {
    // Per-loop neighbor enumeration through the map engine; every neighbor is
    // itself an enumerated loop, found by binary search on the sorted list.
    AdjGraph gm = AdjGraph::cycle(m);
    MapGraphEngine engine(gm, gx, budget);
    std::uint64_t work = 0;
    auto locate = [&](const std::vector<int>& v) {
      int lo = 0, hi = T;
      while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (loops[mid].values < v)
          lo = mid + 1;
        else
          hi = mid;
      }
      return lo;
    };
    for (int i = 0; i < T; ++i) {
      for (const auto& nb : engine.neighbors(loops[i].values)) {
        if (++work > budget) {
          table.definite = false;
          table.lower = 1;
          table.upper = T;
          table.stats.note = "class merging stopped early: neighbor budget exhausted";
          table.stats.visited += work;
          return table;
        }
        int j = locate(nb);
        uf.unite(i, j);
      }
    }
    table.stats.visited += work;
  }

  std::vector<int> root_to_class(T, -1);
  int classes = 0;
  table.class_of.resize(T);
  for (int i = 0; i < T; ++i) {
    int r = uf.find(i);
    if (root_to_class[r] < 0) {
      root_to_class[r] = classes++;
      table.representatives.push_back(loops[i]);  // lex-least: enumeration is lex-sorted
    }
    table.class_of[i] = root_to_class[r];
  }
  table.definite = true;
  table.count = classes;
  table.lower = table.upper = classes;
  table.stats.exhausted = true;
  return table;
}

}  // namespace digitop
