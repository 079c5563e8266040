#include "digitop/graph.hpp"

#include <algorithm>
#include <deque>

namespace digitop {

void AdjGraph::finish() {
  n = static_cast<int>(nbr.size());
  closed.assign(n, {});
  for (int v = 0; v < n; ++v) {
    std::sort(nbr[v].begin(), nbr[v].end());
    closed[v] = nbr[v];
    closed[v].insert(std::lower_bound(closed[v].begin(), closed[v].end(), v), v);
  }
  words = (n + 63) / 64;
  bits.assign(static_cast<size_t>(n) * words, 0);
  for (int v = 0; v < n; ++v)
    for (int u : nbr[v])
      bits[static_cast<size_t>(v) * words + (u >> 6)] |= 1ull << (u & 63);
}

AdjGraph AdjGraph::from_image(const DigitalImage& X) {
  AdjGraph g;
  g.nbr = X.neighbors();
  g.finish();
  return g;
}

AdjGraph AdjGraph::cycle(int m) {
  AdjGraph g;
  g.nbr.assign(m, {});
  if (m == 2) {
    g.nbr[0] = {1};
    g.nbr[1] = {0};
  } else if (m >= 3) {
    for (int i = 0; i < m; ++i) {
      g.nbr[i].push_back((i + 1) % m);
      g.nbr[i].push_back((i + m - 1) % m);
    }
  }
  g.finish();
  return g;
}

std::vector<int> AdjGraph::bfs_dist(int src) const {
  std::vector<int> dist(n, -1);
  std::deque<int> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : nbr[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  return dist;
}

int AdjGraph::component_count() const {
  std::vector<char> seen(n, 0);
  int count = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++count;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : nbr[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
  }
  return count;
}

int AdjGraph::diameter() const {
  int d = 0;
  for (int v = 0; v < n; ++v)
    for (int x : bfs_dist(v)) d = std::max(d, x);
  return d;
}

std::vector<int> AdjGraph::shortest_path(int src, int dst) const {
  std::vector<int> parent(n, -2);
  std::deque<int> q{src};
  parent[src] = -1;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    if (u == dst) break;
    for (int v : nbr[u])
      if (parent[v] == -2) {
        parent[v] = u;
        q.push_back(v);
      }
  }
  if (parent[dst] == -2) return {};
  std::vector<int> path;
  for (int v = dst; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace digitop
