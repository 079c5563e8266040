#include "digitop/curves.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace digitop {

std::optional<CurveWitness> detect_simple_closed_curve(const DigitalImage& X) {
  int n = X.size();
  if (n < 4) return std::nullopt;
  for (int i = 0; i < n; ++i)
    if (X.neighbors()[i].size() != 2) return std::nullopt;
  // Walk the unique cycle from the lex-least point; degree 2 everywhere means
  // the graph is a disjoint union of cycles, so one cycle == all points.
  std::vector<int> order;
  order.reserve(n);
  int start = 0;
  int prev = -1, cur = start;
  do {
    order.push_back(cur);
    const auto& nb = X.neighbors()[cur];
    int next = (nb[0] == prev) ? nb[1] : nb[0];
    prev = cur;
    cur = next;
  } while (cur != start && static_cast<int>(order.size()) <= n);
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  // Canonical direction: second point smaller than last.
  if (order[1] > order[n - 1]) {
    std::reverse(order.begin() + 1, order.end());
  }
  return CurveWitness{X, std::move(order)};
}

namespace {

DigitalImage staircase_cycle_kind8(int m) {
  // (0,0), (1,1)..(k,1), (k+1,0), (k,-1)..(1,-1) with k = m/2 - 1.
  // m=4 gives the diamond, m=6 the documented hexagon.
  int k = m / 2 - 1;
  std::vector<Point> pts;
  pts.push_back({0, 0});
  for (int i = 1; i <= k; ++i) pts.push_back({i, 1});
  pts.push_back({k + 1, 0});
  for (int i = k; i >= 1; --i) pts.push_back({i, -1});
  return DigitalImage(std::move(pts), AdjacencyKind::from_name(8));
}

DigitalImage rectangle_cycle_kind4(int m) {
  if (m == 4) {
    return DigitalImage({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, AdjacencyKind::from_name(4));
  }
  // Boundary of a w x 3 point grid, w = m/2 - 1: 2w + 2 = m points.
  int w = m / 2 - 1;
  std::vector<Point> pts;
  for (int x = 0; x < w; ++x)
    for (int y = 0; y < 3; ++y)
      if (x == 0 || x == w - 1 || y == 0 || y == 2) pts.push_back({x, y});
  return DigitalImage(std::move(pts), AdjacencyKind::from_name(4));
}

[[noreturn]] void no_such_curve(int m, const AdjacencyKind& kind) {
  throw emptiness_error("no simple closed curve with " + std::to_string(m) +
                        " points exists for adjacency " +
                        std::to_string(kind.name()));
}

}  // namespace

DigitalImage generate_cycle(int m, const AdjacencyKind& kind) {
  int name = kind.name();
  if (name != 4 && name != 8)
    throw input_error("generate_cycle supports adjacency 4 or 8");
  if (m < 4)
    throw input_error("a simple closed curve needs at least 4 points");
  DigitalImage result({{0, 0}}, kind);
  if (name == 8) {
    if (m == 5) no_such_curve(m, kind);
    if (m % 2 == 0) {
      result = staircase_cycle_kind8(m);
    } else {
      // No closed-form family for odd m; take the first canonical search hit.
      auto found = search_cycles(m, kind, m);
      if (found.empty()) no_such_curve(m, kind);
      result = found.front();
    }
  } else {
    if (m % 2 == 1 || m == 6) no_such_curve(m, kind);
    result = rectangle_cycle_kind4(m);
  }
  auto witness = detect_simple_closed_curve(result);
  if (!witness || witness->m() != m)
    throw synthesis_error("generated point set failed curve verification");
  return result;
}

std::vector<DigitalImage> search_cycles(int m, const AdjacencyKind& kind,
                                        int window, std::uint64_t node_cap) {
  if (m < 4) throw input_error("a simple closed curve needs at least 4 points");
  if (window < m)
    throw input_error("search window must be at least m for a conclusive search");

  // Universe: all points of the window^dim box, lex order.
  std::vector<Point> cells;
  {
    Point p(kind.dim, 0);
    while (true) {
      cells.push_back(p);
      int c = kind.dim - 1;
      while (c >= 0 && ++p[c] == window) p[c--] = 0;
      if (c < 0) break;
    }
  }
  std::sort(cells.begin(), cells.end());
  int total = static_cast<int>(cells.size());
  std::vector<std::vector<int>> nb(total);
  for (int i = 0; i < total; ++i)
    for (int j = i + 1; j < total; ++j)
      if (adjacent(cells[i], cells[j], kind)) {
        nb[i].push_back(j);
        nb[j].push_back(i);
      }

  std::uint64_t nodes = 0;
  std::set<std::vector<Point>> canon;
  std::vector<int> path;
  std::vector<char> used(total, 0);

  // DFS for chordless cycles whose lex-least vertex is path[0]; direction is
  // canonicalized by path[1] < path[m-1]. Dedupe by translating the lex-least
  // point to the origin.
  auto emit = [&](const std::vector<int>& cycle) {
    std::vector<Point> pts;
    pts.reserve(m);
    const Point& base = cells[cycle[0]];
    for (int idx : cycle) {
      Point p = cells[idx];
      for (int c = 0; c < kind.dim; ++c) p[c] -= base[c];
      pts.push_back(std::move(p));
    }
    std::sort(pts.begin(), pts.end());
    canon.insert(std::move(pts));
  };

  auto chordless_ok = [&](int v, int depth) {
    // v may touch only its cycle predecessor (and the start on the last step).
    for (int d = 0; d + 1 < depth; ++d) {
      bool is_start = (d == 0);
      bool closing = (depth == m - 1) && is_start;
      if (closing) continue;
      if (std::binary_search(nb[v].begin(), nb[v].end(), path[d])) return false;
    }
    return true;
  };

  auto dfs = [&](auto&& self, int depth) -> void {
    if (++nodes > node_cap)
      throw resource_limit_error("cycle search exceeded node cap (" +
                                 std::to_string(node_cap) + ")");
    if (depth == m) {
      int last = path.back();
      if (std::binary_search(nb[last].begin(), nb[last].end(), path[0]) &&
          path[1] < path[m - 1])
        emit(path);
      return;
    }
    int prev = path.back();
    for (int v : nb[prev]) {
      if (used[v] || v < path[0]) continue;  // path[0] stays lex-least
      if (!chordless_ok(v, depth)) continue;
      used[v] = 1;
      path.push_back(v);
      self(self, depth + 1);
      path.pop_back();
      used[v] = 0;
    }
  };

  for (int s = 0; s < total; ++s) {
    path.assign(1, s);
    used.assign(total, 0);
    used[s] = 1;
    dfs(dfs, 1);
  }

  std::vector<DigitalImage> out;
  out.reserve(canon.size());
  for (const auto& pts : canon) {
    DigitalImage img(pts, kind);
    if (detect_simple_closed_curve(img)) out.push_back(std::move(img));
  }
  return out;
}

}  // namespace digitop
