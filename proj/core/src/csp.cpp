#include "digitop/csp.hpp"

#include <algorithm>
#include <cstring>

#include "digitop/graph.hpp"

namespace digitop {

namespace {

struct Domain {
  int walk_len = 0;              // L+1
  std::vector<int> flat;         // walks back to back
  std::vector<int> order;        // value ids in try order: (part, walk) pairs
  int walk_count() const { return static_cast<int>(flat.size()) / walk_len; }
  const int* walk(int w) const { return flat.data() + static_cast<size_t>(w) * walk_len; }
};

// Enumerate every valid walk for a variable, lexicographically. Pruning uses
// exact distances: a partial walk dies when the endpoint, or some unvisited
// middle anchor followed by the endpoint, cannot fit in the remaining steps.
bool enumerate_walks(const AdjGraph& g, const std::vector<std::vector<int>>& dist,
                     const SectionCspVar& var, int L, std::uint64_t cap,
                     std::uint64_t& produced, Domain& dom) {
  dom.walk_len = L + 1;
  int start = var.anchors.front(), end = var.anchors.back();
  std::vector<int> middles(var.anchors.begin() + 1, var.anchors.end() - 1);
  std::sort(middles.begin(), middles.end());
  middles.erase(std::unique(middles.begin(), middles.end()), middles.end());
  middles.erase(std::remove_if(middles.begin(), middles.end(),
                               [&](int q) { return q == start || q == end; }),
                middles.end());
  int k = static_cast<int>(middles.size());
  std::vector<int> w(L + 1);
  bool capped = false;

  auto feasible = [&](int p, int t, unsigned visited) {
    int rem = L - t;
    if (dist[p][end] > rem) return false;
    for (int i = 0; i < k; ++i) {
      if (visited & (1u << i)) continue;
      if (dist[p][middles[i]] + dist[middles[i]][end] > rem) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, int t, unsigned visited) -> void {
    if (capped) return;
    if (t == L) {
      if (w[L] != end || visited != (k ? (1u << k) - 1 : 0u)) return;
      if (++produced > cap) {
        capped = true;
        return;
      }
      dom.flat.insert(dom.flat.end(), w.begin(), w.end());
      return;
    }
    for (int q : g.closed[w[t]]) {
      unsigned nv = visited;
      for (int i = 0; i < k; ++i)
        if (middles[i] == q) nv |= (1u << i);
      if (!feasible(q, t + 1, nv)) continue;
      w[t + 1] = q;
      self(self, t + 1, nv);
      if (capped) return;
    }
  };

  // middles equal to the start or end were stripped above, so nothing is
  // pre-visited at t = 0
  if (L == 0) {
    if (start == end && k == 0) {
      if (++produced > cap)
        capped = true;
      else
        dom.flat.push_back(start);
    }
  } else if (feasible(start, 0, 0u)) {
    w[0] = start;
    rec(rec, 0, 0u);
  }
  return !capped;
}

}  // namespace

SectionCspResult solve_section_csp(const SectionCsp& problem) {
  SectionCspResult res;
  res.stats.budget = problem.node_budget;
  const DigitalImage& X = *problem.image;
  if (X.size() > 64) throw input_error("section CSP supports at most 64 points");
  AdjGraph g = AdjGraph::from_image(X);
  int V = static_cast<int>(problem.vars.size());
  int L = problem.L;

  std::vector<std::vector<int>> dist(g.n);
  for (int v = 0; v < g.n; ++v) dist[v] = g.bfs_dist(v);

  // Closed-neighborhood masks of single points, for layer propagation.
  std::vector<std::uint64_t> nmask(g.n);
  for (int v = 0; v < g.n; ++v) {
    std::uint64_t m = 1ull << v;
    for (int u : g.nbr[v]) m |= 1ull << u;
    nmask[v] = m;
  }

  // Domains.
  std::vector<Domain> dom(V);
  std::uint64_t produced = 0;
  for (int v = 0; v < V; ++v) {
    if (!enumerate_walks(g, dist, problem.vars[v], L, problem.domain_cap, produced,
                         dom[v])) {
      res.domain_capped = true;
      break;
    }
    if (dom[v].walk_count() == 0) {  // walks do not depend on parts
      res.verdict = Verdict::No;
      res.stats.exhausted = true;
      res.stats.note = "a variable has no valid walk at this length";
      return res;
    }
  }
  if (res.domain_capped) {
    res.verdict = Verdict::Unknown;
    res.stats.note = "walk domain cap exceeded";
    return res;
  }

  std::vector<std::vector<int>> adj(V);
  for (auto [u, v] : problem.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  // Layer propagation (parts == 1 only: with parts the edge constraint is
  // conditional, so point-level pruning would be unsound).
  if (problem.parts == 1 && V > 0) {
    std::vector<std::vector<std::uint64_t>> layer(V,
                                                  std::vector<std::uint64_t>(L + 1, 0));
    auto recompute = [&](int v) {
      std::fill(layer[v].begin(), layer[v].end(), 0);
      const Domain& d = dom[v];
      for (int w = 0; w < d.walk_count(); ++w) {
        const int* wk = d.walk(w);
        for (int t = 0; t <= L; ++t) layer[v][t] |= 1ull << wk[t];
      }
    };
    for (int v = 0; v < V; ++v) recompute(v);
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ < 8) {
      changed = false;
      for (auto [u, v] : problem.edges) {
        for (int dirswap = 0; dirswap < 2; ++dirswap) {
          int a = dirswap ? v : u, b = dirswap ? u : v;
          // positions of a must lie in N[layer(b)]
          std::vector<std::uint64_t> allow(L + 1, 0);
          for (int t = 0; t <= L; ++t) {
            std::uint64_t m = layer[b][t];
            while (m) {
              int p = __builtin_ctzll(m);
              m &= m - 1;
              allow[t] |= nmask[p];
            }
          }
          Domain& d = dom[a];
          std::vector<int> keep;
          keep.reserve(d.flat.size());
          bool removed = false;
          for (int w = 0; w < d.walk_count(); ++w) {
            const int* wk = d.walk(w);
            bool ok = true;
            for (int t = 0; t <= L && ok; ++t)
              if (!((allow[t] >> wk[t]) & 1)) ok = false;
            if (ok)
              keep.insert(keep.end(), wk, wk + L + 1);
            else
              removed = true;
          }
          if (removed) {
            d.flat = std::move(keep);
            if (d.walk_count() == 0) {
              res.verdict = Verdict::No;
              res.stats.exhausted = true;
              res.stats.note = "layer propagation emptied a domain";
              return res;
            }
            recompute(a);
            changed = true;
          }
        }
      }
    }
  }

  // Value order per variable: preferred part first, seed walk first, then
  // walks by movement count (padded geodesics before wandering walks, which
  // concentrates the early search on mutually close assignments).
  auto build_order = [&](int v) {
    Domain& d = dom[v];
    int W = d.walk_count();
    int seed_idx = -1;
    if (!problem.vars[v].seed.empty()) {
      for (int w = 0; w < W; ++w)
        if (std::equal(problem.vars[v].seed.begin(), problem.vars[v].seed.end(),
                       d.walk(w))) {
          seed_idx = w;
          break;
        }
    }
    std::vector<int> by_movement(W);
    for (int w = 0; w < W; ++w) by_movement[w] = w;
    std::vector<int> moves(W, 0);
    for (int w = 0; w < W; ++w) {
      const int* wk = d.walk(w);
      for (int t = 0; t < L; ++t) moves[w] += wk[t] != wk[t + 1];
    }
    std::stable_sort(by_movement.begin(), by_movement.end(),
                     [&moves](int a, int b) { return moves[a] < moves[b]; });
    int pref = problem.part_preference.empty() ? 0 : problem.part_preference[v];
    int pin = problem.pin_part.empty() ? -1 : problem.pin_part[v];
    d.order.clear();
    for (int round = 0; round < problem.parts; ++round) {
      int part = (round == 0) ? pref : (pref + round) % problem.parts;
      if (pin != -1 && part != pin) continue;
      if (seed_idx >= 0) d.order.push_back(part * W + seed_idx);
      for (int w : by_movement)
        if (w != seed_idx) d.order.push_back(part * W + w);
    }
  };
  for (int v = 0; v < V; ++v) build_order(v);

  // Backtracking with forward checking. alive[v] holds positions into
  // dom[v].order still consistent with all assigned neighbors.
  std::vector<std::vector<int>> alive(V);
  for (int v = 0; v < V; ++v) {
    alive[v].resize(dom[v].order.size());
    for (size_t i = 0; i < alive[v].size(); ++i) alive[v][i] = static_cast<int>(i);
  }
  std::vector<int> assigned(V, -1);  // value id or -1
  struct TrailEntry {
    int var;
    std::vector<int> removed;
  };
  std::vector<std::vector<TrailEntry>> trail;
  std::uint64_t nodes = 0;
  bool aborted = false;

  auto walk_of_value = [&](int v, int value) { return dom[v].walk(value % dom[v].walk_count()); };
  auto part_of_value = [&](int v, int value) { return value / dom[v].walk_count(); };

  auto close_walks = [&](const int* a, const int* b) {
    for (int t = 0; t <= L; ++t)
      if (!g.adj_or_eq(a[t], b[t])) return false;
    return true;
  };

  auto rec = [&](auto&& self) -> bool {
    // Pick the unassigned variable with fewest alive values, preferring the
    // constraint-connected frontier (a variable with an assigned neighbor) so
    // forward checking keeps pruning instead of opening fresh regions.
    int best = -1;
    size_t best_sz = 0;
    bool best_frontier = false;
    for (int v = 0; v < V; ++v) {
      if (assigned[v] != -1) continue;
      bool frontier = false;
      for (int u : adj[v])
        if (assigned[u] != -1) {
          frontier = true;
          break;
        }
      if (best == -1 || std::pair(!frontier, alive[v].size()) <
                            std::pair(!best_frontier, best_sz)) {
        best = v;
        best_sz = alive[v].size();
        best_frontier = frontier;
      }
    }
    if (best == -1) return true;  // all assigned
    int v = best;
    std::vector<int> options(alive[v]);
    for (int pos : options) {
      int value = dom[v].order[pos];
      if (++nodes > problem.node_budget) {
        aborted = true;
        return false;
      }
      assigned[v] = value;
      const int* wv = walk_of_value(v, value);
      int pv = part_of_value(v, value);
      trail.emplace_back();
      bool dead = false;
      for (int u : adj[v]) {
        if (assigned[u] != -1) continue;
        TrailEntry te{u, {}};
        auto& au = alive[u];
        size_t w = 0;
        for (size_t r = 0; r < au.size(); ++r) {
          int uval = dom[u].order[au[r]];
          bool ok = part_of_value(u, uval) != pv ||
                    close_walks(walk_of_value(u, uval), wv);
          if (ok)
            au[w++] = au[r];
          else
            te.removed.push_back(au[r]);
        }
        if (!te.removed.empty()) {
          au.resize(w);
          trail.back().push_back(std::move(te));
        }
        if (au.empty()) {
          dead = true;
          break;
        }
      }
      if (!dead && self(self)) return true;
      // undo
      for (auto& te : trail.back())
        for (int r : te.removed) alive[te.var].push_back(r);
      trail.pop_back();
      assigned[v] = -1;
      if (aborted) return false;
    }
    return false;
  };

  bool sat = V == 0 ? true : rec(rec);
  res.stats.visited = nodes;
  if (sat) {
    res.verdict = Verdict::Yes;
    res.walks.resize(V);
    res.part_of.resize(V);
    for (int v = 0; v < V; ++v) {
      const int* w = walk_of_value(v, assigned[v]);
      res.walks[v].assign(w, w + L + 1);
      res.part_of[v] = part_of_value(v, assigned[v]);
    }
  } else if (aborted) {
    res.verdict = Verdict::Unknown;
    res.stats.note = "node budget exhausted";
  } else {
    res.verdict = Verdict::No;
    res.stats.exhausted = true;
  }
  return res;
}

}  // namespace digitop
