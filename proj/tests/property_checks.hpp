// Property checks shared by the standalone property_suite binary and the
// acceptance runner: homotopy-relation equivalence laws over complete map
// spaces, planner mutation detection, serialization round-trips, rotation
// non-rigidity of generated cycles, and order-partition structure.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "digitop/corpus.hpp"
#include "digitop/curves.hpp"
#include "digitop/higher.hpp"
#include "digitop/image.hpp"
#include "digitop/morph.hpp"
#include "digitop/planner.hpp"

namespace digitop_props {

using namespace digitop;

struct PropResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

namespace detail {

inline std::vector<std::vector<int>> all_continuous_self_maps(const DigitalImage& X) {
  int n = X.size();
  std::vector<std::vector<int>> maps;
  std::vector<int> f(n, 0);
  while (true) {
    if (is_continuous({X, X, f})) maps.push_back(f);
    int i = n - 1;
    while (i >= 0 && ++f[i] == n) f[i--] = 0;
    if (i < 0) break;
  }
  return maps;
}

inline bool maps_close(const DigitalImage& X, const std::vector<int>& f,
                       const std::vector<int>& g) {
  for (int i = 0; i < X.size(); ++i)
    if (f[i] != g[i] && !X.adjacent_indices(f[i], g[i])) return false;
  return true;
}

struct UF {
  std::vector<int> p;
  explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace detail

// The homotopy relation agrees with the connected-component partition of the
// full map graph on every image, which certifies reflexivity, symmetry and
// transitivity at once: a relation that coincides with a partition is an
// equivalence relation.
inline PropResult homotopy_equivalence_laws() {
  PropResult r{"homotopy relation is an equivalence (all self-maps, <=4-point images)"};
  int images = 0, maps_total = 0, checks = 0;
  for (int kind : {8, 4}) {
    for (const auto& X : enumerate_corpus(AdjacencyKind::from_name(kind), 3, 4)) {
      auto maps = detail::all_continuous_self_maps(X);
      int M = static_cast<int>(maps.size());
      detail::UF uf(M);
      std::vector<std::pair<int, int>> edges;
      for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j)
          if (detail::maps_close(X, maps[i], maps[j])) {
            uf.unite(i, j);
            if (edges.size() < 60) edges.emplace_back(i, j);
          }
      auto mk = [&](int i) { return DigitalMap{X, X, maps[i]}; };
      // reflexivity on every map
      for (int i = 0; i < M; ++i)
        if (!homotopic(mk(i), mk(i)).yes()) {
          r.pass = false;
          r.detail = "reflexivity failed";
          return r;
        }
      checks += M;
      // symmetry along sampled edges
      for (auto [i, j] : edges) {
        if (!homotopic(mk(i), mk(j)).yes() || !homotopic(mk(j), mk(i)).yes()) {
          r.pass = false;
          r.detail = "symmetry failed on a close pair";
          return r;
        }
        checks += 2;
      }
      // cross-class representatives must be non-homotopic, same-class ones
      // homotopic; with the partition this pins down transitivity
      std::vector<int> reps;
      for (int i = 0; i < M; ++i)
        if (uf.find(i) == i) reps.push_back(i);
      for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
          if (!homotopic(mk(reps[a]), mk(reps[b])).no()) {
            r.pass = false;
            r.detail = "distinct classes reported homotopic";
            return r;
          }
          ++checks;
        }
      ++images;
      maps_total += M;
    }
  }
  r.detail = std::to_string(images) + " images, " + std::to_string(maps_total) +
             " maps, " + std::to_string(checks) + " relation checks";
  return r;
}

// Every injected planner violation must be detected by verification.
inline PropResult planner_mutation_detection() {
  PropResult r{"pairwise planner verification detects every injected violation"};
  DigitalImage X = generate_cycle(6, AdjacencyKind::from_name(8));
  auto w = detect_simple_closed_curve(X);
  MotionPlanner plan = synthesize_cycle_planner(*w);
  if (!verify_planner(X, plan).ok) {
    r.pass = false;
    r.detail = "baseline planner failed verification";
    return r;
  }
  int injected = 0, detected = 0;
  auto expect_bad = [&](MotionPlanner p) {
    ++injected;
    if (!verify_planner(X, p).ok) ++detected;
  };

  for (std::size_t j = 0; j < plan.parts.size(); ++j) {
    MotionPlanner m1 = plan;  // dropped entry -> coverage hole
    m1.parts[j].pop_back();
    expect_bad(std::move(m1));
  }
  for (int e : {0, 3, 7}) {  // corrupted endpoints
    MotionPlanner m2 = plan;
    auto& entry = m2.parts[0][e];
    entry.walk.back() = (entry.walk.back() + 1) % X.size();
    expect_bad(std::move(m2));
    MotionPlanner m3 = plan;
    auto& e3 = m3.parts[0][e];
    e3.walk.front() = (e3.walk.front() + 1) % X.size();
    expect_bad(std::move(m3));
  }
  {
    MotionPlanner m4 = plan;  // non-adjacent interior jump
    auto& wk = m4.parts[0][2].walk;
    int a = wk[0];
    for (int cand = 0; cand < X.size(); ++cand)
      if (cand != a && !X.adjacent_indices(cand, a)) {
        wk[1] = cand;
        break;
      }
    expect_bad(std::move(m4));
  }
  {
    MotionPlanner m5 = plan;  // duplicated pair inside one part
    m5.parts[0].push_back(m5.parts[0].front());
    expect_bad(std::move(m5));
  }
  {
    MotionPlanner m6 = plan;  // wrong walk length
    m6.parts[0][0].walk.push_back(m6.parts[0][0].walk.back());
    expect_bad(std::move(m6));
  }
  {
    // reroute one pair the long way: walk stays valid and anchored but is no
    // longer pointwise close to its product-adjacent neighbors
    MotionPlanner m7 = plan;
    std::vector<int> pos(X.size());
    for (int t = 0; t < w->m(); ++t) pos[w->ordering[t]] = t;
    for (auto& entry : m7.parts[0]) {
      if (entry.a == entry.b) {
        int L = plan.length;
        std::vector<int> loop;
        for (int t = 0; t <= L; ++t)
          loop.push_back(w->ordering[(pos[entry.a] + std::min(t, w->m())) % w->m()]);
        entry.walk = std::move(loop);
        break;
      }
    }
    expect_bad(std::move(m7));
  }
  r.pass = injected == detected && injected >= 10;
  r.detail = std::to_string(detected) + "/" + std::to_string(injected) +
             " mutations detected";
  return r;
}

inline PropResult higher_mutation_detection() {
  PropResult r{"section-table verification detects every injected violation"};
  DigitalImage X = generate_cycle(6, AdjacencyKind::from_name(8));
  auto w = detect_simple_closed_curve(X);
  HigherPlanner plan = synthesize_higher_planner(*w, 3, VerifyLevel::Full);
  int injected = 0, detected = 0;
  auto expect_bad = [&](HigherPlanner p, VerifyLevel level) {
    ++injected;
    if (!verify_higher_planner(X, p, level).ok) ++detected;
  };

  {
    HigherPlanner m1 = plan;  // coverage hole
    m1.parts[0].pop_back();
    expect_bad(std::move(m1), VerifyLevel::AnchorsOnly);
  }
  {
    HigherPlanner m2 = plan;  // duplicate tuple within one part
    m2.parts[0].push_back(m2.parts[0].front());
    expect_bad(std::move(m2), VerifyLevel::AnchorsOnly);
  }
  {
    HigherPlanner m3 = plan;  // endpoint anchor broken
    auto& e = m3.parts[0][1];
    e.walk.back() = (e.walk.back() + 1) % X.size();
    expect_bad(std::move(m3), VerifyLevel::AnchorsOnly);
  }
  {
    HigherPlanner m4 = plan;  // middle anchor dropped from the walk
    for (auto& part : m4.parts)
      for (auto& e : part)
        if (e.tuple[1] != e.tuple[0] && e.tuple[1] != e.tuple[2]) {
          std::vector<int> wk(e.walk.size(), e.tuple[0]);
          wk.back() = e.tuple.back();
          bool valid = true;
          for (std::size_t t = 1; t < wk.size(); ++t)
            valid &= wk[t] == wk[t - 1] || X.adjacent_indices(wk[t], wk[t - 1]);
          if (!valid) continue;
          e.walk = wk;
          expect_bad(m4, VerifyLevel::AnchorsOnly);
          goto done4;
        }
  done4:;
  }
  {
    HigherPlanner m5 = plan;  // wrong arity on one entry
    m5.parts[0][0].tuple.push_back(0);
    expect_bad(std::move(m5), VerifyLevel::AnchorsOnly);
  }
  {
    HigherPlanner m6 = plan;  // continuity break: full loop walk on a constant tuple
    std::vector<int> pos(X.size());
    for (int t = 0; t < w->m(); ++t) pos[w->ordering[t]] = t;
    for (auto& e : m6.parts[0])
      if (e.tuple[0] == e.tuple[1] && e.tuple[1] == e.tuple[2]) {
        std::vector<int> wk;
        for (std::size_t t = 0; t < e.walk.size(); ++t)
          wk.push_back(w->ordering[(pos[e.tuple[0]] + std::min<int>((int)t, w->m())) %
                                   w->m()]);
        e.walk = std::move(wk);
        break;
      }
    expect_bad(std::move(m6), VerifyLevel::Full);
  }
  r.pass = injected == detected && injected >= 6;
  r.detail = std::to_string(detected) + "/" + std::to_string(injected) +
             " mutations detected";
  return r;
}

inline PropResult serialization_round_trips() {
  PropResult r{"parse/serialize round-trips"};
  int trips = 0;
  for (int kind : {8, 4})
    for (const auto& X : enumerate_corpus(AdjacencyKind::from_name(kind), 3, 6)) {
      if (!(parse_image(serialize_image(X)) == X)) {
        r.pass = false;
        r.detail = "image round-trip changed " + corpus_filename(X);
        return r;
      }
      ++trips;
    }
  for (auto [m, kind] : {std::pair{6, 8}, {7, 8}, {10, 8}, {8, 4}, {12, 4}}) {
    DigitalImage X = generate_cycle(m, AdjacencyKind::from_name(kind));
    auto w = detect_simple_closed_curve(X);
    MotionPlanner plan = synthesize_cycle_planner(*w);
    MotionPlanner back = parse_planner(serialize_planner(X, plan), X);
    bool same = back.length == plan.length && back.parts.size() == plan.parts.size();
    for (std::size_t j = 0; same && j < plan.parts.size(); ++j) {
      same = back.parts[j].size() == plan.parts[j].size();
      for (std::size_t i = 0; same && i < plan.parts[j].size(); ++i)
        same = back.parts[j][i].a == plan.parts[j][i].a &&
               back.parts[j][i].b == plan.parts[j][i].b &&
               back.parts[j][i].walk == plan.parts[j][i].walk;
    }
    if (!same) {
      r.pass = false;
      r.detail = "planner round-trip mismatch at m=" + std::to_string(m);
      return r;
    }
    ++trips;
  }
  for (auto [m, kind, n] : {std::tuple{6, 8, 3}, {6, 8, 4}, {8, 4, 3}}) {
    DigitalImage X = generate_cycle(m, AdjacencyKind::from_name(kind));
    auto w = detect_simple_closed_curve(X);
    HigherPlanner plan = synthesize_higher_planner(*w, n, VerifyLevel::Full);
    HigherPlanner back = parse_higher_planner(serialize_higher_planner(X, plan), X);
    bool same = back.n == plan.n && back.length == plan.length &&
                back.parts.size() == plan.parts.size();
    for (std::size_t j = 0; same && j < plan.parts.size(); ++j) {
      same = back.parts[j].size() == plan.parts[j].size();
      for (std::size_t i = 0; same && i < plan.parts[j].size(); ++i)
        same = back.parts[j][i].tuple == plan.parts[j][i].tuple &&
               back.parts[j][i].walk == plan.parts[j][i].walk;
    }
    if (!same) {
      r.pass = false;
      r.detail = "section-table round-trip mismatch";
      return r;
    }
    ++trips;
  }
  int certs = 0;
  for (const auto& X : enumerate_corpus(AdjacencyKind::from_name(8), 3, 4)) {
    auto d = is_contractible(X);
    if (!d.yes()) continue;
    Homotopy back = parse_homotopy(serialize_homotopy(*d.certificate), X, X);
    if (back.stages != d.certificate->stages) {
      r.pass = false;
      r.detail = "homotopy certificate round-trip mismatch";
      return r;
    }
    ++trips;
    if (++certs >= 50) break;
  }
  r.detail = std::to_string(trips) + " round-trips, all identical";
  return r;
}

inline PropResult cycle_rotation_nonrigidity() {
  PropResult r{"every generated cycle is non-rigid (rotation witness)"};
  int checked = 0;
  auto check = [&](int m, int kind) {
    DigitalImage C = generate_cycle(m, AdjacencyKind::from_name(kind));
    auto d = is_rigid(C);
    if (!d.no() || !d.certificate ||
        d.certificate->stages.front() == d.certificate->stages.back() ||
        !check_homotopy(*d.certificate).ok) {
      r.pass = false;
      r.detail = "rigidity verdict wrong for m=" + std::to_string(m) + " kind " +
                 std::to_string(kind);
      return false;
    }
    ++checked;
    return true;
  };
  for (int m : {4, 6, 7, 8, 9, 10, 12})
    if (!check(m, 8)) return r;
  for (int m : {4, 8, 10, 12})
    if (!check(m, 4)) return r;
  r.detail = std::to_string(checked) + " cycles, each with a nontrivial identity move";
  return r;
}

inline PropResult order_partition_structure() {
  PropResult r{"order partition covers every tuple exactly once (m<=10, n<=4)"};
  std::uint64_t tuples_checked = 0;
  for (auto [m, kind] : {std::pair{6, 8}, {7, 8}, {10, 8}, {8, 4}}) {
    DigitalImage C = generate_cycle(m, AdjacencyKind::from_name(kind));
    auto w = detect_simple_closed_curve(C);
    for (int n = 2; n <= 4; ++n) {
      std::uint64_t a1 = 0, total = 1;
      for (int i = 0; i < n; ++i) total *= m;
      std::vector<int> pos(C.size());
      for (int q = 0; q < m; ++q) pos[w->ordering[q]] = q;
      std::vector<int> t(n, 0);
      while (true) {
        bool in = order_respecting(t, w->ordering);
        a1 += in;
        // independent characterization: a tuple respects the order exactly
        // when every position descent is the wraparound step (m-1 -> 0)
        bool expect = true;
        for (int i = 0; i + 1 < n; ++i)
          if (pos[t[i]] > pos[t[i + 1]])
            expect &= pos[t[i]] == m - 1 && pos[t[i + 1]] == 0;
        if (in != expect) {
          r.pass = false;
          r.detail = "membership contradicts the descent structure at m=" +
                     std::to_string(m);
          return r;
        }
        ++tuples_checked;
        int i = n - 1;
        while (i >= 0 && ++t[i] == m) t[i--] = 0;
        if (i < 0) break;
      }
      if (a1 == 0 || a1 == total) {
        r.pass = false;
        r.detail = "degenerate partition at m=" + std::to_string(m) +
                   " n=" + std::to_string(n);
        return r;
      }
      // constant tuples respect the order
      std::vector<int> c(n, w->ordering[1]);
      if (!order_respecting(c, w->ordering)) {
        r.pass = false;
        r.detail = "constant tuple not order-respecting";
        return r;
      }
    }
  }
  r.detail = std::to_string(tuples_checked) + " tuples, split matches descent structure";
  return r;
}

inline PropResult tcn_consistency_arity2() {
  PropResult r{"tcn at arity 2 agrees with tc on the small corpus"};
  int compared = 0;
  for (const auto& X : enumerate_corpus(AdjacencyKind::from_name(8), 3, 5)) {
    TCResult tc = tc_classify(X);
    TCnResult t2 = tcn_classify(X, 2);
    if (tc.value != 0 && t2.value != 0) {
      if (tc.value != t2.value) {
        r.pass = false;
        r.detail = "disagreement on " + corpus_filename(X);
        return r;
      }
      ++compared;
    }
  }
  r.pass = compared >= 100;
  r.detail = std::to_string(compared) + " definite agreements";
  return r;
}

inline std::vector<PropResult> run_all_properties() {
  return {homotopy_equivalence_laws(), planner_mutation_detection(),
          higher_mutation_detection(), serialization_round_trips(),
          cycle_rotation_nonrigidity(), order_partition_structure(),
          tcn_consistency_arity2()};
}

}  // namespace digitop_props
