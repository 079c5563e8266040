#include "digitop/morph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "digitop/curves.hpp"
#include "digitop/loops.hpp"

namespace digitop {

namespace {

std::vector<int> identity_values(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

bool is_identity_vec(const std::vector<int>& v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != static_cast<int>(i)) return false;
  return true;
}

bool is_constant_vec(const std::vector<int>& v) {
  for (int x : v)
    if (x != v[0]) return false;
  return true;
}

}  // namespace

DigitalMap identity_map(const DigitalImage& X) {
  return {X, X, identity_values(X.size())};
}

DigitalMap constant_map(const DigitalImage& X, const DigitalImage& Y, int target_index) {
  return {X, Y, std::vector<int>(X.size(), target_index)};
}

DigitalMap compose(const DigitalMap& g, const DigitalMap& f) {
  if (!(f.target == g.source))
    throw input_error("compose: inner map target differs from outer map source");
  std::vector<int> vals(f.values.size());
  for (size_t i = 0; i < vals.size(); ++i) vals[i] = g.values[f.values[i]];
  return {f.source, g.target, std::move(vals)};
}

bool is_continuous(const DigitalMap& f) {
  const auto& nb = f.source.neighbors();
  for (int i = 0; i < f.source.size(); ++i)
    for (int j : nb[i]) {
      if (j < i) continue;
      int a = f.values[i], b = f.values[j];
      if (a != b && !f.target.adjacent_indices(a, b)) return false;
    }
  return true;
}

CheckReport check_homotopy(const Homotopy& h) {
  if (h.stages.empty()) return {false, "homotopy has no stages"};
  int n = h.source.size();
  for (int t = 0; t < h.stage_count(); ++t) {
    if (static_cast<int>(h.stages[t].size()) != n)
      return {false, "stage " + std::to_string(t) + " has wrong arity"};
    for (int i = 0; i < n; ++i) {
      int v = h.stages[t][i];
      if (v < 0 || v >= h.target.size())
        return {false, "stage " + std::to_string(t) + " maps outside the target"};
    }
    if (!is_continuous({h.source, h.target, h.stages[t]}))
      return {false, "stage " + std::to_string(t) + " is not continuous"};
  }
  for (int t = 0; t + 1 < h.stage_count(); ++t)
    for (int i = 0; i < n; ++i) {
      int a = h.stages[t][i], b = h.stages[t + 1][i];
      if (a != b && !h.target.adjacent_indices(a, b))
        return {false, "stages " + std::to_string(t) + "," + std::to_string(t + 1) +
                           " move point " + std::to_string(i) + " by more than one step"};
    }
  return {};
}

std::string serialize_homotopy(const Homotopy& h) {
  std::ostringstream os;
  for (const auto& stage : h.stages) {
    bool first = true;
    for (int v : stage) {
      for (Coord c : h.target.point(v)) {
        if (!first) os << ' ';
        os << c;
        first = false;
      }
    }
    os << "\n";
  }
  return os.str();
}

Homotopy parse_homotopy(const std::string& text, const DigitalImage& source,
                        const DigitalImage& target) {
  Homotopy h{source, target, {}};
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  int d = target.dim();
  while (std::getline(in, raw)) {
    ++lineno;
    auto pos = raw.find('#');
    if (pos != std::string::npos) raw = raw.substr(0, pos);
    std::istringstream ls(raw);
    std::vector<Coord> nums;
    Coord c;
    while (ls >> c) nums.push_back(c);
    if (nums.empty()) continue;
    if (static_cast<int>(nums.size()) != source.size() * d)
      throw parse_error("line " + std::to_string(lineno) + ": stage expects " +
                        std::to_string(source.size() * d) + " coordinates");
    std::vector<int> stage(source.size());
    for (int i = 0; i < source.size(); ++i) {
      Point p(nums.begin() + i * d, nums.begin() + (i + 1) * d);
      int idx = target.index_of(p);
      if (idx < 0)
        throw parse_error("line " + std::to_string(lineno) +
                          ": stage value is not a target point");
      stage[i] = idx;
    }
    h.stages.push_back(std::move(stage));
  }
  if (h.stages.empty()) throw parse_error("certificate lists no stages");
  return h;
}

CheckReport check_equivalence(const EquivalenceCertificate& c) {
  if (!(c.forward.source == c.backward.target) || !(c.forward.target == c.backward.source))
    return {false, "forward/backward images do not match"};
  if (!is_continuous(c.forward)) return {false, "forward map is not continuous"};
  if (!is_continuous(c.backward)) return {false, "backward map is not continuous"};
  DigitalMap bf = compose(c.backward, c.forward);
  DigitalMap fb = compose(c.forward, c.backward);
  if (c.h1.stages.empty() || c.h1.stages.front() != bf.values)
    return {false, "h1 does not start at backward∘forward"};
  if (!is_identity_vec(c.h1.stages.back()))
    return {false, "h1 does not end at the identity"};
  if (c.h2.stages.empty() || c.h2.stages.front() != fb.values)
    return {false, "h2 does not start at forward∘backward"};
  if (!is_identity_vec(c.h2.stages.back()))
    return {false, "h2 does not end at the identity"};
  if (auto r = check_homotopy(c.h1); !r.ok) return {false, "h1: " + r.violation};
  if (auto r = check_homotopy(c.h2); !r.ok) return {false, "h2: " + r.violation};
  return {};
}

namespace {

// Post-compose every stage with outer (stage_t -> outer∘stage_t∘inner_pre).
// Used to conjugate a homotopy through continuous maps: if H runs between a
// and b over Y, then outer∘H∘inner runs between outer∘a∘inner and
// outer∘b∘inner, staying a homotopy because continuous maps preserve
// equal-or-adjacent.
std::vector<std::vector<int>> conjugate_stages(const std::vector<std::vector<int>>& stages,
                                               const std::vector<int>& inner,
                                               const std::vector<int>& outer) {
  std::vector<std::vector<int>> out;
  out.reserve(stages.size());
  for (const auto& s : stages) {
    std::vector<int> t(inner.size());
    for (size_t i = 0; i < inner.size(); ++i) t[i] = outer[s[inner[i]]];
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::vector<int>> concat_stages(std::vector<std::vector<int>> a,
                                            const std::vector<std::vector<int>>& b) {
  // junction stage appears once
  if (!a.empty() && !b.empty() && a.back() == b.front())
    a.insert(a.end(), b.begin() + 1, b.end());
  else
    a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

EquivalenceCertificate compose_equivalence(const EquivalenceCertificate& xy,
                                           const EquivalenceCertificate& yz) {
  if (!(xy.forward.target == yz.forward.source))
    throw input_error("compose_equivalence: middle images differ");
  DigitalMap F = compose(yz.forward, xy.forward);
  DigitalMap G = compose(xy.backward, yz.backward);
  // h1: G∘F = g1∘(g2∘f2)∘f1 ~ g1∘f1 ~ id_X
  auto part1 = conjugate_stages(yz.h1.stages, xy.forward.values, xy.backward.values);
  Homotopy h1{xy.forward.source, xy.forward.source,
              concat_stages(std::move(part1), xy.h1.stages)};
  // h2: F∘G = f2∘(f1∘g1)∘g2 ~ f2∘g2 ~ id_Z
  auto part2 = conjugate_stages(xy.h2.stages, yz.backward.values, yz.forward.values);
  Homotopy h2{yz.forward.target, yz.forward.target,
              concat_stages(std::move(part2), yz.h2.stages)};
  return {F, G, std::move(h1), std::move(h2)};
}

EquivalenceCertificate iso_certificate(const DigitalImage& X, const DigitalImage& Y,
                                       const std::vector<int>& x_to_y) {
  std::vector<int> y_to_x(Y.size(), -1);
  for (int i = 0; i < X.size(); ++i) {
    if (x_to_y[i] < 0 || x_to_y[i] >= Y.size() || y_to_x[x_to_y[i]] != -1)
      throw input_error("iso_certificate: mapping is not a bijection");
    y_to_x[x_to_y[i]] = i;
  }
  EquivalenceCertificate cert{{X, Y, x_to_y},
                              {Y, X, y_to_x},
                              {X, X, {identity_values(X.size())}},
                              {Y, Y, {identity_values(Y.size())}}};
  if (auto r = check_equivalence(cert); !r.ok)
    throw input_error("iso_certificate: not an adjacency isomorphism: " + r.violation);
  return cert;
}

// ---------------------------------------------------------------------------
// Map graph engine

MapGraphEngine::MapGraphEngine(const AdjGraph& src, const AdjGraph& dst,
                               std::uint64_t budget)
    : src_(src), dst_(dst), budget_(budget) {}

bool MapGraphEngine::continuous(const std::vector<int>& f) const {
  for (int i = 0; i < src_.n; ++i)
    for (int j : src_.nbr[i]) {
      if (j < i) continue;
      if (!dst_.adj_or_eq(f[i], f[j])) return false;
    }
  return true;
}

namespace {

// Backtracking enumeration of the continuous maps pointwise equal-or-adjacent
// to f, in lex order. visit returns false to stop early.
template <typename Visit>
void visit_close_maps(const AdjGraph& src, const AdjGraph& dst,
                      const std::vector<int>& f, Visit&& visit) {
  std::vector<int> g(src.n);
  bool stop = false;
  auto rec = [&](auto&& self, int i) -> void {
    if (stop) return;
    if (i == src.n) {
      if (!visit(g)) stop = true;
      return;
    }
    for (int cand : dst.closed[f[i]]) {
      bool ok = true;
      for (int j : src.nbr[i]) {
        if (j >= i) break;  // neighbor lists are sorted
        if (!dst.adj_or_eq(g[j], cand)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        g[i] = cand;
        self(self, i + 1);
        if (stop) return;
      }
    }
  };
  if (src.n == 0) return;
  rec(rec, 0);
}

// Visited-map store: packs maps into 64-bit keys when they fit, otherwise
// falls back to byte strings. Keeps BFS memory flat at large budgets.
class MapStore {
 public:
  MapStore(int n, int dst_n) : n_(n) {
    bits_ = 1;
    while ((1ll << bits_) < dst_n) ++bits_;
    packed_ = static_cast<long long>(n_) * bits_ <= 64;
  }

  // Returns the new id, or -1 when already present.
  int insert(const std::vector<int>& m, int parent) {
    if (packed_) {
      auto [it, fresh] = seen64_.emplace(pack(m), size());
      if (!fresh) return -1;
      arena64_.push_back(it->first);
      parents_.push_back(parent);
      return static_cast<int>(arena64_.size()) - 1;
    }
    auto [it, fresh] = seenStr_.emplace(bytes(m), size());
    if (!fresh) return -1;
    arenaVec_.push_back(m);
    parents_.push_back(parent);
    return static_cast<int>(arenaVec_.size()) - 1;
  }

  int size() const {
    return static_cast<int>(packed_ ? arena64_.size() : arenaVec_.size());
  }
  std::vector<int> get(int id) const {
    return packed_ ? unpack(arena64_[id]) : arenaVec_[id];
  }
  int parent(int id) const { return parents_[id]; }

 private:
  std::uint64_t pack(const std::vector<int>& v) const {
    std::uint64_t k = 0;
    for (int i = 0; i < n_; ++i) k = (k << bits_) | static_cast<std::uint64_t>(v[i]);
    return k;
  }
  std::vector<int> unpack(std::uint64_t k) const {
    std::vector<int> v(n_);
    std::uint64_t mask = (1ull << bits_) - 1;
    for (int i = n_ - 1; i >= 0; --i) {
      v[i] = static_cast<int>(k & mask);
      k >>= bits_;
    }
    return v;
  }
  std::string bytes(const std::vector<int>& v) const {
    std::string s;
    s.reserve(v.size() * 2);
    for (int x : v) {
      s.push_back(static_cast<char>(x & 0xff));
      s.push_back(static_cast<char>((x >> 8) & 0xff));
    }
    return s;
  }

  int n_, bits_;
  bool packed_;
  std::unordered_map<std::uint64_t, int> seen64_;
  std::unordered_map<std::string, int> seenStr_;
  std::vector<std::uint64_t> arena64_;
  std::vector<std::vector<int>> arenaVec_;
  std::vector<int> parents_;
};

}  // namespace

std::vector<std::vector<int>> MapGraphEngine::neighbors(const std::vector<int>& f) const {
  std::vector<std::vector<int>> out;
  visit_close_maps(src_, dst_, f, [&](const std::vector<int>& g) {
    out.push_back(g);
    return true;
  });
  return out;
}

MapGraphEngine::SearchResult MapGraphEngine::search(
    const std::vector<int>& from,
    const std::function<bool(const std::vector<int>&)>& target) {
  SearchResult res;
  res.stats.budget = budget_;
  MapStore store(src_.n, dst_.n);
  std::deque<int> queue;
  store.insert(from, -1);
  queue.push_back(0);
  bool over_budget = false;
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();
    std::vector<int> cur = store.get(id);
    ++res.stats.visited;
    if (res.stats.visited > budget_) {
      over_budget = true;
      break;
    }
    if (target(cur)) {
      for (int v = id; v != -1; v = store.parent(v)) res.path.push_back(store.get(v));
      std::reverse(res.path.begin(), res.path.end());
      res.verdict = Verdict::Yes;
      return res;
    }
    visit_close_maps(src_, dst_, cur, [&](const std::vector<int>& g) {
      int nid = store.insert(g, id);
      if (nid >= 0) queue.push_back(nid);
      return static_cast<std::uint64_t>(store.size()) <= budget_;
    });
    if (static_cast<std::uint64_t>(store.size()) > budget_) {
      over_budget = true;
      break;
    }
  }
  if (over_budget) {
    res.verdict = Verdict::Unknown;
    res.stats.note = "map budget exhausted";
  } else {
    res.verdict = Verdict::No;
    res.stats.exhausted = true;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Folds

namespace {

struct FoldPlan {
  std::vector<std::pair<int, int>> steps;  // u folded onto its neighbor v
  std::vector<int> core;                   // surviving indices, sorted
};

// Greedy dominated-vertex elimination: u may be folded onto a neighbor v
// when every other live neighbor of u is v-adjacent (N(u) ⊆ N[v] among live
// vertices). Deterministic: smallest (u, v) first.
FoldPlan fold_reduce(const AdjGraph& g) {
  std::vector<char> alive(g.n, 1);
  FoldPlan plan;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int u = 0; u < g.n && !progress; ++u) {
      if (!alive[u]) continue;
      for (int v : g.nbr[u]) {
        if (!alive[v]) continue;
        bool dominated = true;
        for (int w : g.nbr[u]) {
          if (!alive[w] || w == v) continue;
          if (!g.adj_or_eq(v, w)) {
            dominated = false;
            break;
          }
        }
        if (dominated) {
          plan.steps.push_back({u, v});
          alive[u] = 0;
          progress = true;
          break;
        }
      }
    }
  }
  for (int i = 0; i < g.n; ++i)
    if (alive[i]) plan.core.push_back(i);
  return plan;
}

// Homotopy stages over X from the identity to the composite fold retraction.
// Each stage is continuous (a composite of one-point retractions restricted
// to the live set) and moves one fiber by one adjacency step.
std::vector<std::vector<int>> fold_stage_values(int n, const FoldPlan& plan) {
  std::vector<std::vector<int>> stages;
  std::vector<int> cur = identity_values(n);
  stages.push_back(cur);
  for (auto [u, v] : plan.steps) {
    for (int i = 0; i < n; ++i)
      if (cur[i] == u) cur[i] = v;
    stages.push_back(cur);
  }
  return stages;
}

}  // namespace

Decision<Homotopy> is_contractible(const DigitalImage& X, std::uint64_t budget) {
  if (!is_connected(X)) throw input_error("is_contractible requires a connected image");
  Decision<Homotopy> dec;
  dec.stats.budget = budget;
  AdjGraph g = AdjGraph::from_image(X);
  FoldPlan plan = fold_reduce(g);
  auto stages = fold_stage_values(X.size(), plan);
  if (plan.core.size() == 1) {
    dec.verdict = Verdict::Yes;
    dec.certificate = Homotopy{X, X, std::move(stages)};
    dec.stats.note = "fold collapse";
    return dec;
  }
  DigitalImage core = X.subimage(plan.core);
  std::vector<int> to_core(X.size(), -1);
  for (size_t i = 0; i < plan.core.size(); ++i) to_core[plan.core[i]] = static_cast<int>(i);

  AdjGraph cg = AdjGraph::from_image(core);
  MapGraphEngine engine(cg, cg, budget);
  auto res = engine.search(identity_values(core.size()),
                           [](const std::vector<int>& m) { return is_constant_vec(m); });
  dec.stats = res.stats;
  if (res.verdict == Verdict::Yes) {
    // Lift the core contraction through the fold retraction r: X -> core.
    const std::vector<int> fin = stages.back();
    for (size_t t = 1; t < res.path.size(); ++t) {
      std::vector<int> s(X.size());
      for (int i = 0; i < X.size(); ++i) s[i] = plan.core[res.path[t][to_core[fin[i]]]];
      stages.push_back(std::move(s));
    }
    dec.verdict = Verdict::Yes;
    dec.certificate = Homotopy{X, X, std::move(stages)};
  } else if (res.verdict == Verdict::No) {
    // Core is not contractible, and X is fold-equivalent to it; contractibility
    // is a homotopy-type property, so the verdict transfers.
    dec.verdict = Verdict::No;
    dec.stats.note = "identity component of the fold core holds no constant map";
  }
  return dec;
}

Decision<Homotopy> is_rigid(const DigitalImage& X, std::uint64_t budget) {
  if (!is_connected(X)) throw input_error("is_rigid requires a connected image");
  Decision<Homotopy> dec;
  dec.stats.budget = budget;
  AdjGraph g = AdjGraph::from_image(X);
  std::vector<int> id = identity_values(X.size());
  std::vector<int> witness;
  std::uint64_t seen = 0;
  bool over = false;
  // The identity component is {id} iff id has no other pointwise-close
  // continuous map, since any homotopy leaves id through such a neighbor.
  visit_close_maps(g, g, id, [&](const std::vector<int>& cand) {
    if (++seen > budget) {
      over = true;
      return false;
    }
    if (!is_identity_vec(cand)) {
      witness = cand;
      return false;
    }
    return true;
  });
  dec.stats.visited = seen;
  if (!witness.empty()) {
    dec.verdict = Verdict::No;
    dec.certificate = Homotopy{X, X, {id, witness}};
  } else if (over) {
    dec.verdict = Verdict::Unknown;
    dec.stats.note = "neighbor budget exhausted";
  } else {
    dec.verdict = Verdict::Yes;
    dec.stats.exhausted = true;
  }
  return dec;
}

Decision<Homotopy> homotopic(const DigitalMap& f, const DigitalMap& g, std::uint64_t budget) {
  if (!(f.source == g.source) || !(f.target == g.target))
    throw input_error("homotopic: maps must share source and target");
  if (!is_continuous(f) || !is_continuous(g))
    throw input_error("homotopic: both maps must be continuous");
  Decision<Homotopy> dec;
  dec.stats.budget = budget;
  if (f.values == g.values) {
    dec.verdict = Verdict::Yes;
    dec.certificate = Homotopy{f.source, f.target, {f.values}};
    return dec;
  }
  AdjGraph sg = AdjGraph::from_image(f.source);
  AdjGraph tg = AdjGraph::from_image(f.target);
  MapGraphEngine engine(sg, tg, budget);
  auto res = engine.search(f.values,
                           [&](const std::vector<int>& m) { return m == g.values; });
  dec.stats = res.stats;
  dec.verdict = res.verdict;
  if (res.verdict == Verdict::Yes)
    dec.certificate = Homotopy{f.source, f.target, std::move(res.path)};
  return dec;
}

Decision<ReducibilityCertificate> is_reducible(const DigitalImage& X, std::uint64_t budget) {
  if (!is_connected(X)) throw input_error("is_reducible requires a connected image");
  Decision<ReducibilityCertificate> dec;
  dec.stats.budget = budget;
  int n = X.size();
  if (n == 1) {
    dec.verdict = Verdict::No;
    dec.stats.exhausted = true;
    dec.stats.note = "one-point image";
    return dec;
  }
  AdjGraph g = AdjGraph::from_image(X);

  auto build_cert = [&](const std::vector<int>& retraction_vals,
                        const std::vector<std::vector<int>>& h1_stages)
      -> std::optional<ReducibilityCertificate> {
    // Subimage spanned by the retraction's values.
    std::vector<int> img;
    for (int v : retraction_vals) img.push_back(v);
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    if (static_cast<int>(img.size()) >= n) return std::nullopt;
    DigitalImage Y = X.subimage(img);
    std::vector<int> to_y(n, -1);
    for (size_t i = 0; i < img.size(); ++i) to_y[img[i]] = static_cast<int>(i);
    std::vector<int> fwd(n);
    for (int i = 0; i < n; ++i) fwd[i] = to_y[retraction_vals[i]];
    std::vector<int> bwd = img;  // inclusion: Y index -> X index

    // h2: the restriction of the retraction to Y, homotoped to id_Y.
    std::vector<int> r_on_y(img.size());
    for (size_t i = 0; i < img.size(); ++i) r_on_y[i] = to_y[retraction_vals[img[i]]];
    Homotopy h2{Y, Y, {}};
    if (is_identity_vec(r_on_y)) {
      h2.stages = {r_on_y};
    } else {
      AdjGraph yg = AdjGraph::from_image(Y);
      MapGraphEngine yengine(yg, yg, budget);
      auto yres = yengine.search(
          r_on_y, [](const std::vector<int>& m) { return is_identity_vec(m); });
      if (yres.verdict != Verdict::Yes) return std::nullopt;
      h2.stages = std::move(yres.path);
    }
    EquivalenceCertificate cert{{X, Y, std::move(fwd)}, {Y, X, std::move(bwd)},
                                Homotopy{X, X, h1_stages}, std::move(h2)};
    if (auto r = check_equivalence(cert); !r.ok) return std::nullopt;
    return ReducibilityCertificate{std::move(Y), std::move(cert)};
  };

  // Fast path: a dominated vertex gives a one-step retraction.
  {
    FoldPlan plan = fold_reduce(g);
    if (!plan.steps.empty()) {
      auto [u, v] = plan.steps.front();
      std::vector<int> r = identity_values(n);
      r[u] = v;
      if (auto cert = build_cert(r, {r, identity_values(n)})) {
        dec.verdict = Verdict::Yes;
        dec.certificate = std::move(*cert);
        dec.stats.note = "dominated vertex";
        return dec;
      }
    }
  }

  // BFS over the identity component looking for a confirmable non-surjection.
  AdjGraph xg = g;
  bool saw_unconfirmed = false;
  std::vector<std::vector<int>> rejected;
  for (int attempt = 0; attempt < 8; ++attempt) {
    MapGraphEngine engine(xg, xg, budget);
    auto res = engine.search(identity_values(n), [&](const std::vector<int>& m) {
      if (is_constant_vec(m) && n > 1) return true;  // constants are maximally non-surjective
      std::vector<int> vals = m;
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      if (static_cast<int>(vals.size()) == n) return false;
      return std::find(rejected.begin(), rejected.end(), m) == rejected.end();
    });
    dec.stats.visited += res.stats.visited;
    if (res.verdict == Verdict::Yes) {
      std::vector<std::vector<int>> h1 = res.path;
      std::reverse(h1.begin(), h1.end());  // from the non-surjection back to id
      if (auto cert = build_cert(res.path.back(), h1)) {
        dec.verdict = Verdict::Yes;
        dec.certificate = std::move(*cert);
        return dec;
      }
      saw_unconfirmed = true;
      rejected.push_back(res.path.back());
      continue;
    }
    if (res.verdict == Verdict::No && !saw_unconfirmed) {
      dec.verdict = Verdict::No;
      dec.stats.exhausted = true;
      dec.stats.note = "identity component contains only surjections";
      return dec;
    }
    dec.verdict = Verdict::Unknown;
    dec.stats.note = saw_unconfirmed
                         ? "non-surjective maps found but none confirmed as an equivalence"
                         : "map budget exhausted";
    return dec;
  }
  dec.verdict = Verdict::Unknown;
  dec.stats.note = "non-surjective candidates kept failing confirmation";
  return dec;
}

CoreReduction reduce_to_core(const DigitalImage& X, std::uint64_t budget) {
  CoreReduction out{X, std::nullopt, false};
  while (true) {
    auto red = is_reducible(out.core, budget);
    if (red.verdict == Verdict::Yes) {
      out.equiv = out.equiv ? compose_equivalence(*out.equiv, red.certificate->equiv)
                            : red.certificate->equiv;
      out.core = red.certificate->smaller;
      continue;
    }
    out.definite = (red.verdict == Verdict::No);
    return out;
  }
}

namespace {

EquivalenceCertificate reverse_equivalence(const EquivalenceCertificate& c) {
  return {c.backward, c.forward, c.h2, c.h1};
}

// Stages from const at `from` to const at `to` along a shortest path.
std::vector<std::vector<int>> constant_slide(const AdjGraph& g, int n, int from, int to) {
  std::vector<std::vector<int>> stages;
  for (int v : g.shortest_path(from, to)) stages.emplace_back(n, v);
  return stages;
}

// Equivalence X ~ Y from contraction certificates of both.
EquivalenceCertificate contractible_pair_certificate(const DigitalImage& X,
                                                     const Homotopy& hx,
                                                     const DigitalImage& Y,
                                                     const Homotopy& hy) {
  AdjGraph gx = AdjGraph::from_image(X);
  AdjGraph gy = AdjGraph::from_image(Y);
  int cx = hx.stages.back()[0];  // the constant the contraction ends at
  int cy = hy.stages.back()[0];
  DigitalMap f = constant_map(X, Y, 0);
  DigitalMap gmap = constant_map(Y, X, 0);
  // h1: const_0 -> const_cx -> (reversed contraction) -> id_X
  std::vector<std::vector<int>> h1 = constant_slide(gx, X.size(), 0, cx);
  std::vector<std::vector<int>> rx = hx.stages;
  std::reverse(rx.begin(), rx.end());
  h1 = concat_stages(std::move(h1), rx);
  std::vector<std::vector<int>> h2 = constant_slide(gy, Y.size(), 0, cy);
  std::vector<std::vector<int>> ry = hy.stages;
  std::reverse(ry.begin(), ry.end());
  h2 = concat_stages(std::move(h2), ry);
  return {f, gmap, Homotopy{X, X, std::move(h1)}, Homotopy{Y, Y, std::move(h2)}};
}

// Cycle-to-cycle adjacency isomorphism along the curve orderings.
EquivalenceCertificate cycle_iso_certificate(const CurveWitness& a, const CurveWitness& b) {
  std::vector<int> x_to_y(a.image.size());
  for (int t = 0; t < a.m(); ++t) x_to_y[a.ordering[t]] = b.ordering[t];
  return iso_certificate(a.image, b.image, x_to_y);
}

}  // namespace

Decision<EquivalenceCertificate> homotopy_equivalent(const DigitalImage& X,
                                                     const DigitalImage& Y,
                                                     std::uint64_t budget) {
  if (!is_connected(X) || !is_connected(Y))
    throw input_error("homotopy_equivalent requires connected images");
  Decision<EquivalenceCertificate> dec;
  dec.stats.budget = budget;

  // Exact isomorphism up to translation.
  if (X.kind() == Y.kind() &&
      X.translated_to_origin().points() == Y.translated_to_origin().points()) {
    dec.verdict = Verdict::Yes;
    dec.certificate = iso_certificate(X, Y, identity_values(X.size()));
    dec.stats.note = "translation isomorphism";
    return dec;
  }

  auto cx = is_contractible(X, budget);
  auto cy = is_contractible(Y, budget);
  dec.stats.visited = cx.stats.visited + cy.stats.visited;
  if (cx.verdict == Verdict::Yes && cy.verdict == Verdict::Yes) {
    dec.verdict = Verdict::Yes;
    dec.certificate = contractible_pair_certificate(X, *cx.certificate, Y, *cy.certificate);
    dec.stats.note = "both contractible";
    return dec;
  }
  if ((cx.verdict == Verdict::Yes && cy.verdict == Verdict::No) ||
      (cx.verdict == Verdict::No && cy.verdict == Verdict::Yes)) {
    dec.verdict = Verdict::No;
    dec.stats.exhausted = cx.stats.exhausted || cy.stats.exhausted;
    dec.stats.note = "contractibility differs (homotopy invariant)";
    return dec;
  }

  // Compare irreducible cores.
  auto rx = reduce_to_core(X, budget);
  auto ry = reduce_to_core(Y, budget);
  auto wx = detect_simple_closed_curve(rx.core);
  auto wy = detect_simple_closed_curve(ry.core);
  if (wx && wy && rx.definite && ry.definite) {
    if (wx->m() == wy->m()) {
      EquivalenceCertificate mid = cycle_iso_certificate(*wx, *wy);
      EquivalenceCertificate cert = rx.equiv ? compose_equivalence(*rx.equiv, mid) : mid;
      if (ry.equiv) cert = compose_equivalence(cert, reverse_equivalence(*ry.equiv));
      if (auto r = check_equivalence(cert); r.ok) {
        dec.verdict = Verdict::Yes;
        dec.certificate = std::move(cert);
        dec.stats.note = "cores are cycles of equal length";
        return dec;
      }
      dec.verdict = Verdict::Unknown;
      dec.stats.note = "core certificate composition failed verification";
      return dec;
    }
    // Different cycle lengths: distinguish by an exactly computed loop-class
    // count, which is a homotopy invariant.
    int k = std::min(wx->m(), wy->m());
    auto lx = count_loop_classes(rx.core, k, budget);
    auto ly = count_loop_classes(ry.core, k, budget);
    if (lx.definite && ly.definite && lx.count != ly.count) {
      dec.verdict = Verdict::No;
      dec.stats.exhausted = true;
      dec.stats.note = "cores are cycles with different L_" + std::to_string(k) +
                       " (" + std::to_string(lx.count) + " vs " + std::to_string(ly.count) + ")";
      return dec;
    }
    dec.verdict = Verdict::Unknown;
    dec.stats.note = "cycle cores of different length but loop invariant inconclusive";
    return dec;
  }

  dec.verdict = Verdict::Unknown;
  dec.stats.note = "cores not comparable (sizes " + std::to_string(rx.core.size()) +
                   " and " + std::to_string(ry.core.size()) + ")";
  return dec;
}

HomotopyType2D classify_homotopy_type_2d(const DigitalImage& X, std::uint64_t budget) {
  if (X.dim() != 2 || (X.kind().name() != 4 && X.kind().name() != 8))
    throw input_error("classify_homotopy_type_2d expects a 2D image with adjacency 4 or 8");
  if (!is_connected(X)) throw input_error("classify_homotopy_type_2d requires a connected image");
  HomotopyType2D out;
  auto c = is_contractible(X, budget);
  if (c.verdict == Verdict::Yes) {
    out.kind = HomotopyType2D::PointType;
    out.contraction = std::move(c.certificate);
    out.evidence = "contraction with " + std::to_string(out.contraction->stage_count()) +
                   " stages";
    return out;
  }
  auto red = reduce_to_core(X, budget);
  auto w = detect_simple_closed_curve(red.core);
  if (c.verdict == Verdict::No && red.definite && w) {
    DigitalImage gen = generate_cycle(w->m(), X.kind());
    auto wg = detect_simple_closed_curve(gen);
    EquivalenceCertificate mid = cycle_iso_certificate(*w, *wg);
    EquivalenceCertificate cert = red.equiv ? compose_equivalence(*red.equiv, mid) : mid;
    if (auto r = check_equivalence(cert); r.ok) {
      out.kind = HomotopyType2D::CycleType;
      out.cycle_m = w->m();
      out.cycle_equiv = std::move(cert);
      out.evidence = "irreducible core is a simple closed curve with " +
                     std::to_string(w->m()) + " points";
      return out;
    }
  }
  out.kind = HomotopyType2D::OtherOrUnknown;
  out.evidence = "contractible=" + to_string(c.verdict) +
                 " core_size=" + std::to_string(red.core.size()) +
                 " core_definite=" + (red.definite ? std::string("yes") : std::string("no")) +
                 " core_is_cycle=" + (w ? std::string("yes") : std::string("no"));
  return out;
}

}  // namespace digitop
