#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "digitop/graph.hpp"
#include "digitop/image.hpp"

namespace digitop {

inline constexpr std::uint64_t kDefaultMapBudget = 5'000'000;

// Point-to-point assignment between two images; values[i] is the canonical
// target index assigned to canonical source index i.
struct DigitalMap {
  DigitalImage source;
  DigitalImage target;
  std::vector<int> values;

  int apply(int i) const { return values[i]; }
  bool operator==(const DigitalMap& o) const {
    return source == o.source && target == o.target && values == o.values;
  }
};

DigitalMap identity_map(const DigitalImage& X);
DigitalMap constant_map(const DigitalImage& X, const DigitalImage& Y, int target_index);
// g after f; f.target must equal g.source.
DigitalMap compose(const DigitalMap& g, const DigitalMap& f);

// Adjacent source points must map to equal or adjacent target points.
bool is_continuous(const DigitalMap& f);

// A machine-checkable homotopy: every stage continuous, consecutive stages
// pointwise equal-or-adjacent, shared source/target. stages.front() and
// stages.back() are the two homotopic maps.
struct Homotopy {
  DigitalImage source;
  DigitalImage target;
  std::vector<std::vector<int>> stages;

  DigitalMap stage_map(int t) const { return {source, target, stages[t]}; }
  int stage_count() const { return static_cast<int>(stages.size()); }
};

// The trajectory of one source point across the stages: [h_0(i), ..., h_T(i)].
// Consecutive entries are equal or adjacent, so this is a digital path.
inline std::vector<int> stage_trajectory(const Homotopy& h, int i) {
  std::vector<int> t;
  t.reserve(h.stages.size());
  for (const auto& s : h.stages) t.push_back(s[i]);
  return t;
}

struct CheckReport {
  bool ok = true;
  std::string violation;
};
CheckReport check_homotopy(const Homotopy& h);

// Certificate format: one stage per line, each stage the flattened target
// coordinates of every source point in canonical source order.
std::string serialize_homotopy(const Homotopy& h);
Homotopy parse_homotopy(const std::string& text, const DigitalImage& source,
                        const DigitalImage& target);

struct EquivalenceCertificate {
  DigitalMap forward;   // X -> Y
  DigitalMap backward;  // Y -> X
  Homotopy h1;          // stages from backward∘forward to id_X
  Homotopy h2;          // stages from forward∘backward to id_Y
};
CheckReport check_equivalence(const EquivalenceCertificate& c);
// Certificate composition: (X ~ Y) + (Y ~ Z) -> (X ~ Z).
EquivalenceCertificate compose_equivalence(const EquivalenceCertificate& xy,
                                           const EquivalenceCertificate& yz);
// Equivalence from a point bijection x_to_y that is an adjacency isomorphism.
EquivalenceCertificate iso_certificate(const DigitalImage& X, const DigitalImage& Y,
                                       const std::vector<int>& x_to_y);

// Deterministic BFS over the graph of continuous maps src -> dst whose edges
// join pointwise equal-or-adjacent maps. The common engine behind homotopy,
// contractibility, reducibility, rigidity and loop classification.
class MapGraphEngine {
 public:
  MapGraphEngine(const AdjGraph& src, const AdjGraph& dst, std::uint64_t budget);

  struct SearchResult {
    Verdict verdict = Verdict::Unknown;
    std::vector<std::vector<int>> path;  // from -> ... -> found target
    SearchStats stats;
  };
  // BFS from `from` until `target` holds; No means the component was
  // exhausted. Deterministic: FIFO order, neighbors emitted lexicographically.
  SearchResult search(const std::vector<int>& from,
                      const std::function<bool(const std::vector<int>&)>& target);

  // All continuous maps pointwise equal-or-adjacent to f, in lex order
  // (including f itself).
  std::vector<std::vector<int>> neighbors(const std::vector<int>& f) const;
  bool continuous(const std::vector<int>& f) const;

 private:
  const AdjGraph& src_;
  const AdjGraph& dst_;
  std::uint64_t budget_;
};

// Identity homotopic to a constant map. Fold-reduces to a core first, then
// exhausts the identity component of the core by BFS; certificates are lifted
// back through the fold homotopy.
Decision<Homotopy> is_contractible(const DigitalImage& X,
                                   std::uint64_t budget = kDefaultMapBudget);

struct ReducibilityCertificate {
  DigitalImage smaller;            // strictly fewer points
  EquivalenceCertificate equiv;    // X ~ smaller, fully checkable
};
Decision<ReducibilityCertificate> is_reducible(const DigitalImage& X,
                                               std::uint64_t budget = kDefaultMapBudget);

// For a No verdict the certificate is a 2-stage homotopy from the identity to
// a distinct map.
Decision<Homotopy> is_rigid(const DigitalImage& X,
                            std::uint64_t budget = kDefaultMapBudget);

Decision<Homotopy> homotopic(const DigitalMap& f, const DigitalMap& g,
                             std::uint64_t budget = kDefaultMapBudget);

Decision<EquivalenceCertificate> homotopy_equivalent(
    const DigitalImage& X, const DigitalImage& Y,
    std::uint64_t budget = kDefaultMapBudget);

// Iterated reducibility. definite means the final core is certainly
// irreducible (its identity component was exhausted).
struct CoreReduction {
  DigitalImage core;
  std::optional<EquivalenceCertificate> equiv;  // X ~ core; absent when core == X
  bool definite = false;
};
CoreReduction reduce_to_core(const DigitalImage& X,
                             std::uint64_t budget = kDefaultMapBudget);

struct HomotopyType2D {
  enum Kind { PointType, CycleType, OtherOrUnknown } kind = OtherOrUnknown;
  int cycle_m = 0;
  std::string evidence;
  std::optional<Homotopy> contraction;                 // PointType
  std::optional<EquivalenceCertificate> cycle_equiv;   // CycleType: X ~ generated C_m
};
HomotopyType2D classify_homotopy_type_2d(const DigitalImage& X,
                                         std::uint64_t budget = kDefaultMapBudget);

}  // namespace digitop
