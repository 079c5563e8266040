#pragma once

#include <cstdint>
#include <vector>

#include "digitop/image.hpp"
#include "digitop/morph.hpp"

namespace digitop {

// A continuous map from the m-cycle into a target image; values[t] is the
// canonical target index of the t-th cycle vertex. For m <= 3 the domain is
// the abstract cycle graph (1 point, an edge, a triangle), which has no
// lattice realization but still defines loops and L_m.
struct LoopMap {
  int m = 0;
  std::vector<int> values;

  bool operator==(const LoopMap& o) const { return m == o.m && values == o.values; }
};

// All continuous maps from the m-cycle into X, by backtracking around the
// cycle with a closure check on the wraparound edge; lexicographic order.
// More than cap loops -> resource_limit_error reporting the partial count.
std::vector<LoopMap> enumerate_loops(const DigitalImage& X, int m,
                                     std::uint64_t cap = 10'000'000);

// Injective, consecutive images adjacent, and no adjacency between
// non-consecutive images. Always false for m < 4 (a lattice simple closed
// curve needs at least 4 points).
bool is_simple_loop(const DigitalImage& X, const LoopMap& loop);

// Homotopy classes of m-loops. Two loops are homotopic exactly when they are
// joined by a path in the graph whose vertices are all m-loops and whose
// edges join pointwise equal-or-adjacent loops, so the classes are the
// connected components of that graph and a completed component scan is exact.
struct LoopClassTable {
  int m = 0;
  std::uint64_t total = 0;            // loops enumerated
  bool definite = false;
  int count = 0;                      // L_m(X); meaningful when definite
  int lower = 1;                      // bounds gathered so far when not definite
  int upper = 0;                      // 0 means no upper bound was established
  std::vector<LoopMap> representatives;  // lex-least loop per class
  std::vector<int> class_of;          // enumeration index -> class id
  SearchStats stats;
};
LoopClassTable count_loop_classes(const DigitalImage& X, int m,
                                  std::uint64_t budget = kDefaultMapBudget);

}  // namespace digitop
