#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "digitop/image.hpp"

namespace digitop {

// A digital simple closed curve: the adjacency graph is exactly one chordless
// m-cycle (m >= 4). ordering[t] is the canonical index of the t-th point along
// the cycle; ordering[0] is the lexicographically least point and the
// direction is fixed by ordering[1] < ordering[m-1].
struct CurveWitness {
  DigitalImage image;
  std::vector<int> ordering;

  int m() const { return static_cast<int>(ordering.size()); }
};

// Witness iff |X| >= 4, every point has exactly two neighbors and the
// adjacency graph is a single cycle (equivalently the three simple-closed-
// curve conditions hold for the returned ordering).
std::optional<CurveWitness> detect_simple_closed_curve(const DigitalImage& X);

// Concrete m-point curve for kind 4 or 8, or emptiness_error when no such
// curve exists: m=5 (both kinds), and odd m or m in {6,7} for kind 4.
// Kind 8 uses the staircase family for even m and falls back to exhaustive
// search for odd m >= 7; kind 4 uses rectangle boundaries.
DigitalImage generate_cycle(int m, const AdjacencyKind& kind);

// All m-point simple closed curves fitting a window^dim box, up to
// translation (lexicographically least point moved to the origin),
// deterministically ordered. window >= m makes an empty result conclusive.
std::vector<DigitalImage> search_cycles(int m, const AdjacencyKind& kind,
                                        int window,
                                        std::uint64_t node_cap = 50'000'000);

}  // namespace digitop
