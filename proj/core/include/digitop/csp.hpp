#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "digitop/image.hpp"

namespace digitop {

// One variable of a section CSP: an L-step walk in the image that starts at
// anchors.front(), ends at anchors.back(), and passes through every middle
// anchor. An optional seed walk is tried first during search.
struct SectionCspVar {
  std::vector<int> anchors;
  std::vector<int> seed;
};

// Joint assignment of (part, walk) per variable; walks of same-part variables
// joined by an edge must be pointwise equal-or-adjacent. With parts == 1 this
// is a plain global-section search; with parts == 2 it is the 2-cover search
// (a cover is recovered from the part labels).
struct SectionCsp {
  const DigitalImage* image = nullptr;
  int L = 0;
  int parts = 1;
  std::vector<SectionCspVar> vars;
  std::vector<std::pair<int, int>> edges;  // u < v
  std::uint64_t node_budget = 10'000'000;
  std::uint64_t domain_cap = 2'000'000;  // total enumerated walks, all vars
  std::vector<int> pin_part;         // per var: -1 free, else required part
  std::vector<int> part_preference;  // per var: part tried first; empty = 0
};

struct SectionCspResult {
  // Yes: satisfiable with the returned assignment. No: proved unsatisfiable
  // (complete exhaustion, domains never capped). Unknown: a budget hit first.
  Verdict verdict = Verdict::Unknown;
  std::vector<std::vector<int>> walks;  // per var, L+1 entries
  std::vector<int> part_of;             // per var
  bool domain_capped = false;
  SearchStats stats;
};

SectionCspResult solve_section_csp(const SectionCsp& problem);

}  // namespace digitop
