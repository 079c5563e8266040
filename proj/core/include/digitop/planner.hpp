#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "digitop/curves.hpp"
#include "digitop/image.hpp"
#include "digitop/morph.hpp"
#include "digitop/paths.hpp"

namespace digitop {

inline constexpr std::uint64_t kDefaultCspBudget = 10'000'000;

// Cover of X x X by parts, each carrying a section table: every covered pair
// gets an L-step walk from a to b, and within one part product-adjacent pairs
// must receive pointwise equal-or-adjacent walks.
struct MotionPlanner {
  struct Entry {
    int a = 0, b = 0;       // canonical indices
    std::vector<int> walk;  // L+1 canonical indices, walk[0]=a, walk[L]=b
  };
  int length = 0;
  std::vector<std::vector<Entry>> parts;

  int part_count() const { return static_cast<int>(parts.size()); }
};

struct PlannerReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Coverage of X x X, walk validity, endpoints, and per-part continuity.
PlannerReport verify_planner(const DigitalImage& X, const MotionPlanner& plan);

// m >= 5: the two-part cyclic-displacement construction; m = 4: one part
// (geodesic sections, else sections built from a contraction). Always
// post-verified; alternate cut points and orientations are tried before
// giving up with synthesis_error.
MotionPlanner synthesize_cycle_planner(const CurveWitness& C);

// File format: "parts <k>", "length <L>", then one line per table entry:
// "s <j> <a coords> <b coords> : <L+1 walk points>".
std::string serialize_planner(const DigitalImage& X, const MotionPlanner& plan);
MotionPlanner parse_planner(const std::string& text, const DigitalImage& X);

struct TCResult {
  int value = 0;  // 0 = unknown
  enum Method { Rule, Certificate, Oracle } method = Rule;
  std::optional<MotionPlanner> witness;
  std::string lower_bound_evidence;  // non-empty when value >= 2 is certified
  bool needs_oracle = false;  // classification fell back to the bare rule
  std::string evidence;
  SearchStats stats;
};
std::string to_string(TCResult::Method m);

// Decision ladder: one-point / 1D interval -> 1 (rule, with a verified global
// section); contractible -> 1 (certificate); cycle-equivalent -> 2 (planner
// transported through the equivalence + non-contractibility lower bound);
// otherwise the bare rule value with needs_oracle set.
TCResult tc_classify(const DigitalImage& X, std::uint64_t budget = kDefaultMapBudget);

// Independent search: TC = 1 only by finding a global section (iterative
// deepening L = 1..L_max), TC >= 2 only by exhausting the identity component
// (non-contractibility), TC <= 2 by a joint (part, walk) cover search.
// L_max = 0 means 4*|X|.
TCResult tc_oracle(const DigitalImage& X, int L_max = 0,
                   std::uint64_t budget = kDefaultCspBudget);

}  // namespace digitop
