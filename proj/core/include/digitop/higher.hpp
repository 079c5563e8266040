#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "digitop/curves.hpp"
#include "digitop/image.hpp"
#include "digitop/planner.hpp"

namespace digitop {

// Cover of X^n by parts with section tables. Each n-tuple in a part receives
// an anchored L-step walk: walk[0] is the first anchor, walk[L] the last, and
// every anchor appears somewhere on the walk. Within a part, tuples that are
// pointwise equal-or-adjacent must receive pointwise equal-or-adjacent walks.
struct HigherPlanner {
  struct Entry {
    std::vector<int> tuple;  // n canonical indices (the anchors, in order)
    std::vector<int> walk;   // L+1 canonical indices
  };
  int n = 0;
  int length = 0;
  std::vector<std::vector<Entry>> parts;

  int part_count() const { return static_cast<int>(parts.size()); }
};

// Consecutive tuple entries never step backwards in the cycle ordering:
// index(a) <= index(b), or exactly the wraparound (last, first).
bool order_respecting(const std::vector<int>& tuple, const std::vector<int>& ordering);

enum class VerifyLevel { Full, AnchorsOnly };

struct HigherReport {
  bool ok = true;
  VerifyLevel level = VerifyLevel::Full;
  std::vector<std::string> violations;
};

// Coverage of X^n, anchor identity (walk endpoints = outer anchors), anchor
// membership, walk validity; Full additionally checks per-part continuity
// (quadratic in part size, so large instances use AnchorsOnly).
HigherReport verify_higher_planner(const DigitalImage& X, const HigherPlanner& plan,
                                   VerifyLevel level = VerifyLevel::Full);

// Builds a two-part section table for X^n over a cycle witness and
// post-verifies it at the requested level. Small instances first try the
// order-based routing tables (cyclic-order tuples leg by leg, the rest via
// sorted anchors); when those fail verification the repair construction takes
// over: a full clockwise sweep from the first anchor followed by a clamped
// descent to the last one, with the two parts split by the first-to-last
// cyclic displacement. The repair tables have uniform length 3m - (m-1)/2 - 3
// independent of n. Throws synthesis_error if verification fails, input_error
// for unsupported curves (8-adjacent needs m >= 6, 4-adjacent m >= 8, n >= 2).
HigherPlanner synthesize_higher_planner(const CurveWitness& C, int n,
                                        VerifyLevel level = VerifyLevel::Full,
                                        std::uint64_t budget = kDefaultCspBudget);

// Planner format plus an "n <n>" header; entry lines carry the n anchor
// points before the ':'.
std::string serialize_higher_planner(const DigitalImage& X, const HigherPlanner& plan);
HigherPlanner parse_higher_planner(const std::string& text, const DigitalImage& X);

struct TCnResult {
  int value = 0;  // 0 = unknown
  TCResult::Method method = TCResult::Rule;
  std::optional<HigherPlanner> witness;
  // The image the witness's indices refer to: X itself, or the core cycle for
  // cycle-equivalent images (anchored sections do not transport through the
  // equivalence, so the planner lives on the core).
  std::optional<DigitalImage> witness_image;
  std::string lower_bound_evidence;
  std::string evidence;
  SearchStats stats;
};

// n = 1, one point, 1D, or contractible -> 1 with a verified global section;
// cycle-equivalent (kind 8, m >= 6 / kind 4, m >= 8) -> 2 with a planner
// witness on the core cycle; otherwise unknown with evidence.
TCnResult tcn_classify(const DigitalImage& X, int n,
                       std::uint64_t budget = kDefaultMapBudget);

struct RefuterResult {
  // Yes: a genus-1 witness exists (returned). No: no global section at any
  // length <= L_max, proved by complete search. Unknown: budget.
  Verdict section_exists = Verdict::Unknown;
  std::optional<HigherPlanner> witness;
  std::string note;
  SearchStats stats;
};

// Decides whether a one-part section table exists at any length <= L_max.
// The tuples (c, b, ..., b) restrict any such table to a contraction of X, so
// a non-contractible image is refuted outright at every length; contractible
// images yield a section through the contraction point when its length fits.
// Otherwise single-part section CSPs run at L = 1..L_max, cheapest sound
// restrictions first (one row, then all pairs, then the full tuple space).
RefuterResult global_section_refuter(const DigitalImage& X, int n, int L_max,
                                     std::uint64_t budget = kDefaultCspBudget);

struct FibrationalCheck {
  Verdict verdict = Verdict::Unknown;
  std::string note;
  SearchStats stats;
};

// Checks that anchored-path space over X substitutes the diagonal map: the
// section h(x) = (constant path, x, ..., x) composes to the diagonal exactly,
// and for n = 2 an explicit tail-freezing homotopy witnesses that the space
// deformation-retracts to the constant paths. n >= 3 is reported unknown.
FibrationalCheck check_fibrational_substitute(const DigitalImage& X, int n,
                                              std::uint64_t budget = kDefaultMapBudget);

}  // namespace digitop
