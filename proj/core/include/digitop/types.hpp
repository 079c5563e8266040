#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace digitop {

inline constexpr const char* kVersion = "0.1.0";

using Coord = int;
// A lattice point; coords.size() is the ambient dimension.
using Point = std::vector<Coord>;

// c_k adjacency on Z^dim: two distinct points are adjacent when at most k
// coordinates differ, each by exactly 1, and the rest are equal.
struct AdjacencyKind {
  int dim = 0;
  int k = 0;

  bool operator==(const AdjacencyKind&) const = default;

  // Conventional name (2, 4, 8, 6, 18, 26) or -1 when the pair has none.
  int name() const;
  static AdjacencyKind from_name(int name);
  static AdjacencyKind from_dim_k(int dim, int k);
};

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// "No such object exists" (e.g. C_5): a definite mathematical verdict, not a failure.
struct emptiness_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct synthesis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Verdict { Yes, No, Unknown };

std::string to_string(Verdict v);

struct SearchStats {
  std::uint64_t visited = 0;   // states expanded (maps, CSP nodes, ...)
  std::uint64_t budget = 0;    // the cap that was in force
  bool exhausted = false;      // the whole reachable space was explored
  std::string note;
};

// Yes/No verdicts carry a certificate or rely on stats.exhausted as the
// completed-search log; Unknown means the budget ran out first.
template <typename Cert>
struct Decision {
  Verdict verdict = Verdict::Unknown;
  std::optional<Cert> certificate;
  SearchStats stats;

  bool yes() const { return verdict == Verdict::Yes; }
  bool no() const { return verdict == Verdict::No; }
  bool unknown() const { return verdict == Verdict::Unknown; }
};

}  // namespace digitop
