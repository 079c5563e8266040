#pragma once

#include <vector>

#include "digitop/image.hpp"

namespace digitop {

// An L-step digital path: L+1 canonical point indices with consecutive
// entries equal or adjacent (a continuous map from [0,L]_Z into the image).
struct DigitalPath {
  std::vector<int> steps;

  int length() const { return static_cast<int>(steps.size()) - 1; }
  int start() const { return steps.front(); }
  int end() const { return steps.back(); }
  bool operator==(const DigitalPath& o) const { return steps == o.steps; }
};

bool is_path(const DigitalImage& X, const DigitalPath& f);

// Path product: follows f, then g. g must start where f ends.
DigitalPath concat_paths(const DigitalPath& f, const DigitalPath& g);

// Pad to exactly L steps by repeating the endpoint. L below the current
// length is an input error (paths are never truncated).
DigitalPath normalize_path(const DigitalPath& f, int L);

// Pointwise equal-or-adjacent after both are normalized to L steps.
bool paths_adjacent(const DigitalImage& X, const DigitalPath& f, const DigitalPath& g,
                    int L);

}  // namespace digitop
