#include "digitop/paths.hpp"

#include <string>

namespace digitop {

bool is_path(const DigitalImage& X, const DigitalPath& f) {
  if (f.steps.empty()) return false;
  for (int v : f.steps)
    if (v < 0 || v >= X.size()) return false;
  for (size_t t = 0; t + 1 < f.steps.size(); ++t) {
    int a = f.steps[t], b = f.steps[t + 1];
    if (a != b && !X.adjacent_indices(a, b)) return false;
  }
  return true;
}

DigitalPath concat_paths(const DigitalPath& f, const DigitalPath& g) {
  if (f.steps.empty() || g.steps.empty())
    throw input_error("concat_paths: empty path");
  if (f.end() != g.start())
    throw input_error("concat_paths: second path must start at the first one's endpoint");
  DigitalPath h = f;
  h.steps.insert(h.steps.end(), g.steps.begin() + 1, g.steps.end());
  return h;
}

DigitalPath normalize_path(const DigitalPath& f, int L) {
  if (f.steps.empty()) throw input_error("normalize_path: empty path");
  if (f.length() > L)
    throw input_error("normalize_path: path has " + std::to_string(f.length()) +
                      " steps, longer than L=" + std::to_string(L));
  DigitalPath h = f;
  h.steps.resize(L + 1, f.steps.back());
  return h;
}

bool paths_adjacent(const DigitalImage& X, const DigitalPath& f, const DigitalPath& g,
                    int L) {
  DigitalPath a = normalize_path(f, L);
  DigitalPath b = normalize_path(g, L);
  for (int t = 0; t <= L; ++t) {
    if (a.steps[t] == b.steps[t]) continue;
    if (!X.adjacent_indices(a.steps[t], b.steps[t])) return false;
  }
  return true;
}

}  // namespace digitop
