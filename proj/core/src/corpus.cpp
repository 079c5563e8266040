#include "digitop/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>

namespace digitop {

std::vector<DigitalImage> enumerate_corpus(const AdjacencyKind& kind, int window,
                                           int max_points) {
  if (kind.dim != 2) throw input_error("corpus enumeration is 2D only");
  if (window < 1 || max_points < 1)
    throw input_error("window and max_points must be positive");
  if (window > 4) throw resource_limit_error("window capped at 4");
  if (max_points > 9) throw resource_limit_error("max_points capped at 9");

  // Cells of the box in lexicographic order.
  std::vector<Point> cells;
  for (Coord x = 0; x < window; ++x)
    for (Coord y = 0; y < window; ++y) cells.push_back({x, y});
  int nc = static_cast<int>(cells.size());

  std::set<std::vector<Point>> seen;
  std::vector<DigitalImage> out;
  for (std::uint32_t mask = 1; mask < (1u << nc); ++mask) {
    if (std::popcount(mask) > max_points) continue;
    std::vector<Point> pts;
    for (int c = 0; c < nc; ++c)
      if (mask & (1u << c)) pts.push_back(cells[c]);
    DigitalImage img(pts, kind);
    if (!is_connected(img)) continue;
    DigitalImage canon = img.translated_to_origin();
    if (seen.insert(canon.points()).second) out.push_back(std::move(canon));
  }

  std::sort(out.begin(), out.end(), [](const DigitalImage& a, const DigitalImage& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.points() < b.points();
  });
  return out;
}

std::string corpus_filename(const DigitalImage& X) {
  std::string name = "k" + std::to_string(X.kind().name()) + "_";
  bool first = true;
  for (const Point& p : X.points()) {
    if (!first) name += ".";
    first = false;
    for (Coord c : p) name += std::to_string(c);
  }
  return name + ".dimg";
}

}  // namespace digitop
