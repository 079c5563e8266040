#pragma once

#include <string>
#include <vector>

#include "digitop/image.hpp"

namespace digitop {

// Every connected 2D image with at most max_points points that fits a
// window x window box, up to translation (bounding-box corner at the origin),
// deterministically ordered by size then point list. window is capped at 4
// and max_points at 9 (resource_limit_error beyond).
std::vector<DigitalImage> enumerate_corpus(const AdjacencyKind& kind, int window,
                                           int max_points);

// Stable filename for a corpus member, e.g. "k8_00.01.11.dimg" for the
// 8-adjacent image {(0,0),(0,1),(1,1)}.
std::string corpus_filename(const DigitalImage& X);

}  // namespace digitop
