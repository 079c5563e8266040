#pragma once

#include <string>
#include <vector>

#include "digitop/types.hpp"

namespace digitop {

// Finite set of lattice points with a c_k adjacency. Points are stored in
// lexicographic order and deduplicated, so indices are canonical and every
// downstream search is deterministic. Immutable after construction.
class DigitalImage {
 public:
  DigitalImage(std::vector<Point> points, AdjacencyKind kind);

  const AdjacencyKind& kind() const { return kind_; }
  const std::vector<Point>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  int dim() const { return kind_.dim; }

  const Point& point(int i) const { return points_[i]; }
  // Index of p in canonical order, or -1.
  int index_of(const Point& p) const;
  bool contains(const Point& p) const { return index_of(p) >= 0; }

  // Sorted neighbor lists over canonical indices.
  const std::vector<std::vector<int>>& neighbors() const { return nbr_; }
  bool adjacent_indices(int i, int j) const;

  bool operator==(const DigitalImage& o) const {
    return kind_ == o.kind_ && points_ == o.points_;
  }

  // Copy translated so the per-axis minimum is the origin.
  DigitalImage translated_to_origin() const;
  // Copy translated so the lexicographically least point is the origin.
  DigitalImage translated_lexmin_to_origin() const;
  // Subimage induced by a sorted list of canonical indices.
  DigitalImage subimage(const std::vector<int>& indices) const;

 private:
  AdjacencyKind kind_;
  std::vector<Point> points_;
  std::vector<std::vector<int>> nbr_;
};

// c_k adjacency test. Distinct points with matching dimension required.
bool adjacent(const Point& p, const Point& q, const AdjacencyKind& kind);
bool adjacent_or_equal(const Point& p, const Point& q, const AdjacencyKind& kind);

// Product adjacency on pairs: each component equal or adjacent. Includes
// the all-equal case by definition.
bool product_adjacent(const Point& a1, const Point& a2, const Point& b1,
                      const Point& b2, const AdjacencyKind& k1,
                      const AdjacencyKind& k2);

bool is_connected(const DigitalImage& X);
// Connected component count.
int component_count(const DigitalImage& X);

// Text format: "dim <d>", "k <k>", then "p <c_1> ... <c_d>" per point.
// '#' starts a comment; blank lines ignored; points unordered in the file.
DigitalImage parse_image(const std::string& text);
std::string serialize_image(const DigitalImage& X);

DigitalImage load_image_file(const std::string& path);
void save_image_file(const DigitalImage& X, const std::string& path);

}  // namespace digitop
