#include <doctest.h>

#include <algorithm>
#include <set>

#include "digitop/curves.hpp"
#include "digitop/image.hpp"

using namespace digitop;

namespace {

std::set<Point> point_set(const DigitalImage& X) {
  return {X.points().begin(), X.points().end()};
}

}  // namespace

TEST_CASE("adjacency kind names round-trip") {
  for (int name : {2, 4, 8, 6, 18, 26}) {
    AdjacencyKind k = AdjacencyKind::from_name(name);
    CHECK(k.name() == name);
  }
  CHECK(AdjacencyKind::from_name(4).dim == 2);
  CHECK(AdjacencyKind::from_name(4).k == 1);
  CHECK(AdjacencyKind::from_name(8).k == 2);
  CHECK(AdjacencyKind::from_name(26).dim == 3);
  CHECK_THROWS_AS(AdjacencyKind::from_name(5), input_error);
}

TEST_CASE("c_k adjacency basics") {
  AdjacencyKind k4 = AdjacencyKind::from_name(4);
  AdjacencyKind k8 = AdjacencyKind::from_name(8);
  CHECK(adjacent({0, 0}, {0, 1}, k4));
  CHECK_FALSE(adjacent({0, 0}, {1, 1}, k4));
  CHECK(adjacent({0, 0}, {1, 1}, k8));
  CHECK_FALSE(adjacent({0, 0}, {0, 2}, k8));
  // adjacency is defined on distinct points only
  CHECK_THROWS_AS(adjacent({0, 0}, {0, 0}, k8), input_error);
  CHECK(adjacent_or_equal({0, 0}, {0, 0}, k8));
}

TEST_CASE("product adjacency includes the all-equal case") {
  AdjacencyKind k8 = AdjacencyKind::from_name(8);
  CHECK(product_adjacent({0, 0}, {1, 1}, {0, 0}, {1, 1}, k8, k8));
  CHECK(product_adjacent({0, 0}, {1, 1}, {0, 1}, {1, 1}, k8, k8));
  CHECK_FALSE(product_adjacent({0, 0}, {1, 1}, {0, 2}, {1, 1}, k8, k8));
}

TEST_CASE("image canonicalization and parsing") {
  DigitalImage X = parse_image("dim 2\nk 2\np 1 1\np 0 0\n# comment line\n");
  CHECK(X.size() == 2);
  CHECK(X.point(0) == Point{0, 0});  // lexicographic canonical order
  CHECK(X.index_of({1, 1}) == 1);
  CHECK(X.adjacent_indices(0, 1));
  CHECK_THROWS_AS(parse_image("dim 2\nk 2\np 1 1\np 1 1\n"), parse_error);

  DigitalImage Y = parse_image(serialize_image(X));
  CHECK(X == Y);

  CHECK_THROWS_AS(parse_image("dim 2\np 0 0\n"), parse_error);
  CHECK_THROWS_AS(parse_image("dim 2\nk 2\np 0\n"), parse_error);
  CHECK_THROWS_AS(parse_image(""), parse_error);
}

TEST_CASE("connectivity") {
  DigitalImage X = parse_image("dim 2\nk 1\np 0 0\np 0 1\np 2 2\n");
  CHECK_FALSE(is_connected(X));
  CHECK(component_count(X) == 2);
  DigitalImage Y = parse_image("dim 2\nk 2\np 0 0\np 1 1\np 2 2\n");
  CHECK(is_connected(Y));
}

TEST_CASE("generated 6-cycle has the expected point set") {
  DigitalImage C6 = generate_cycle(6, AdjacencyKind::from_name(8));
  std::set<Point> want{{0, 0}, {1, -1}, {1, 1}, {2, -1}, {2, 1}, {3, 0}};
  CHECK(point_set(C6) == want);
  auto cw = detect_simple_closed_curve(C6);
  REQUIRE(cw.has_value());
  CHECK(cw->m() == 6);
}

TEST_CASE("generated 8-cycle kind 4 is the rectangle boundary") {
  DigitalImage C8 = generate_cycle(8, AdjacencyKind::from_name(4));
  std::set<Point> want{{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {2, 0}, {1, 0}};
  CHECK(point_set(C8) == want);
  REQUIRE(detect_simple_closed_curve(C8).has_value());
}

TEST_CASE("cycle emptiness cases") {
  AdjacencyKind k4 = AdjacencyKind::from_name(4);
  AdjacencyKind k8 = AdjacencyKind::from_name(8);
  CHECK_THROWS_AS(generate_cycle(5, k4), emptiness_error);
  CHECK_THROWS_AS(generate_cycle(5, k8), emptiness_error);
  CHECK_THROWS_AS(generate_cycle(6, k4), emptiness_error);
  CHECK_THROWS_AS(generate_cycle(7, k4), emptiness_error);
  CHECK_THROWS_AS(generate_cycle(3, k8), input_error);
}

TEST_CASE("generated cycles verify for a range of m") {
  for (int m : {4, 6, 7, 8, 9, 10}) {
    DigitalImage C = generate_cycle(m, AdjacencyKind::from_name(8));
    auto cw = detect_simple_closed_curve(C);
    REQUIRE(cw.has_value());
    CHECK(cw->m() == m);
  }
  for (int m : {4, 8, 10, 12}) {
    DigitalImage C = generate_cycle(m, AdjacencyKind::from_name(4));
    auto cw = detect_simple_closed_curve(C);
    REQUIRE(cw.has_value());
    CHECK(cw->m() == m);
  }
}

TEST_CASE("curve detection rejects chords and non-cycles") {
  // 2x2 block under kind 8 is a clique, not a curve
  DigitalImage block = parse_image("dim 2\nk 2\np 0 0\np 0 1\np 1 0\np 1 1\n");
  CHECK_FALSE(detect_simple_closed_curve(block).has_value());
  // a path is not closed
  DigitalImage path = parse_image("dim 2\nk 2\np 0 0\np 1 0\np 2 0\np 3 0\n");
  CHECK_FALSE(detect_simple_closed_curve(path).has_value());
  // 2x2 block under kind 4 is exactly a 4-cycle
  DigitalImage square = parse_image("dim 2\nk 1\np 0 0\np 0 1\np 1 0\np 1 1\n");
  auto cw = detect_simple_closed_curve(square);
  REQUIRE(cw.has_value());
  CHECK(cw->m() == 4);
}

TEST_CASE("search_cycles finds canonical representatives up to translation") {
  auto found = search_cycles(4, AdjacencyKind::from_name(4), 4);
  REQUIRE(found.size() >= 1);
  for (const auto& C : found) {
    auto cw = detect_simple_closed_curve(C);
    REQUIRE(cw.has_value());
    CHECK(cw->m() == 4);
    CHECK(C.translated_lexmin_to_origin() == C);
  }
  CHECK(search_cycles(5, AdjacencyKind::from_name(8), 5).empty());
}
