#include <doctest.h>

#include "digitop/curves.hpp"
#include "digitop/image.hpp"
#include "digitop/morph.hpp"

using namespace digitop;

namespace {

DigitalImage c6() { return generate_cycle(6, AdjacencyKind::from_name(8)); }
DigitalImage c4() { return generate_cycle(4, AdjacencyKind::from_name(8)); }

DigitalImage interval(int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({i});
  return {pts, AdjacencyKind::from_name(2)};
}

}  // namespace

TEST_CASE("continuity of maps") {
  DigitalImage X = c6();
  CHECK(is_continuous(identity_map(X)));
  CHECK(is_continuous(constant_map(X, X, 0)));

  // collapse one point onto a non-neighbor: breaks continuity at its edges
  DigitalMap f = identity_map(X);
  f.values[0] = 5;
  bool adjacent_everywhere = true;
  for (int nb : X.neighbors()[0])
    adjacent_everywhere &= X.adjacent_indices(5, nb) || nb == 5;
  if (!adjacent_everywhere) CHECK_FALSE(is_continuous(f));
}

TEST_CASE("homotopy checker catches stage and trajectory violations") {
  DigitalImage X = c4();
  Homotopy h{X, X, {}};
  h.stages.push_back(identity_map(X).values);
  h.stages.push_back(identity_map(X).values);
  CHECK(check_homotopy(h).ok);

  // teleporting a point between stages is flagged
  Homotopy bad = h;
  int far = -1;
  for (int j = 0; j < X.size(); ++j)
    if (j != 0 && !X.adjacent_indices(0, j)) far = j;
  REQUIRE(far >= 0);
  bad.stages[1][0] = far;
  CHECK_FALSE(check_homotopy(bad).ok);
}

TEST_CASE("homotopy certificates round-trip through text") {
  DigitalImage X = c4();
  auto d = is_contractible(X);
  REQUIRE(d.yes());
  REQUIRE(d.certificate.has_value());
  std::string text = serialize_homotopy(*d.certificate);
  Homotopy back = parse_homotopy(text, X, X);
  CHECK(back.stages == d.certificate->stages);
  CHECK(check_homotopy(back).ok);
}

TEST_CASE("contractibility verdicts") {
  auto yes = is_contractible(c4());
  REQUIRE(yes.yes());
  CHECK(check_homotopy(*yes.certificate).ok);
  // certificate really joins the identity to a constant
  const auto& st = yes.certificate->stages;
  bool first_id = true, last_const = true;
  for (int i = 0; i < c4().size(); ++i) {
    first_id &= st.front()[i] == i;
    last_const &= st.back()[i] == st.back()[0];
  }
  CHECK(first_id);
  CHECK(last_const);

  auto no = is_contractible(c6());
  CHECK(no.no());
  CHECK(no.stats.exhausted);

  CHECK(is_contractible(interval(7)).yes());
}

TEST_CASE("reducibility") {
  // a 2-point image folds to a point
  DigitalImage two = parse_image("dim 2\nk 2\np 0 0\np 0 1\n");
  auto d = is_reducible(two);
  REQUIRE(d.yes());
  CHECK(d.certificate->smaller.size() < two.size());
  CHECK(check_equivalence(d.certificate->equiv).ok);

  // the 6-cycle is irreducible
  CHECK(is_reducible(c6()).no());
  // a single point is irreducible
  CHECK(is_reducible(parse_image("dim 2\nk 2\np 0 0\n")).no());
}

TEST_CASE("rigidity") {
  auto d = is_rigid(c6());
  REQUIRE(d.no());  // rotations move the identity
  REQUIRE(d.certificate.has_value());
  CHECK(check_homotopy(*d.certificate).ok);
  CHECK(d.certificate->stages.front() != d.certificate->stages.back());

  DigitalImage point = parse_image("dim 2\nk 2\np 0 0\n");
  CHECK(is_rigid(point).yes());
}

TEST_CASE("homotopic maps on a cycle split by rotation class") {
  DigitalImage X = c6();
  auto cw = detect_simple_closed_curve(X);
  REQUIRE(cw.has_value());
  // one-step rotation along the cycle ordering
  std::vector<int> rot(X.size());
  for (int t = 0; t < 6; ++t) rot[cw->ordering[t]] = cw->ordering[(t + 1) % 6];
  DigitalMap rotation{X, X, rot};
  REQUIRE(is_continuous(rotation));
  auto d = homotopic(identity_map(X), rotation);
  CHECK(d.yes());
  auto e = homotopic(identity_map(X), constant_map(X, X, 0));
  CHECK(e.no());
}

TEST_CASE("homotopy equivalence decisions") {
  auto d = homotopy_equivalent(c4(), interval(3));
  REQUIRE(d.yes());  // both contractible
  CHECK(check_equivalence(*d.certificate).ok);

  auto n = homotopy_equivalent(c6(), c4());
  CHECK(n.no());  // contractibility differs

  auto same = homotopy_equivalent(c6(), c6());
  REQUIRE(same.yes());
  CHECK(check_equivalence(*same.certificate).ok);
}

TEST_CASE("core reduction reaches an irreducible image") {
  DigitalImage blob = parse_image("dim 2\nk 2\np 0 0\np 0 1\np 1 0\np 1 1\np 2 0\n");
  CoreReduction cr = reduce_to_core(blob);
  CHECK(cr.definite);
  CHECK(cr.core.size() == 1);
  if (cr.equiv) CHECK(check_equivalence(*cr.equiv).ok);

  CoreReduction cy = reduce_to_core(c6());
  CHECK(cy.definite);
  CHECK(cy.core.size() == 6);
}

TEST_CASE("2d homotopy type classification") {
  auto pt = classify_homotopy_type_2d(c4());
  CHECK(pt.kind == HomotopyType2D::PointType);
  REQUIRE(pt.contraction.has_value());
  CHECK(check_homotopy(*pt.contraction).ok);

  auto cy = classify_homotopy_type_2d(c6());
  CHECK(cy.kind == HomotopyType2D::CycleType);
  CHECK(cy.cycle_m == 6);
  REQUIRE(cy.cycle_equiv.has_value());
  CHECK(check_equivalence(*cy.cycle_equiv).ok);
}

TEST_CASE("equivalence certificates compose") {
  DigitalImage a = interval(2), b = interval(3), c = c4();
  auto ab = homotopy_equivalent(a, b);
  auto bc = homotopy_equivalent(b, c);
  REQUIRE(ab.yes());
  REQUIRE(bc.yes());
  EquivalenceCertificate ac = compose_equivalence(*ab.certificate, *bc.certificate);
  CHECK(check_equivalence(ac).ok);
  CHECK(ac.forward.source == a);
  CHECK(ac.forward.target == c);
}
