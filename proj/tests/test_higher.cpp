#include <doctest.h>

#include "digitop/corpus.hpp"
#include "digitop/curves.hpp"
#include "digitop/higher.hpp"
#include "digitop/image.hpp"
#include "digitop/planner.hpp"

using namespace digitop;

namespace {

CurveWitness cw(int m, int kind) {
  auto C = generate_cycle(m, AdjacencyKind::from_name(kind));
  auto w = detect_simple_closed_curve(C);
  REQUIRE(w.has_value());
  return *w;
}

}  // namespace

TEST_CASE("order_respecting follows the cyclic order with one wrap") {
  CurveWitness w = cw(6, 8);
  const auto& o = w.ordering;
  auto t = [&](std::initializer_list<int> pos) {
    std::vector<int> tuple;
    for (int p : pos) tuple.push_back(o[p]);
    return tuple;
  };
  CHECK(order_respecting(t({0, 1, 3}), w.ordering));
  CHECK_FALSE(order_respecting(t({1, 0, 2}), w.ordering));
  CHECK(order_respecting(t({5, 0, 1}), w.ordering));
  CHECK(order_respecting(t({2, 2, 2}), w.ordering));
  CHECK_FALSE(order_respecting(t({0, 2, 1}), w.ordering));
}

TEST_CASE("synthesized section tables fully verify on small cycles") {
  for (auto [m, kind, n] : {std::tuple{6, 8, 3}, {6, 8, 4}, {8, 4, 3}}) {
    CurveWitness w = cw(m, kind);
    HigherPlanner plan = synthesize_higher_planner(w, n, VerifyLevel::Full);
    CHECK(plan.part_count() == 2);
    HigherReport rep = verify_higher_planner(w.image, plan, VerifyLevel::Full);
    CHECK(rep.ok);
    // coverage is the whole tuple space
    std::size_t entries = 0;
    for (const auto& part : plan.parts) entries += part.size();
    std::size_t want = 1;
    for (int i = 0; i < n; ++i) want *= m;
    CHECK(entries == want);
  }
}

TEST_CASE("section length is independent of arity") {
  CurveWitness w = cw(6, 8);
  auto p3 = synthesize_higher_planner(w, 3, VerifyLevel::Full);
  auto p4 = synthesize_higher_planner(w, 4, VerifyLevel::Full);
  CHECK(p3.length == p4.length);
}

TEST_CASE("arity beyond the point count still verifies anchors") {
  CurveWitness w = cw(6, 8);
  HigherPlanner plan = synthesize_higher_planner(w, 7, VerifyLevel::AnchorsOnly);
  HigherReport rep = verify_higher_planner(w.image, plan, VerifyLevel::AnchorsOnly);
  CHECK(rep.ok);
}

TEST_CASE("unsupported curves are rejected") {
  CHECK_THROWS_AS(synthesize_higher_planner(cw(4, 8), 3), input_error);
  CHECK_THROWS_AS(synthesize_higher_planner(cw(6, 8), 1), input_error);
}

TEST_CASE("higher planner files round-trip") {
  CurveWitness w = cw(6, 8);
  HigherPlanner plan = synthesize_higher_planner(w, 3, VerifyLevel::Full);
  std::string text = serialize_higher_planner(w.image, plan);
  HigherPlanner back = parse_higher_planner(text, w.image);
  CHECK(back.n == plan.n);
  CHECK(back.length == plan.length);
  CHECK(verify_higher_planner(w.image, back, VerifyLevel::Full).ok);

  CHECK_THROWS_AS(parse_higher_planner("parts 2\nn 3\nlength 4\n", w.image),
                  parse_error);  // header order is fixed
}

TEST_CASE("higher verification flags mutations") {
  CurveWitness w = cw(6, 8);
  HigherPlanner plan = synthesize_higher_planner(w, 3, VerifyLevel::Full);

  SUBCASE("missing tuple") {
    HigherPlanner bad = plan;
    bad.parts[1].pop_back();
    CHECK_FALSE(verify_higher_planner(w.image, bad, VerifyLevel::AnchorsOnly).ok);
  }
  SUBCASE("endpoint mismatch") {
    HigherPlanner bad = plan;
    auto& e = bad.parts[0][2];
    e.walk.back() = (e.walk.back() + 1) % w.image.size();
    CHECK_FALSE(verify_higher_planner(w.image, bad, VerifyLevel::AnchorsOnly).ok);
  }
  SUBCASE("middle anchor off the walk") {
    HigherPlanner bad = plan;
    // constant walk at the tuple head cannot visit a distinct middle anchor
    for (auto& part : bad.parts)
      for (auto& e : part)
        if (e.tuple[1] != e.tuple[0]) {
          e.walk.assign(e.walk.size(), e.tuple[0]);
          e.walk.back() = e.tuple.back();
          CHECK_FALSE(verify_higher_planner(w.image, bad, VerifyLevel::AnchorsOnly).ok);
          return;
        }
    FAIL("no entry with a distinct middle anchor");
  }
  SUBCASE("continuity break") {
    HigherPlanner bad = plan;
    // rerouting one tuple the long way around breaks closeness with a
    // same-part neighbor while keeping anchors and walk validity intact
    auto& part = bad.parts[0];
    bool mutated = false;
    for (auto& e : part) {
      if (e.tuple[0] == e.tuple[1] && e.tuple[1] == e.tuple[2]) {
        int m = w.m();
        std::vector<int> pos(w.image.size());
        for (int t = 0; t < m; ++t) pos[w.ordering[t]] = t;
        std::vector<int> walk;
        int a = pos[e.tuple[0]];
        for (int t = 0; t <= (int)e.walk.size() - 1; ++t)
          walk.push_back(w.ordering[(a + std::min<int>(t, m)) % m]);
        // keep the endpoint anchored
        while (walk.size() < e.walk.size()) walk.push_back(e.tuple.back());
        walk.back() = e.tuple.back();
        e.walk = walk;
        mutated = true;
        break;
      }
    }
    REQUIRE(mutated);
    CHECK_FALSE(verify_higher_planner(w.image, bad, VerifyLevel::Full).ok);
  }
}

TEST_CASE("tcn on intervals is 1 with a verified section") {
  DigitalImage I = parse_image("dim 1\nk 1\np 0\np 1\np 2\np 3\np 4\n");
  for (int n : {2, 3, 4}) {
    TCnResult r = tcn_classify(I, n);
    CHECK(r.value == 1);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->part_count() == 1);
    CHECK(verify_higher_planner(I, *r.witness, VerifyLevel::Full).ok);
  }
}

TEST_CASE("tcn matches tc at arity 2") {
  DigitalImage C6 = generate_cycle(6, AdjacencyKind::from_name(8));
  TCnResult r2 = tcn_classify(C6, 2);
  TCResult tc = tc_classify(C6);
  CHECK(r2.value == tc.value);
  REQUIRE(r2.witness.has_value());
  CHECK(verify_higher_planner(C6, *r2.witness, VerifyLevel::Full).ok);
}

TEST_CASE("tcn of the 6-cycle at arity 3 is 2") {
  DigitalImage C6 = generate_cycle(6, AdjacencyKind::from_name(8));
  TCnResult r = tcn_classify(C6, 3);
  CHECK(r.value == 2);
  REQUIRE(r.witness.has_value());
  REQUIRE(r.witness_image.has_value());
  CHECK(verify_higher_planner(*r.witness_image, *r.witness, VerifyLevel::Full).ok);
  CHECK_FALSE(r.lower_bound_evidence.empty());
}

TEST_CASE("tcn of a contractible image is 1 via the contraction point") {
  DigitalImage C4 = generate_cycle(4, AdjacencyKind::from_name(8));
  TCnResult r = tcn_classify(C4, 3);
  CHECK(r.value == 1);
  REQUIRE(r.witness.has_value());
  CHECK(verify_higher_planner(C4, *r.witness, VerifyLevel::Full).ok);
}

TEST_CASE("global section refuter") {
  DigitalImage C6 = generate_cycle(6, AdjacencyKind::from_name(8));
  RefuterResult rr = global_section_refuter(C6, 3, 8);
  CHECK(rr.section_exists == Verdict::No);
  CHECK_FALSE(rr.note.empty());

  DigitalImage C4 = generate_cycle(4, AdjacencyKind::from_name(8));
  RefuterResult ok = global_section_refuter(C4, 2, 8);
  CHECK(ok.section_exists == Verdict::Yes);
  REQUIRE(ok.witness.has_value());
  CHECK(verify_higher_planner(C4, *ok.witness, VerifyLevel::Full).ok);
}

TEST_CASE("fibrational substitute checks") {
  DigitalImage C6 = generate_cycle(6, AdjacencyKind::from_name(8));
  FibrationalCheck f2 = check_fibrational_substitute(C6, 2);
  CHECK(f2.verdict == Verdict::Yes);
  FibrationalCheck f3 = check_fibrational_substitute(C6, 3);
  CHECK(f3.verdict == Verdict::Unknown);  // no sound desk-scale certificate known

  DigitalImage pt = parse_image("dim 2\nk 2\np 0 0\n");
  CHECK(check_fibrational_substitute(pt, 3).verdict == Verdict::Yes);
}

TEST_CASE("corpus enumeration is canonical and connected") {
  auto k8 = enumerate_corpus(AdjacencyKind::from_name(8), 3, 4);
  CHECK(k8.size() == 83);
  for (const auto& X : k8) {
    CHECK(is_connected(X));
    CHECK(X.size() <= 4);
    CHECK(X.translated_to_origin() == X);
  }
  // deterministic naming
  CHECK(corpus_filename(k8.front()) == "k8_00.dimg");

  CHECK_THROWS_AS(enumerate_corpus(AdjacencyKind::from_name(8), 5, 4),
                  resource_limit_error);
  CHECK_THROWS_AS(enumerate_corpus(AdjacencyKind::from_name(8), 3, 10),
                  resource_limit_error);
}
