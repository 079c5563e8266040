// Acceptance gate: nine end-to-end criteria, one PASS/FAIL line each.
// Exit code is the number of failed criteria.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "digitop/corpus.hpp"
#include "digitop/curves.hpp"
#include "digitop/higher.hpp"
#include "digitop/image.hpp"
#include "digitop/loops.hpp"
#include "digitop/morph.hpp"
#include "digitop/planner.hpp"
#include "property_checks.hpp"

using namespace digitop;

namespace {

DigitalImage cycle(int m, int kind) {
  return generate_cycle(m, AdjacencyKind::from_name(kind));
}

DigitalImage interval(int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back({i});
  return {pts, AdjacencyKind::from_name(2)};
}

std::string fmt(const char* f, auto... a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// Each criterion returns "" on success or a failure description.

std::string criterion_cycle_classification() {
  struct Case {
    int m, kind, expect;
  };
  for (auto [m, kind, expect] : std::vector<Case>{{4, 4, 1},
                                                  {4, 8, 1},
                                                  {6, 8, 2},
                                                  {7, 8, 2},
                                                  {8, 8, 2},
                                                  {8, 4, 2},
                                                  {10, 4, 2},
                                                  {12, 4, 2}}) {
    auto t0 = std::chrono::steady_clock::now();
    DigitalImage X = cycle(m, kind);
    TCResult r = tc_classify(X);
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string tag = fmt("m=%d kind %d", m, kind);
    if (r.value != expect)
      return tag + fmt(": value %d, expected %d", r.value, expect);
    if (!r.witness) return tag + ": no planner witness";
    if (!verify_planner(X, *r.witness).ok) return tag + ": witness failed verification";
    if (r.witness->part_count() != expect)
      return tag + fmt(": witness has %d parts", r.witness->part_count());
    if (expect >= 2 && r.lower_bound_evidence.empty())
      return tag + ": no lower-bound evidence";
    if (s > 60.0) return tag + fmt(": took %.1fs (limit 60s)", s);
  }
  return "";
}

std::string criterion_oracle_agreement() {
  int agreements = 0, images = 0;
  for (int kind : {8, 4})
    for (const auto& X : enumerate_corpus(AdjacencyKind::from_name(kind), 3, 6)) {
      ++images;
      TCResult c = tc_classify(X);
      TCResult o = tc_oracle(X);
      if (c.value != 0 && o.value != 0) {
        if (c.value != o.value)
          return corpus_filename(X) +
                 fmt(": classify says %d, oracle says %d", c.value, o.value);
        ++agreements;
      }
    }
  if (agreements < images - 10)
    return fmt("only %d/%d definite agreements", agreements, images);
  return "";
}

std::string criterion_interval_sections() {
  for (int size = 1; size <= 10; ++size)
    for (int n : {2, 3}) {
      DigitalImage I = interval(size);
      TCnResult r = tcn_classify(I, n);
      std::string tag = fmt("%d points, arity %d", size, n);
      if (r.value != 1) return tag + fmt(": value %d", r.value);
      if (!r.witness || !r.witness_image) return tag + ": no witness";
      if (r.witness->part_count() != 1) return tag + ": not a single section";
      if (!verify_higher_planner(*r.witness_image, *r.witness, VerifyLevel::Full).ok)
        return tag + ": witness failed verification";
    }
  return "";
}

std::string criterion_small_contractibility() {
  int certified = 0;
  for (int kind : {8, 4})
    for (const auto& X : enumerate_corpus(AdjacencyKind::from_name(kind), 3, 5)) {
      Decision<Homotopy> d = is_contractible(X);
      std::string tag = corpus_filename(X);
      if (!d.yes()) return tag + ": not decided contractible";
      if (!d.certificate) return tag + ": no certificate";
      if (!check_homotopy(*d.certificate).ok) return tag + ": certificate invalid";
      const auto& st = d.certificate->stages;
      bool id_first = st.front() == identity_map(X).values;
      bool const_last = true;
      for (int v : st.back()) const_last &= v == st.back().front();
      if (!id_first || !const_last) return tag + ": certificate endpoints wrong";
      ++certified;
    }
  if (certified < 100) return fmt("only %d images certified", certified);
  return "";
}

std::string criterion_cycle_search() {
  struct Case {
    int m, kind;
    bool empty;
  };
  for (auto [m, kind, empty] : std::vector<Case>{{5, 4, true},
                                                 {5, 8, true},
                                                 {6, 4, true},
                                                 {7, 4, true},
                                                 {6, 8, false},
                                                 {8, 4, false}}) {
    auto found = search_cycles(m, AdjacencyKind::from_name(kind), m);
    std::string tag = fmt("m=%d kind %d", m, kind);
    if (empty != found.empty())
      return tag + fmt(": %zu curves, expected %s", found.size(),
                       empty ? "none" : "some");
    if (!empty) {
      auto w = detect_simple_closed_curve(found.front());
      if (!w || w->m() != m) return tag + ": first result is not an m-curve";
    }
  }
  return "";
}

std::string criterion_higher_exact() {
  DigitalImage C6 = cycle(6, 8), C8 = cycle(8, 4);
  auto w6 = detect_simple_closed_curve(C6);
  auto w8 = detect_simple_closed_curve(C8);
  if (!w6 || !w8) return "cycle witnesses missing";

  for (const auto* w : {&*w6, &*w8}) {
    HigherPlanner p = synthesize_higher_planner(*w, 3, VerifyLevel::Full);
    std::string tag = fmt("m=%d", w->m());
    if (p.part_count() != 2) return tag + fmt(": %d parts", p.part_count());
    if (!verify_higher_planner(w->image, p, VerifyLevel::Full).ok)
      return tag + ": section table failed verification";
  }

  RefuterResult ref = global_section_refuter(C6, 3, 8);
  if (ref.section_exists != Verdict::No)
    return "refuter verdict " + to_string(ref.section_exists) +
           " for the hexagon at arity 3 (expected No): " + ref.note;

  TCnResult r = tcn_classify(C6, 3);
  if (r.value != 2) return fmt("arity-3 value %d, expected exactly 2", r.value);
  if (!r.witness || !r.witness_image) return "no arity-3 witness";
  if (!verify_higher_planner(*r.witness_image, *r.witness, VerifyLevel::Full).ok)
    return "arity-3 witness failed verification";
  if (r.lower_bound_evidence.empty()) return "no arity-3 lower bound";
  return "";
}

std::string criterion_higher_planners() {
  auto w6 = detect_simple_closed_curve(cycle(6, 8));
  auto w8 = detect_simple_closed_curve(cycle(8, 4));

  HigherPlanner p64 = synthesize_higher_planner(*w6, 4, VerifyLevel::Full);
  if (!verify_higher_planner(w6->image, p64, VerifyLevel::Full).ok)
    return "hexagon arity 4: section table failed verification";
  HigherPlanner p83 = synthesize_higher_planner(*w8, 3, VerifyLevel::Full);
  if (!verify_higher_planner(w8->image, p83, VerifyLevel::Full).ok)
    return "octagon arity 3: section table failed verification";

  HigherPlanner p67 = synthesize_higher_planner(*w6, 7, VerifyLevel::AnchorsOnly);
  HigherReport rep = verify_higher_planner(w6->image, p67, VerifyLevel::AnchorsOnly);
  if (!rep.ok)
    return "hexagon arity 7: anchor verification failed: " + rep.violations.front();
  std::uint64_t tuples = 0;
  for (const auto& part : p67.parts) tuples += part.size();
  if (tuples != 279936) return fmt("hexagon arity 7 covers %llu tuples",
                                   static_cast<unsigned long long>(tuples));
  return "";
}

std::string criterion_invariance() {
  auto corpus = enumerate_corpus(AdjacencyKind::from_name(8), 3, 6);
  int pairs = 0;
  for (std::size_t i = 0; i + 1 < corpus.size() && pairs < 24; ++i) {
    const DigitalImage& X = corpus[i];
    const DigitalImage& Y = corpus[i + 1];
    if (X.size() != Y.size()) continue;
    Decision<EquivalenceCertificate> d = homotopy_equivalent(X, Y);
    if (!d.yes() || !d.certificate) continue;
    if (!check_equivalence(*d.certificate).ok)
      return corpus_filename(X) + ": equivalence certificate invalid";
    std::string tag = corpus_filename(X) + " ~ " + corpus_filename(Y);
    for (int m = 1; m <= 3; ++m) {
      LoopClassTable a = count_loop_classes(X, m);
      LoopClassTable b = count_loop_classes(Y, m);
      if (!a.definite || !b.definite) return tag + fmt(": L_%d not definite", m);
      if (a.count != b.count)
        return tag + fmt(": L_%d differs (%d vs %d)", m, a.count, b.count);
    }
    TCResult ta = tc_classify(X), tb = tc_classify(Y);
    if (ta.value == 0 || tb.value == 0 || ta.value != tb.value)
      return tag + fmt(": pairwise values %d vs %d", ta.value, tb.value);
    TCnResult ha = tcn_classify(X, 3), hb = tcn_classify(Y, 3);
    if (ha.value == 0 || hb.value == 0 || ha.value != hb.value)
      return tag + fmt(": arity-3 values %d vs %d", ha.value, hb.value);
    ++pairs;
  }
  if (pairs < 20) return fmt("only %d certified pairs", pairs);
  return "";
}

std::string criterion_properties() {
  std::string bad;
  for (const auto& p : digitop_props::run_all_properties())
    if (!p.pass) bad += (bad.empty() ? "" : "; ") + p.name + ": " + p.detail;
  return bad;
}

}  // namespace

int main() {
  struct Criterion {
    const char* what;
    double limit;  // seconds; 0 = untimed
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {"cycle classification with verified witnesses and lower bounds", 8 * 60.0,
       criterion_cycle_classification},
      {"classifier agrees with the independent search on the small corpus", 1800.0,
       criterion_oracle_agreement},
      {"interval images get verified single sections at arities 2 and 3", 300.0,
       criterion_interval_sections},
      {"every image with at most 5 points is certified contractible", 1800.0,
       criterion_small_contractibility},
      {"curve search emptiness and existence at conclusive windows", 600.0,
       criterion_cycle_search},
      {"arity-3 value is exactly 2 on the hexagon and octagon", 3600.0,
       criterion_higher_exact},
      {"higher section tables at arities 4, 3 and 7", 1800.0,
       criterion_higher_planners},
      {"invariants agree across certified equivalent pairs", 1800.0,
       criterion_invariance},
      {"property suite", 0.0, criterion_properties},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    std::string err;
    try {
      err = criteria[i].run();
    } catch (const std::exception& e) {
      err = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (err.empty() && criteria[i].limit > 0 && s > criteria[i].limit)
      err = fmt("exceeded the %.0fs limit", criteria[i].limit);
    std::printf("CRITERION %zu: %s (%.1fs) %s%s%s\n", i + 1,
                err.empty() ? "PASS" : "FAIL", s, criteria[i].what,
                err.empty() ? "" : " -- ", err.c_str());
    std::fflush(stdout);
    failures += !err.empty();
  }
  std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures;
}
