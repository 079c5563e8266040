// Command-line surface for the digitop library: analysis and classification
// verbs, planner synthesis/verification, curve generation and search, corpus
// enumeration, and certificate checking. Reports are line-oriented key/value
// by default or a JSON document with --format json; every report embeds the
// tool version and the full flag set. Exit codes: 0 definite verdicts,
// 2 unknown (budget or resource caps), 1 input or parse errors.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "digitop/corpus.hpp"
#include "digitop/curves.hpp"
#include "digitop/higher.hpp"
#include "digitop/image.hpp"
#include "digitop/loops.hpp"
#include "digitop/morph.hpp"
#include "digitop/planner.hpp"
#include "digitop/types.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace digitop;

enum ExitCode { kDefinite = 0, kInputError = 1, kUnknown = 2 };

struct Flags {
  std::string image, image2, out, format = "kv", plan, cert, witness_out;
  int m = 0, n = 0, length = 0, window = 0, kind = 8, max_points = 0, jobs = 1;
  std::uint64_t budget = 0;
  bool with_oracle = false;
  bool with_refute = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write file: " + path);
  out << text;
}

DigitalImage load_image(const std::string& path) {
  if (path.empty()) throw input_error("--image is required for this verb");
  try {
    return parse_image(read_file(path));
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

std::string point_str(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

std::string points_str(const DigitalImage& X, const std::vector<int>& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += " ";
    s += point_str(X.point(idx[i]));
  }
  return s;
}

void put_stats(json& r, const SearchStats& st) {
  r["stats"]["visited"] = st.visited;
  r["stats"]["budget"] = st.budget;
  r["stats"]["exhausted"] = st.exhausted;
  if (!st.note.empty()) r["stats"]["note"] = st.note;
}

// kv output: the JSON document flattened to dot-joined keys, one per line.
void emit_kv(std::ostream& os, const json& doc, const std::string& prefix) {
  if (doc.is_object()) {
    for (const auto& [k, v] : doc.items())
      emit_kv(os, v, prefix.empty() ? k : prefix + "." + k);
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i)
      emit_kv(os, doc[i], prefix + "." + std::to_string(i));
  } else if (doc.is_string()) {
    os << prefix << "=" << doc.get<std::string>() << "\n";
  } else {
    os << prefix << "=" << doc.dump() << "\n";
  }
}

struct Command {
  std::string verb;
  Flags f;
  // Handlers fill result and return the exit code.
  int run(json& result);
};

std::uint64_t map_budget(const Flags& f) { return f.budget ? f.budget : kDefaultMapBudget; }
std::uint64_t csp_budget(const Flags& f) { return f.budget ? f.budget : kDefaultCspBudget; }

int verdict_exit(Verdict v) { return v == Verdict::Unknown ? kUnknown : kDefinite; }

int run_info(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  r["size"] = X.size();
  r["dim"] = X.dim();
  r["kind"] = X.kind().name();
  r["connected"] = is_connected(X);
  r["components"] = component_count(X);
  auto cw = detect_simple_closed_curve(X);
  r["simple_closed_curve"] = cw.has_value();
  if (cw) {
    r["curve_m"] = cw->m();
    r["curve_order"] = points_str(X, cw->ordering);
  }
  return kDefinite;
}

int run_connected(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  bool c = is_connected(X);
  r["connected"] = c;
  r["components"] = component_count(X);
  return kDefinite;
}

int run_contractible(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  auto d = is_contractible(X, map_budget(f));
  r["contractible"] = to_string(d.verdict);
  put_stats(r, d.stats);
  if (d.certificate) {
    r["certificate"]["stages"] = d.certificate->stage_count();
    if (!f.witness_out.empty()) {
      write_file(f.witness_out, serialize_homotopy(*d.certificate));
      r["certificate"]["file"] = f.witness_out;
    }
  }
  return verdict_exit(d.verdict);
}

int run_reducible(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  auto d = is_reducible(X, map_budget(f));
  r["reducible"] = to_string(d.verdict);
  put_stats(r, d.stats);
  if (d.certificate) {
    r["certificate"]["smaller_size"] = d.certificate->smaller.size();
    if (!f.witness_out.empty()) {
      write_file(f.witness_out, serialize_image(d.certificate->smaller));
      r["certificate"]["file"] = f.witness_out;
    }
  }
  return verdict_exit(d.verdict);
}

int run_rigid(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  auto d = is_rigid(X, map_budget(f));
  r["rigid"] = to_string(d.verdict);
  put_stats(r, d.stats);
  if (d.certificate) {
    r["certificate"]["stages"] = d.certificate->stage_count();
    if (!f.witness_out.empty()) {
      write_file(f.witness_out, serialize_homotopy(*d.certificate));
      r["certificate"]["file"] = f.witness_out;
    }
  }
  return verdict_exit(d.verdict);
}

int run_equiv(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  if (f.image2.empty()) throw input_error("--image2 is required for equiv");
  DigitalImage Y = load_image(f.image2);
  auto d = homotopy_equivalent(X, Y, map_budget(f));
  r["equivalent"] = to_string(d.verdict);
  put_stats(r, d.stats);
  return verdict_exit(d.verdict);
}

int run_loops(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  if (f.m < 1) throw input_error("--m (loop length, >= 1) is required for loops");
  LoopClassTable t = count_loop_classes(X, f.m, map_budget(f));
  r["m"] = t.m;
  r["total_loops"] = t.total;
  r["definite"] = t.definite;
  if (t.definite) {
    r["classes"] = t.count;
  } else {
    r["classes_lower"] = t.lower;
    if (t.upper) r["classes_upper"] = t.upper;
  }
  json reps = json::array();
  for (const auto& rep : t.representatives) reps.push_back(points_str(X, rep.values));
  r["representative"] = reps;
  put_stats(r, t.stats);
  return t.definite ? kDefinite : kUnknown;
}

void put_tc(json& r, const DigitalImage& X, const TCResult& tc, const Flags& f) {
  r["value"] = tc.value;
  r["method"] = to_string(tc.method);
  r["definite"] = tc.value != 0;
  r["evidence"] = tc.evidence;
  if (!tc.lower_bound_evidence.empty()) r["lower_bound"] = tc.lower_bound_evidence;
  if (tc.witness) {
    r["witness"]["parts"] = tc.witness->part_count();
    r["witness"]["length"] = tc.witness->length;
    if (!f.witness_out.empty()) {
      write_file(f.witness_out, serialize_planner(X, *tc.witness));
      r["witness"]["file"] = f.witness_out;
    }
  }
  put_stats(r, tc.stats);
}

int run_tc(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  TCResult tc = tc_classify(X, map_budget(f));
  put_tc(r["classify"], X, tc, f);
  bool definite = tc.value != 0;
  if (f.with_oracle) {
    TCResult oracle = tc_oracle(X, f.length, csp_budget(f));
    Flags no_wit = f;
    no_wit.witness_out.clear();  // the classify witness owns --witness-out
    put_tc(r["oracle"], X, oracle, no_wit);
    definite = definite && oracle.value != 0;
    if (tc.value != 0 && oracle.value != 0) r["agreement"] = tc.value == oracle.value;
  }
  return definite ? kDefinite : kUnknown;
}

int run_tcn(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  if (f.n < 1) throw input_error("--n (tuple arity, >= 1) is required for tcn");
  TCnResult tc = tcn_classify(X, f.n, map_budget(f));
  r["n"] = f.n;
  r["value"] = tc.value;
  r["method"] = to_string(tc.method);
  r["definite"] = tc.value != 0;
  r["evidence"] = tc.evidence;
  if (!tc.lower_bound_evidence.empty()) r["lower_bound"] = tc.lower_bound_evidence;
  if (tc.witness && tc.witness_image) {
    r["witness"]["parts"] = tc.witness->part_count();
    r["witness"]["length"] = tc.witness->length;
    bool on_core = !(*tc.witness_image == X);
    r["witness"]["on_core_cycle"] = on_core;
    if (!f.witness_out.empty()) {
      // Cycle-equivalent witnesses live on the core cycle; the planner file
      // encodes points by coordinates, so serialize against that image.
      write_file(f.witness_out, serialize_higher_planner(*tc.witness_image, *tc.witness));
      r["witness"]["file"] = f.witness_out;
      if (on_core) {
        std::string core_path = f.witness_out + ".core.dimg";
        write_file(core_path, serialize_image(*tc.witness_image));
        r["witness"]["core_image_file"] = core_path;
      }
    }
  }
  put_stats(r, tc.stats);
  bool definite = tc.value != 0;
  if (f.with_refute) {
    int L_max = f.length ? f.length : 2 * X.size();
    RefuterResult rr = global_section_refuter(X, f.n, L_max, csp_budget(f));
    r["refuter"]["L_max"] = L_max;
    r["refuter"]["section_exists"] = to_string(rr.section_exists);
    r["refuter"]["note"] = rr.note;
    put_stats(r["refuter"], rr.stats);
    definite = definite && rr.section_exists != Verdict::Unknown;
  }
  return definite ? kDefinite : kUnknown;
}

int run_planner_synth(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  int n = f.n ? f.n : 2;
  r["n"] = n;
  if (n == 2) {
    std::optional<MotionPlanner> plan;
    if (auto cw = detect_simple_closed_curve(X)) {
      plan = synthesize_cycle_planner(*cw);
      r["method"] = "cycle displacement cover";
    } else {
      TCResult tc = tc_classify(X, map_budget(f));
      if (!tc.witness)
        throw synthesis_error("no planner available: " + tc.evidence);
      plan = std::move(tc.witness);
      r["method"] = std::string("classification (") + to_string(tc.method) + ")";
    }
    auto rep = verify_planner(X, *plan);
    r["parts"] = plan->part_count();
    r["length"] = plan->length;
    r["verified"] = rep.ok;
    if (!rep.ok) r["violations"] = rep.violations;
    std::string text = serialize_planner(X, *plan);
    if (!f.witness_out.empty()) {
      write_file(f.witness_out, text);
      r["file"] = f.witness_out;
    } else {
      r["planner"] = text;
    }
    return rep.ok ? kDefinite : kUnknown;
  }
  auto cw = detect_simple_closed_curve(X);
  if (!cw)
    throw input_error(
        "planner-synth with --n >= 3 requires a simple closed curve image; "
        "use tcn for general classification");
  double space = 1.0;
  for (int i = 0; i < n; ++i) space *= X.size();
  VerifyLevel level = space <= 8192.0 ? VerifyLevel::Full : VerifyLevel::AnchorsOnly;
  HigherPlanner plan = synthesize_higher_planner(*cw, n, level, csp_budget(f));
  r["parts"] = plan.part_count();
  r["length"] = plan.length;
  r["verified"] = true;
  r["verify_level"] = level == VerifyLevel::Full ? "full" : "anchors-only";
  std::string text = serialize_higher_planner(X, plan);
  if (!f.witness_out.empty()) {
    write_file(f.witness_out, text);
    r["file"] = f.witness_out;
  } else {
    r["planner"] = text;
  }
  return kDefinite;
}

int run_planner_verify(const Flags& f, json& r) {
  DigitalImage X = load_image(f.image);
  if (f.plan.empty()) throw input_error("--plan is required for planner-verify");
  std::string text = read_file(f.plan);
  // The higher-planner format opens with an "n <arity>" header; the pairwise
  // format opens with "parts <k>".
  std::istringstream ss(text);
  std::string first_tok;
  while (ss >> first_tok) {
    if (first_tok[0] == '#') {
      std::string rest;
      std::getline(ss, rest);
      continue;
    }
    break;
  }
  if (first_tok == "n") {
    HigherPlanner plan = parse_higher_planner(text, X);
    HigherReport rep = verify_higher_planner(X, plan, VerifyLevel::Full);
    r["format"] = "higher";
    r["n"] = plan.n;
    r["parts"] = plan.part_count();
    r["length"] = plan.length;
    r["ok"] = rep.ok;
    if (!rep.ok) r["violations"] = rep.violations;
  } else {
    MotionPlanner plan = parse_planner(text, X);
    PlannerReport rep = verify_planner(X, plan);
    r["format"] = "pairwise";
    r["parts"] = plan.part_count();
    r["length"] = plan.length;
    r["ok"] = rep.ok;
    if (!rep.ok) r["violations"] = rep.violations;
  }
  return kDefinite;
}

int run_curve_gen(const Flags& f, json& r, std::ostream& direct, bool& wrote_direct) {
  if (f.m < 4) throw input_error("--m must be at least 4");
  AdjacencyKind kind = AdjacencyKind::from_name(f.kind);
  try {
    DigitalImage C = generate_cycle(f.m, kind);
    std::string text = serialize_image(C);
    if (!f.witness_out.empty()) {
      write_file(f.witness_out, text);
      r["m"] = f.m;
      r["kind"] = f.kind;
      r["empty"] = false;
      r["file"] = f.witness_out;
      return kDefinite;
    }
    // With no destination the image text itself is the output, ready for
    // redirection into a .dimg file.
    direct << text;
    wrote_direct = true;
    return kDefinite;
  } catch (const emptiness_error& e) {
    r["m"] = f.m;
    r["kind"] = f.kind;
    r["empty"] = true;
    r["reason"] = e.what();
    return kDefinite;  // emptiness is a definite mathematical verdict
  }
}

int run_curve_search(const Flags& f, json& r) {
  if (f.m < 4) throw input_error("--m must be at least 4");
  AdjacencyKind kind = AdjacencyKind::from_name(f.kind);
  int window = f.window ? f.window : f.m;
  try {
    auto found = search_cycles(f.m, kind, window,
                               f.budget ? f.budget : 50'000'000);
    r["m"] = f.m;
    r["kind"] = f.kind;
    r["window"] = window;
    r["count"] = found.size();
    r["conclusive_emptiness"] = window >= f.m;
    if (!found.empty()) {
      std::vector<int> all(found[0].size());
      for (int i = 0; i < found[0].size(); ++i) all[i] = i;
      r["first"] = points_str(found[0], all);
    }
    return kDefinite;
  } catch (const resource_limit_error& e) {
    r["m"] = f.m;
    r["kind"] = f.kind;
    r["window"] = window;
    r["note"] = e.what();
    return kUnknown;
  }
}

int run_corpus(const Flags& f, json& r) {
  if (f.window < 1) throw input_error("--window is required for corpus");
  if (f.max_points < 1) throw input_error("--max-points is required for corpus");
  if (f.out.empty()) throw input_error("--out (directory) is required for corpus");
  AdjacencyKind kind = AdjacencyKind::from_name(f.kind);
  auto images = enumerate_corpus(kind, f.window, f.max_points);
  std::error_code ec;
  std::filesystem::create_directories(f.out, ec);
  if (ec) throw input_error("cannot create directory: " + f.out);
  for (const auto& X : images)
    write_file((std::filesystem::path(f.out) / corpus_filename(X)).string(),
               serialize_image(X));
  r["kind"] = f.kind;
  r["window"] = f.window;
  r["max_points"] = f.max_points;
  r["count"] = images.size();
  r["directory"] = f.out;
  return kDefinite;
}

int run_verify(const Flags& f, json& r) {
  if (f.cert.empty()) throw input_error("--cert is required for verify");
  DigitalImage X = load_image(f.image);
  DigitalImage Y = f.image2.empty() ? X : load_image(f.image2);
  Homotopy h = parse_homotopy(read_file(f.cert), X, Y);
  CheckReport rep = check_homotopy(h);
  r["ok"] = rep.ok;
  r["stages"] = h.stage_count();
  if (!rep.ok) r["violation"] = rep.violation;
  if (rep.ok) {
    auto& first = h.stages.front();
    auto& last = h.stages.back();
    bool first_id = true, last_id = true, first_const = true, last_const = true;
    for (int i = 0; i < X.size(); ++i) {
      first_id &= first[i] == i;
      last_id &= last[i] == i;
      first_const &= first[i] == first[0];
      last_const &= last[i] == last[0];
    }
    r["first_stage"] = first_id ? "identity" : first_const ? "constant" : "map";
    r["last_stage"] = last_id ? "identity" : last_const ? "constant" : "map";
  }
  return kDefinite;
}

int Command::run(json& result) {
  if (verb == "info") return run_info(f, result);
  if (verb == "connected") return run_connected(f, result);
  if (verb == "contractible") return run_contractible(f, result);
  if (verb == "reducible") return run_reducible(f, result);
  if (verb == "rigid") return run_rigid(f, result);
  if (verb == "equiv") return run_equiv(f, result);
  if (verb == "loops") return run_loops(f, result);
  if (verb == "tc") return run_tc(f, result);
  if (verb == "tcn") return run_tcn(f, result);
  if (verb == "planner-synth") return run_planner_synth(f, result);
  if (verb == "planner-verify") return run_planner_verify(f, result);
  if (verb == "curve-search") return run_curve_search(f, result);
  if (verb == "corpus") return run_corpus(f, result);
  if (verb == "verify") return run_verify(f, result);
  throw input_error("unknown verb: " + verb);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"digitop: exact topological invariants of finite digital images"};
  app.require_subcommand(1);

  Flags f;
  std::string verb;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--image", f.image, "input image file");
    sub->add_option("--image2", f.image2, "second image file");
    sub->add_option("--m", f.m, "cycle or loop length");
    sub->add_option("--n", f.n, "tuple arity");
    sub->add_option("--length", f.length, "path length bound");
    sub->add_option("--window", f.window, "search window edge length");
    sub->add_option("--kind", f.kind, "adjacency kind name (4 or 8)");
    sub->add_option("--max-points", f.max_points, "corpus point cap");
    sub->add_option("--budget", f.budget, "search budget override");
    sub->add_option("--jobs", f.jobs, "worker cap (this build is single-threaded)");
    sub->add_option("--out", f.out, "report destination (corpus: directory)");
    sub->add_option("--format", f.format, "report format: kv or json")
        ->check(CLI::IsMember({"kv", "json"}));
    sub->add_option("--plan", f.plan, "planner file to verify");
    sub->add_option("--cert", f.cert, "certificate file to verify");
    sub->add_option("--witness-out", f.witness_out, "write certificate/planner here");
    sub->add_flag("--oracle,!--no-oracle", f.with_oracle,
                  "also run the independent search oracle (tc)");
    sub->add_flag("--refute,!--no-refute", f.with_refute,
                  "also run the global-section refuter (tcn)");
    sub->callback([&verb, sub] { verb = sub->get_name(); });
  };
  const std::pair<const char*, const char*> verbs[] = {
      {"info", "image summary: size, kind, components, curve detection"},
      {"connected", "connectivity verdict"},
      {"contractible", "contractibility with a homotopy certificate"},
      {"reducible", "point-reduction with an equivalence certificate"},
      {"rigid", "rigidity; non-rigid images get an identity move"},
      {"equiv", "homotopy equivalence of --image and --image2"},
      {"loops", "loop classes of length --m"},
      {"tc", "pairwise planner classification (optionally vs the oracle)"},
      {"tcn", "arity --n classification with section tables"},
      {"planner-synth", "build and verify a planner for a cycle image"},
      {"planner-verify", "check a planner file against an image"},
      {"curve-gen", "emit an m-point simple closed curve"},
      {"curve-search", "enumerate m-point curves in a window"},
      {"corpus", "enumerate small connected images"},
      {"verify", "check a certificate file against an image"},
  };
  for (auto [v, what] : verbs) add_common(app.add_subcommand(v, what));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kInputError : kDefinite;
  }

  json doc;
  doc["version"] = kVersion;
  doc["verb"] = verb;
  json& fl = doc["flags"];
  fl["image"] = f.image;
  fl["image2"] = f.image2;
  fl["m"] = f.m;
  fl["n"] = f.n;
  fl["length"] = f.length;
  fl["window"] = f.window;
  fl["kind"] = f.kind;
  fl["max_points"] = f.max_points;
  fl["budget"] = f.budget;
  fl["jobs"] = f.jobs;
  fl["format"] = f.format;
  fl["out"] = f.out;
  fl["plan"] = f.plan;
  fl["cert"] = f.cert;
  fl["witness_out"] = f.witness_out;
  fl["oracle"] = f.with_oracle;
  fl["refute"] = f.with_refute;

  auto t0 = std::chrono::steady_clock::now();
  int code = kDefinite;
  bool wrote_direct = false;
  try {
    if (verb == "curve-gen") {
      std::ostringstream direct;
      code = run_curve_gen(f, doc["result"], direct, wrote_direct);
      if (wrote_direct) {
        if (!f.out.empty())
          write_file(f.out, direct.str());
        else
          std::cout << direct.str();
        return kDefinite;
      }
    } else {
      Command cmd{verb, f};
      code = cmd.run(doc["result"]);
    }
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const emptiness_error& e) {
    doc["result"]["empty"] = true;
    doc["result"]["reason"] = e.what();
    code = kDefinite;
  } catch (const resource_limit_error& e) {
    doc["result"]["note"] = e.what();
    code = kUnknown;
  } catch (const synthesis_error& e) {
    doc["result"]["note"] = e.what();
    code = kUnknown;
  }
  auto t1 = std::chrono::steady_clock::now();
  doc["elapsed_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  doc["exit"] = code;

  std::ostringstream rendered;
  if (f.format == "json")
    rendered << doc.dump(2) << "\n";
  else
    emit_kv(rendered, doc, "");
  if (!f.out.empty() && verb != "corpus")
    write_file(f.out, rendered.str());
  else
    std::cout << rendered.str();
  return code;
}
