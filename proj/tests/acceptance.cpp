// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fail.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "support.hpp"

using namespace bww;
namespace bt = bww::test;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << " s";
  return os.str();
}

Outcome fixture_conformance() {
  Outcome o;
  auto start = Clock::now();
  Model m = bt::build_file(bt::sample("library.bww"));
  auto diags = validate(m);
  double took = seconds_since(start);

  const std::map<std::string, std::vector<std::string>> props = {
      {"Book", {"Title", "Author", "Price", "ISBN", "Publisher", "ClassificationNo"}},
      {"Student", {"RegNo", "Name", "Address", "DateOfBirth", "CourseRegistered", "DegreeAwarded"}},
      {"Player", {"Name", "RunsScored", "CenturiesScored", "WicketsTaken", "FiveWicketHauls"}},
      {"Printer", {"Name", "Make", "Location"}}};
  const std::map<std::string, std::vector<std::string>> states = {
      {"Book", {"onTheRack", "issued", "claimed", "writtenOff", "missing"}},
      {"Student", {"registered", "graduated", "migrated"}},
      {"Player", {"playing", "injured", "rested", "retired"}},
      {"Printer", {"on", "off", "busy", "idle"}}};
  const std::map<std::string, std::pair<std::string, std::vector<std::string>>> schemas = {
      {"BookByClassNo", {"Book", {"ClassificationNo", "Title", "Author"}}},
      {"BookByISBN", {"Book", {"ISBN", "Title", "Publisher"}}},
      {"StudentPersonal", {"Student", {"RegNo", "Name", "Address"}}},
      {"StudentAcademic", {"Student", {"RegNo", "CourseRegistered", "DegreeAwarded"}}},
      {"PlayerBatting", {"Player", {"Name", "RunsScored", "CenturiesScored"}}},
      {"PlayerBowling", {"Player", {"Name", "WicketsTaken", "FiveWicketHauls"}}},
      {"Printer", {"Printer", {"Name", "Make", "Location"}}}};

  if (m.things().size() != 5) o.fail("expected 4 things besides null");
  for (const auto& [name, expected] : props) {
    auto t = m.find_thing(name);
    if (!t) {
      o.fail("missing thing " + name);
      continue;
    }
    std::set<std::string> want(expected.begin(), expected.end()), got;
    for (PropertyId p : m.thing(*t).possessed) got.insert(m.name_of(p));
    if (want != got) o.fail("properties of " + name + " differ");
    std::vector<std::string> st;
    for (StateId s : m.states_of(*t)) st.push_back(m.name_of(s));
    if (st != states.at(name)) o.fail("states of " + name + " differ");
  }
  if (m.schemas().size() != schemas.size()) o.fail("expected 7 schemas");
  for (const auto& [name, want] : schemas) {
    auto s = m.find_schema(name);
    if (!s) {
      o.fail("missing schema " + name);
      continue;
    }
    const Schema& sc = m.schema(*s);
    std::vector<std::string> attrs;
    for (const Attribute& a : sc.attributes) attrs.push_back(m.name_of(a.represents));
    if (m.name_of(sc.describes) != want.first || attrs != want.second) o.fail("schema " + name + " differs");
  }
  if (!diags.empty()) o.fail(std::to_string(diags.size()) + " diagnostics, first: " + render(diags[0]));
  if (took >= 1.0) o.fail("took " + fmt_seconds(took));
  if (o.pass) o.detail = "4 things, 7 schemas, 0 diagnostics in " + fmt_seconds(took);
  return o;
}

Outcome event_oracle() {
  Outcome o;
  bt::Rng rng(20240601);
  auto start = Clock::now();
  std::size_t checked = 0, disagreements = 0;
  for (int round = 0; round < 1000; ++round) {
    bt::HistorySpec spec = bt::random_history(rng, 8, 20, 5);
    Model m = bt::build(bt::history_source(spec));
    ThingId t = bt::thing(m, "T");
    for (StateId a : m.states_of(t))
      for (StateId b : m.states_of(t)) {
        ++checked;
        if (is_event(m, t, a, b) != bt::event_formula(m, t, a, b)) {
          if (disagreements++ == 0) o.fail("disagreement on " + bt::history_source(spec));
        }
      }
  }
  double took = seconds_since(start);
  if (took >= 10.0) o.fail("took " + fmt_seconds(took));
  if (disagreements) o.detail = std::to_string(disagreements) + " disagreements; " + o.detail;
  else if (o.pass)
    o.detail = "1000 histories, " + std::to_string(checked) + " state pairs, 0 disagreements in " + fmt_seconds(took);
  return o;
}

Outcome closure_oracle() {
  Outcome o;
  bt::Rng rng(77);
  std::size_t disagreements = 0;
  for (int round = 0; round < 200; ++round) {
    int n = bt::pick(rng, 1, 10);
    auto rel = bt::random_relation(rng, n);
    Model m = bt::build(bt::relation_source(n, rel));
    auto oracle = bt::naive_closure(n, rel);
    std::set<std::pair<int, int>> got;
    for (const auto& [a, b] : precedes_closure(m))
      got.emplace(std::stoi(m.name_of(a).substr(1)), std::stoi(m.name_of(b).substr(1)));
    if (got != oracle) {
      ++disagreements;
      o.fail("closure differs for " + bt::relation_source(n, rel));
    }
    for (int i = 0; i < n; ++i) {
      PropertyId pi = bt::prop(m, "p" + std::to_string(i));
      if (!precedes(m, pi, pi)) o.fail("not reflexive");
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          PropertyId pj = bt::prop(m, "p" + std::to_string(j)), pk = bt::prop(m, "p" + std::to_string(k));
          if (precedes(m, pi, pj) && precedes(m, pj, pk) && !precedes(m, pi, pk)) o.fail("not transitive");
        }
    }
  }
  if (o.pass) o.detail = "200 relations, 0 disagreements, reflexive and transitive";
  return o;
}

Outcome class_equivalence() {
  Outcome o;
  bt::Rng rng(4242);
  int injections = 0;
  for (int round = 0; round < 200; ++round) {
    auto spec = bt::random_possession(rng, 6, 6);
    std::vector<std::vector<int>> ext(spec.props);
    for (int p = 0; p < spec.props; ++p)
      for (int t = 0; t < spec.things; ++t)
        if (spec.has[t][p]) ext[p].push_back(t);

    Model m = bt::build(bt::possession_source(spec, ext));
    for (int p = 0; p < spec.props; ++p) {
      ClassId c = *m.find_class("c" + std::to_string(p));
      std::vector<ThingId> brute;
      for (int t = 0; t < spec.things; ++t)
        if (spec.has[t][p]) brute.push_back(bt::thing(m, "t" + std::to_string(t)));
      if (class_extension(m, c) != brute) o.fail("extension differs from brute force");
      for (const Thing& t : m.things())
        if (member_of_class(m, c, t.id) != possesses(m, t.id, m.class_def(c).characteristic))
          o.fail("memberof_c and possesses disagree");
    }
    for (const auto& d : validate(m))
      if (d.code == Code::V4) o.fail("V4 on a correct declared extension");

    int target = bt::pick(rng, 0, spec.props - 1);
    Model injected = bt::build(bt::possession_source(spec, ext, target));
    bool found = false;
    for (const auto& d : validate(injected))
      if (d.code == Code::V4 && d.subject == "c" + std::to_string(target) &&
          d.message.find("'extra'") != std::string::npos)
        found = true;
    if (!found) o.fail("injection into c" + std::to_string(target) + " did not raise V4");
    ++injections;
  }
  if (o.pass) o.detail = "200 models, extensions match brute force, " + std::to_string(injections) + "/200 injections raise V4";
  return o;
}

// Conjunction models: bases b0..b5, depth-1 conjunctions k*, depth-2 conjunctions d*.
struct ConjunctionWorld {
  std::string source;
  std::map<std::string, std::set<std::string>> flat;  // every property -> its base conjuncts
  std::vector<std::string> all;
  std::map<std::string, std::set<std::string>> effective;  // thing -> bases it holds
};

ConjunctionWorld conjunction_world(bt::Rng& rng) {
  ConjunctionWorld w;
  const int bases = 6;
  std::string src = "model J {\n";
  for (int i = 0; i < bases; ++i) {
    std::string b = "b" + std::to_string(i);
    src += "  property " + b + ";\n";
    w.flat[b] = {b};
    w.all.push_back(b);
  }
  std::set<std::set<std::string>> used;
  auto declare = [&](const std::string& name, const std::vector<std::string>& members) {
    std::set<std::string> f;
    for (const auto& x : members) f.insert(w.flat[x].begin(), w.flat[x].end());
    if (f.size() < 2 || used.count(f)) return;
    used.insert(f);
    src += "  property " + name + " =";
    for (std::size_t i = 0; i < members.size(); ++i) src += (i ? " & " : " ") + members[i];
    src += ";\n";
    w.flat[name] = f;
    w.all.push_back(name);
  };
  for (int k = 0; k < 4; ++k) {
    std::vector<std::string> members;
    int n = bt::pick(rng, 2, 3);
    for (int i = 0; i < n; ++i) members.push_back("b" + std::to_string(bt::pick(rng, 0, bases - 1)));
    declare("k" + std::to_string(k), members);
  }
  std::vector<std::string> level1(w.all.begin(), w.all.end());
  for (int d = 0; d < 3; ++d) {
    std::vector<std::string> members;
    int n = bt::pick(rng, 2, 3);
    for (int i = 0; i < n; ++i) members.push_back(level1[bt::pick(rng, 0, int(level1.size()) - 1)]);
    declare("d" + std::to_string(d), members);
  }
  for (int t = 0; t < 4; ++t) {
    std::string name = "t" + std::to_string(t);
    std::vector<std::string> direct;
    for (const auto& p : w.all)
      if (bt::coin(rng, p[0] == 'b' ? 0.6 : 0.15)) direct.push_back(p);
    auto& eff = w.effective[name];
    for (const auto& p : direct) eff.insert(w.flat[p].begin(), w.flat[p].end());
    src += "  thing " + name;
    for (std::size_t i = 0; i < direct.size(); ++i) src += (i ? ", " : " possesses ") + direct[i];
    src += ";\n";
  }
  w.source = src + "}\n";
  return w;
}

std::set<std::string> conjunct_names(const Model& m, const Property& p) {
  if (const auto* c = p.complex()) {
    std::set<std::string> out;
    for (PropertyId q : c->conjuncts) out.insert(m.name_of(q));
    return out;
  }
  return {p.name};
}

bool same_property(const Model& m, const Property& a, const Property& b) {
  return a.id == b.id && a.name == b.name && conjunct_names(m, a) == conjunct_names(m, b);
}

Outcome conjunction_algebra() {
  Outcome o;
  bt::Rng rng(99);
  int lists = 0;
  for (int world = 0; world < 100; ++world) {
    ConjunctionWorld w = conjunction_world(rng);
    Model m = bt::build(w.source);
    for (int round = 0; round < 20; ++round, ++lists) {
      int n = bt::pick(rng, 1, 6);
      std::vector<PropertyId> list;
      std::vector<std::string> names;
      for (int i = 0; i < n; ++i) {
        names.push_back(w.all[bt::pick(rng, 0, int(w.all.size()) - 1)]);
        list.push_back(bt::prop(m, names.back()));
      }
      std::set<std::string> flat;
      for (const auto& x : names) flat.insert(w.flat[x].begin(), w.flat[x].end());

      Property base = conjoin(m, list);
      if (conjunct_names(m, base) != flat) o.fail("conjuncts differ from flattened list");

      auto shuffled = list;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      if (!same_property(m, base, conjoin(m, shuffled))) o.fail("not permutation invariant");

      auto doubled = list;
      doubled.push_back(list[bt::pick(rng, 0, n - 1)]);
      std::shuffle(doubled.begin(), doubled.end(), rng);
      if (!same_property(m, base, conjoin(m, doubled))) o.fail("not duplication invariant");

      std::vector<PropertyId> flattened;
      for (const auto& b : flat) flattened.push_back(bt::prop(m, b));
      if (!same_property(m, base, conjoin(m, flattened))) o.fail("not flattening invariant");

      for (const auto& [tname, eff] : w.effective) {
        bool all = std::includes(eff.begin(), eff.end(), flat.begin(), flat.end());
        if (possesses(m, bt::thing(m, tname), base) != all) o.fail("possession differs from brute force");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(lists) + " lists, permutation/duplication/flattening invariant, possession matches";
  return o;
}

Outcome process_composability() {
  Outcome o;
  Model m = bt::build_file(bt::sample("library.bww"));
  Event e1 = make_event(m, bt::state(m, "Book", "issued"), bt::state(m, "Book", "claimed"));
  Event e2 = make_event(m, bt::state(m, "Book", "claimed"), bt::state(m, "Book", "issued"));
  if (!is_process({e1, e2})) o.fail("<issued,claimed>,<claimed,issued> is not a process");

  int fixtures = 0;
  auto count_v9 = [](const Model& model) {
    int n = 0;
    for (const auto& d : validate(model)) n += d.code == Code::V9;
    return n;
  };
  if (count_v9(bt::build_file(bt::fixture("v9.bww"))) != 1) o.fail("v9.bww does not yield exactly one V9");
  ++fixtures;
  bt::Rng rng(9);
  for (int round = 0; round < 200; ++round, ++fixtures) {
    int steps = bt::pick(rng, 2, 7);
    int broken = bt::pick(rng, 1, steps - 1);
    std::string src = "model P { property X; thing A possesses X; states of A: zz";
    for (int i = 0; i <= steps; ++i) src += ", s" + std::to_string(i);
    src += ";\n  process Pr of A =";
    for (int i = 0; i < steps; ++i)
      src += std::string(i ? ", <" : " <") + (i == broken ? "zz" : "s" + std::to_string(i)) + ", s" +
             std::to_string(i + 1) + ">";
    src += ";\n}\n";
    if (count_v9(bt::build(src)) != 1) o.fail("not exactly one V9 for " + src);
  }
  if (o.pass) o.detail = "<issued,claimed>,<claimed,issued> forms a process; " + std::to_string(fixtures) + " broken-junction fixtures give one V9 each";
  return o;
}

Outcome diagnostic_precision() {
  Outcome o;
  const std::vector<std::pair<std::string, Code>> cases = {
      {"v1.bww", Code::V1}, {"v2.bww", Code::V2},   {"v3.bww", Code::V3},   {"v4.bww", Code::V4},
      {"v5.bww", Code::V5}, {"v6.bww", Code::V6},   {"v7.bww", Code::V7},   {"v8.bww", Code::V8},
      {"v9.bww", Code::V9}, {"v10.bww", Code::V10}, {"v11.bww", Code::V11}, {"w1.bww", Code::W1},
      {"i2.bww", Code::I2}};
  for (const auto& [file, code] : cases) {
    auto got = bt::codes(validate(bt::build_file(bt::fixture(file))));
    if (got.empty() || std::any_of(got.begin(), got.end(), [&](Code c) { return c != code; }))
      o.fail(file + " does not trigger exactly " + std::string(to_string(code)));
  }
  if (o.pass) o.detail = "13/13 fixtures trigger exactly their code";
  return o;
}

int run_binary(const std::string& args, std::string* out = nullptr) {
  std::string cmd = std::string(BWW_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  int status = pclose(pipe);
  if (out) *out = std::move(text);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_contract() {
  Outcome o;
  std::map<std::string, int> expected;
  for (const auto& entry : std::filesystem::directory_iterator(BWW_MODELS_DIR))
    if (entry.path().extension() == ".bww") expected[entry.path().string()] = 0;
  const std::map<std::string, int> fixtures = {
      {"v1.bww", 1},        {"v2.bww", 1},           {"v3.bww", 1},       {"v4.bww", 1},
      {"v5.bww", 1},        {"v6.bww", 1},           {"v7.bww", 1},       {"v8.bww", 1},
      {"v9.bww", 1},        {"v10.bww", 1},          {"v11.bww", 1},      {"w1.bww", 0},
      {"i2.bww", 0},        {"empty.bww", 0},        {"bad_parse.bww", 2}, {"two_errors.bww", 2},
      {"unknown_name.bww", 2}, {"duplicate.bww", 2}, {"reserved_null.bww", 2}};
  for (const auto& [f, code] : fixtures) expected[bt::fixture(f)] = code;

  int checked = 0, round_trips = 0;
  for (const auto& [path, code] : expected) {
    ++checked;
    int got = run_binary("check " + path);
    if (got != code) o.fail("check " + path + " exited " + std::to_string(got) + ", expected " + std::to_string(code));
    if (code == 2) continue;
    std::string json;
    if (run_binary("export " + path, &json) != 0) {
      o.fail("export " + path + " failed");
      continue;
    }
    LoadResult back = import_json(Json::parse(json), path);
    if (!back.model) {
      o.fail("re-import of " + path + " failed");
      continue;
    }
    std::string diff = bt::structural_difference(bt::build_file(path), *back.model);
    if (!diff.empty()) o.fail("round trip of " + path + " differs: " + diff);
    ++round_trips;
  }
  const std::string campus = bt::sample("campus.bww");
  const std::vector<std::pair<std::string, int>> invocations = {
      {"", 3},
      {"check", 3},
      {"check /nonexistent/model.bww", 3},
      {"check " + campus + " --format xml", 3},
      {"query " + campus + " 'possesses?(book1, Title)'", 0},
      {"query " + campus + " 'event?(book1, onTheRack, claimed)'", 0},
      {"query " + campus + " 'possesses?(nobody, Title)'", 3},
      {"query " + campus + " 'bogus?(book1)'", 3},
      {"closure " + bt::fixture("i2.bww"), 0},
      {"export " + campus + " -o /nonexistent/dir/out.json", 3}};
  for (const auto& [args, code] : invocations) {
    ++checked;
    int got = run_binary(args);
    if (got != code) o.fail("'bww " + args + "' exited " + std::to_string(got) + ", expected " + std::to_string(code));
  }
  if (o.pass)
    o.detail = std::to_string(checked) + " invocations with expected exit codes, " + std::to_string(round_trips) +
               " export round trips identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"fixture-conformance", fixture_conformance},
      {"event-formula-oracle", event_oracle},
      {"closure-oracle", closure_oracle},
      {"class-equivalence", class_equivalence},
      {"conjunction-algebra", conjunction_algebra},
      {"process-composability", process_composability},
      {"diagnostic-precision", diagnostic_precision},
      {"cli-contract", cli_contract},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
  }
  return failures == 0 ? 0 : 1;
}
