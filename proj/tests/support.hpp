#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bww/bww.hpp"

namespace bww::test {

inline std::string fixture(const std::string& name) { return std::string(BWW_FIXTURES_DIR) + "/" + name; }
inline std::string sample(const std::string& name) { return std::string(BWW_MODELS_DIR) + "/" + name; }

/// Builds a model from DSL text; throws with the rendered errors on failure.
inline Model build(std::string_view source, const std::string& file = "<test>") {
  LoadResult r = load_model(source, file);
  if (!r.model) {
    std::string msg;
    for (const auto& d : r.errors) msg += render(d) + "\n";
    throw std::runtime_error("model failed to load:\n" + msg);
  }
  return std::move(*r.model);
}

inline Model build_file(const std::string& path) {
  auto text = read_file(path);
  if (!text) throw std::runtime_error("cannot read " + path);
  return build(*text, path);
}

inline std::vector<Code> codes(const std::vector<Diagnostic>& diags) {
  std::vector<Code> out;
  for (const auto& d : diags) out.push_back(d.code);
  return out;
}

inline PropertyId prop(const Model& m, std::string_view n) {
  auto id = m.find_property(n);
  if (!id) throw std::runtime_error("no property " + std::string(n));
  return *id;
}

inline ThingId thing(const Model& m, std::string_view n) {
  auto id = m.find_thing(n);
  if (!id) throw std::runtime_error("no thing " + std::string(n));
  return *id;
}

inline StateId state(const Model& m, std::string_view owner, std::string_view n) {
  auto id = m.find_state(thing(m, owner), n);
  if (!id) throw std::runtime_error("no state " + std::string(n));
  return *id;
}

// --- oracles -----------------------------------------------------------------

/// Reflexive-transitive closure by repeated pair composition until nothing
/// changes.
inline std::set<std::pair<int, int>> naive_closure(int n, const std::vector<std::pair<int, int>>& base) {
  std::set<std::pair<int, int>> rel(base.begin(), base.end());
  for (int i = 0; i < n; ++i) rel.emplace(i, i);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<int, int>> add;
    for (const auto& [a, b] : rel)
      for (const auto& [c, d] : rel)
        if (b == c && !rel.count({a, d})) add.emplace_back(a, d);
    for (const auto& p : add) changed |= rel.insert(p).second;
  }
  return rel;
}

/// Event formula evaluated literally: some t1 < t2 with the thing in s1 at t1
/// and in s2 at t2, and no t3 strictly between them in a third state.
inline bool event_formula(const Model& m, ThingId t, StateId s1, StateId s2) {
  if (s1 == s2) return false;
  const auto& obs = m.history(t).observations;
  std::uint64_t horizon = obs.empty() ? 1 : obs.back().time.tick + 1;
  const auto& space = m.states_of(t);
  for (std::uint64_t t1 = 0; t1 <= horizon; ++t1) {
    if (!is_in(m, t, s1, TimePoint{t1})) continue;
    for (std::uint64_t t2 = t1 + 1; t2 <= horizon; ++t2) {
      if (!is_in(m, t, s2, TimePoint{t2})) continue;
      bool between = false;
      for (std::uint64_t t3 = t1 + 1; t3 < t2 && !between; ++t3)
        for (StateId s : space)
          if (s != s1 && s != s2 && is_in(m, t, s, TimePoint{t3})) {
            between = true;
            break;
          }
      if (!between) return true;
    }
  }
  return false;
}

// --- structural comparison ---------------------------------------------------

namespace detail {

template <class Ids, class NameOf>
std::vector<std::string> names(const Ids& ids, NameOf&& name_of) {
  std::vector<std::string> out;
  for (auto id : ids) out.push_back(name_of(id));
  return out;
}

template <class Ids, class NameOf>
std::vector<std::string> name_set(const Ids& ids, NameOf&& name_of) {
  auto out = names(ids, name_of);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + ",";
  return s;
}

/// One line per element, keyed by names only, so models built along different
/// routes compare equal whenever they describe the same thing.
inline std::vector<std::string> describe(const Model& m) {
  auto pn = [&](PropertyId p) { return m.name_of(p); };
  auto tn = [&](ThingId t) { return m.name_of(t); };
  auto sn = [&](StateId s) { return m.name_of(s); };
  std::vector<std::string> out;
  out.push_back("model " + m.name());
  for (const Property& p : m.properties()) {
    std::string line = "property " + p.name;
    if (const auto* c = p.complex()) line += " = " + join(name_set(c->conjuncts, pn));
    if (const auto* mu = p.mutual())
      line += " mutual(" + join(name_set(mu->relata, tn)) + ")" + (mu->binding ? " binding" : " nonbinding");
    out.push_back(line);
  }
  for (const Thing& t : m.things())
    out.push_back("thing " + t.name + (t.is_null ? " null" : "") + " has " + join(name_set(t.possessed, pn)) +
                  " parts " + join(name_set(t.parts, tn)));
  for (const State& s : m.states())
    out.push_back("state " + m.name_of(s.owner) + "." + s.name + (s.declared ? "" : " implicit"));
  for (const StateVariable& v : m.state_variables())
    out.push_back("statevar " + v.name + " " + m.name_of(v.domain) + " -> " + v.codomain);
  for (const Schema& s : m.schemas()) {
    std::string line = "schema " + s.name + " of " + m.name_of(s.describes) + ":";
    for (const Attribute& a : s.attributes) line += " " + a.name + "=" + m.name_of(a.represents);
    out.push_back(line);
  }
  for (const ClassDef& c : m.classes())
    out.push_back("class " + c.name + " " + m.name_of(c.characteristic) +
                  (c.declared_extension ? " {" + join(name_set(*c.declared_extension, tn)) + "}" : ""));
  for (const KindDef& k : m.kinds())
    out.push_back("kind " + k.name + " " + join(name_set(k.properties, pn)) +
                  (k.declared_extension ? " {" + join(name_set(*k.declared_extension, tn)) + "}" : ""));
  for (const PrecedesPair& p : m.precedes_base()) out.push_back("precedes " + pn(p.from) + " " + pn(p.to));
  for (const Thing& t : m.things()) {
    std::string line = "history " + t.name + ":";
    for (const Observation& o : m.history(t.id).observations)
      line += " " + sn(o.state) + "@" + std::to_string(o.time.tick);
    out.push_back(line);
  }
  for (const Process& p : m.processes()) {
    std::string line = "process " + p.name + " of " + tn(p.subject) + ":";
    for (const Event& e : p.steps) line += " <" + sn(e.from) + "," + sn(e.to) + ">";
    out.push_back(line);
  }
  std::sort(out.begin() + 1, out.end());
  return out;
}

}  // namespace detail

/// Empty when equal, otherwise the first differing line of each side.
inline std::string structural_difference(const Model& a, const Model& b) {
  auto da = detail::describe(a);
  auto db = detail::describe(b);
  if (da == db) return {};
  auto [ia, ib] = std::mismatch(da.begin(), da.end(), db.begin(), db.end());
  std::ostringstream os;
  os << "left: " << (ia == da.end() ? "<end>" : *ia) << "\nright: " << (ib == db.end() ? "<end>" : *ib);
  return os.str();
}

// --- generators --------------------------------------------------------------

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Random history for a single thing `T` over states s0..s{alphabet-1}.
struct HistorySpec {
  int alphabet = 1;
  std::vector<std::pair<int, int>> observations;  // (state, tick)
};

inline HistorySpec random_history(Rng& rng, int max_len, int max_tick, int max_alphabet) {
  HistorySpec h;
  h.alphabet = pick(rng, 1, max_alphabet);
  int len = pick(rng, 0, max_len);
  std::vector<int> ticks(max_tick + 1);
  for (int i = 0; i <= max_tick; ++i) ticks[i] = i;
  std::shuffle(ticks.begin(), ticks.end(), rng);
  ticks.resize(std::min<int>(len, max_tick + 1));
  std::sort(ticks.begin(), ticks.end());
  for (int t : ticks) h.observations.emplace_back(pick(rng, 0, h.alphabet - 1), t);
  return h;
}

inline std::string history_source(const HistorySpec& h) {
  std::string src = "model H {\n  property P;\n  thing T possesses P;\n  states of T: ";
  for (int i = 0; i < h.alphabet; ++i) src += (i ? ", s" : "s") + std::to_string(i);
  src += ";\n";
  if (!h.observations.empty()) {
    src += "  history T {";
    for (const auto& [s, t] : h.observations) src += " s" + std::to_string(s) + " @ " + std::to_string(t) + ";";
    src += " }\n";
  }
  src += "}\n";
  return src;
}

/// Random precedes base relation over properties p0..p{n-1}.
inline std::vector<std::pair<int, int>> random_relation(Rng& rng, int n) {
  std::vector<std::pair<int, int>> out;
  int edges = pick(rng, 0, n * 2);
  for (int i = 0; i < edges; ++i) out.emplace_back(pick(rng, 0, n - 1), pick(rng, 0, n - 1));
  return out;
}

inline std::string relation_source(int n, const std::vector<std::pair<int, int>>& rel) {
  std::string src = "model R {\n";
  for (int i = 0; i < n; ++i) src += "  property p" + std::to_string(i) + ";\n";
  for (const auto& [a, b] : rel) src += "  precedes p" + std::to_string(a) + " -> p" + std::to_string(b) + ";\n";
  src += "  thing T possesses";
  for (int i = 0; i < n; ++i) src += (i ? ", p" : " p") + std::to_string(i);
  src += ";\n}\n";
  return src;
}

/// Random possession matrix: possession[t][p].
struct PossessionSpec {
  int things = 1;
  int props = 1;
  std::vector<std::vector<bool>> has;
};

inline PossessionSpec random_possession(Rng& rng, int max_things, int max_props) {
  PossessionSpec s;
  s.things = pick(rng, 1, max_things);
  s.props = pick(rng, 1, max_props);
  s.has.assign(s.things, std::vector<bool>(s.props, false));
  for (auto& row : s.has)
    for (std::size_t p = 0; p < row.size(); ++p) row[p] = coin(rng, 0.4);
  return s;
}

/// Things t0.., properties p0.., one class c{p} per property with `extension`
/// supplying its declared members, and an optional extra thing possessing
/// `extra_prop`.
inline std::string possession_source(const PossessionSpec& s, const std::vector<std::vector<int>>& extensions,
                                     int extra_prop = -1) {
  std::string src = "model C {\n";
  for (int p = 0; p < s.props; ++p) src += "  property p" + std::to_string(p) + ";\n";
  for (int t = 0; t < s.things; ++t) {
    src += "  thing t" + std::to_string(t);
    bool first = true;
    for (int p = 0; p < s.props; ++p)
      if (s.has[t][p]) {
        src += (first ? " possesses p" : ", p") + std::to_string(p);
        first = false;
      }
    src += ";\n";
  }
  if (extra_prop >= 0) src += "  thing extra possesses p" + std::to_string(extra_prop) + ";\n";
  for (int p = 0; p < s.props; ++p) {
    src += "  class c" + std::to_string(p) + " characteristic p" + std::to_string(p) + " = {";
    for (std::size_t i = 0; i < extensions[p].size(); ++i)
      src += (i ? ", t" : " t") + std::to_string(extensions[p][i]);
    src += " };\n";
  }
  src += "}\n";
  return src;
}

}  // namespace bww::test
