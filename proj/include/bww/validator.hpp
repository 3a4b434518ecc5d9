#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "bww/diagnostic.hpp"
#include "bww/model.hpp"
#include "bww/semantics.hpp"

namespace bww {

namespace rules {

inline Diagnostic make(Code code, std::string subject, const std::optional<SourceSpan>& span, std::string message) {
  Severity sev = code == Code::W1 ? Severity::Warning : code == Code::I2 ? Severity::Info : Severity::Error;
  return Diagnostic{code, sev, std::move(subject), span, std::move(message)};
}

/// V1: things possess at least one property and properties have a possessor.
inline void possession_cardinality(const Model& m, std::vector<Diagnostic>& out) {
  for (const Thing& t : m.things())
    if (!t.is_null && t.possessed.empty())
      out.push_back(make(Code::V1, t.name, t.span, "thing '" + t.name + "' possesses no property"));
  for (const Property& p : m.properties())
    if (possessors(m, p).empty())
      out.push_back(make(Code::V1, p.name, p.span, "property '" + p.name + "' is possessed by no thing"));
}

/// V2 and W1 are detected while the model is built.
inline void history_order(const Model& m, std::vector<Diagnostic>& out) {
  for (const Diagnostic& d : m.build_findings())
    if (d.code == Code::V2 || d.code == Code::W1) out.push_back(d);
  for (const Thing& t : m.things()) {
    const auto& obs = m.history(t.id).observations;
    for (std::size_t i = 1; i < obs.size(); ++i)
      if (!(obs[i - 1].time < obs[i].time))
        out.push_back(make(Code::V2, t.name, obs[i].span,
                           "history of '" + t.name + "' is not in increasing time order"));
  }
}

/// V3: possessing a property implies possessing everything that precedes it.
inline void precedence_necessity(const Model& m, std::vector<Diagnostic>& out) {
  const auto closure = precedes_closure(m);
  for (const Thing& t : m.things()) {
    if (t.is_null) continue;
    for (const auto& [p1, p2] : closure) {
      if (p1 == p2) continue;
      if (possesses(m, t.id, p2) && !possesses(m, t.id, p1))
        out.push_back(make(Code::V3, t.name, t.span,
                           "thing '" + t.name + "' possesses '" + m.name_of(p2) + "' but not '" + m.name_of(p1) +
                               "', which precedes it"));
    }
  }
}

inline void compare_extension(const Model& m, const std::string& what, const std::string& name,
                              const std::optional<SourceSpan>& span, const std::vector<ThingId>& declared_raw,
                              const std::vector<ThingId>& computed, Code code, std::vector<Diagnostic>& out) {
  auto declared = detail::sorted_unique(declared_raw);
  for (ThingId t : computed)
    if (!std::binary_search(declared.begin(), declared.end(), t))
      out.push_back(make(code, name, span,
                         "thing '" + m.name_of(t) + "' qualifies for " + what + " '" + name +
                             "' but is missing from its declared extension"));
  for (ThingId t : declared)
    if (!std::binary_search(computed.begin(), computed.end(), t))
      out.push_back(make(code, name, span,
                         "thing '" + m.name_of(t) + "' is in the declared extension of " + what + " '" + name +
                             "' but does not qualify"));
}

/// V4: declared class extensions match the computed ones, both directions.
inline void class_extensions(const Model& m, std::vector<Diagnostic>& out) {
  for (const ClassDef& c : m.classes())
    if (c.declared_extension)
      compare_extension(m, "class", c.name, c.span, *c.declared_extension, class_extension(m, c.id), Code::V4, out);
}

/// V5: same for kinds.
inline void kind_extensions(const Model& m, std::vector<Diagnostic>& out) {
  for (const KindDef& k : m.kinds())
    if (k.declared_extension)
      compare_extension(m, "kind", k.name, k.span, *k.declared_extension, kind_extension(m, k.id), Code::V5, out);
}

/// V6: a schema only describes properties its thing possesses.
inline void schema_attributes(const Model& m, std::vector<Diagnostic>& out) {
  for (const Schema& s : m.schemas())
    for (const Attribute& a : s.attributes)
      if (!possesses(m, s.describes, a.represents))
        out.push_back(make(Code::V6, s.name, a.span ? a.span : s.span,
                           "schema '" + s.name + "' has attribute '" + a.name + "' but '" + m.name_of(s.describes) +
                               "' does not possess it"));
}

/// V7: part-of is irreflexive and acyclic, and null is never a part.
inline void part_of_structure(const Model& m, std::vector<Diagnostic>& out) {
  for (const Thing& t : m.things()) {
    for (ThingId p : t.parts) {
      if (p == t.id)
        out.push_back(make(Code::V7, t.name, t.span, "thing '" + t.name + "' is listed as a part of itself"));
      else if (p == kNullThing)
        out.push_back(make(Code::V7, t.name, t.span, "the null thing cannot be a part of '" + t.name + "'"));
    }
  }

  enum class Mark { Fresh, Active, Done };
  std::vector<Mark> mark(m.things().size(), Mark::Fresh);
  std::vector<ThingId> stack;
  std::function<void(ThingId)> visit = [&](ThingId cur) {
    mark[cur.index()] = Mark::Active;
    stack.push_back(cur);
    for (ThingId next : m.things()[cur.index()].parts) {
      if (next == cur || next == kNullThing) continue;
      if (mark[next.index()] == Mark::Active) {
        std::string cycle;
        auto from = std::find(stack.begin(), stack.end(), next);
        for (auto it = from; it != stack.end(); ++it) cycle += m.name_of(*it) + " -> ";
        cycle += m.name_of(next);
        const Thing& t = m.things()[cur.index()];
        out.push_back(make(Code::V7, t.name, t.span, "part-of cycle: " + cycle));
      } else if (mark[next.index()] == Mark::Fresh) {
        visit(next);
      }
    }
    stack.pop_back();
    mark[cur.index()] = Mark::Done;
  };
  for (const Thing& t : m.things())
    if (mark[t.id.index()] == Mark::Fresh) visit(t.id);
}

/// V8: process steps only use states of the process subject.
inline void process_ownership(const Model& m, std::vector<Diagnostic>& out) {
  for (const Process& p : m.processes()) {
    const std::string& subject = m.name_of(p.subject);
    for (const Event& e : p.steps)
      for (StateId s : {e.from, e.to})
        if (m.state(s).owner != p.subject)
          out.push_back(make(Code::V8, p.name, e.span ? e.span : p.span,
                             "process '" + p.name + "' uses state '" + m.name_of(s) + "' of '" +
                                 m.name_of(m.state(s).owner) + "', not of '" + subject + "'"));
  }
}

/// V9: declared processes are chains of composable events.
inline void process_composition(const Model& m, std::vector<Diagnostic>& out) {
  for (const Process& p : m.processes()) {
    for (const Event& e : p.steps)
      if (e.from == e.to)
        out.push_back(make(Code::V9, p.name, e.span ? e.span : p.span,
                           "step <" + m.name_of(e.from) + "," + m.name_of(e.to) + "> of process '" + p.name +
                               "' does not change state"));
    for (std::size_t i = 0; i + 1 < p.steps.size(); ++i) {
      const Event& a = p.steps[i];
      const Event& b = p.steps[i + 1];
      if (!composable_event(a, b))
        out.push_back(make(Code::V9, p.name, b.span ? b.span : p.span,
                           "process '" + p.name + "' breaks at step " + std::to_string(i + 2) + ": <" +
                               m.name_of(a.from) + "," + m.name_of(a.to) + "> ends in '" + m.name_of(a.to) +
                               "' but <" + m.name_of(b.from) + "," + m.name_of(b.to) + "> starts in '" +
                               m.name_of(b.from) + "'"));
    }
  }
}

/// V10: a mutual property relates at least two things.
inline void mutual_arity(const Model& m, std::vector<Diagnostic>& out) {
  for (const Property& p : m.properties())
    if (const auto* mu = p.mutual(); mu && mu->relata.size() < 2)
      out.push_back(make(Code::V10, p.name, p.span,
                         "mutual property '" + p.name + "' relates " + std::to_string(mu->relata.size()) +
                             " thing(s); at least two are required"));
}

/// V11: observed states are declared states of the observed thing.
inline void observed_states(const Model& m, std::vector<Diagnostic>& out) {
  for (const Thing& t : m.things())
    for (const Observation& o : m.history(t.id).observations)
      if (!m.state(o.state).declared)
        out.push_back(make(Code::V11, t.name, o.span,
                           "state '" + m.name_of(o.state) + "' observed in the history of '" + t.name +
                               "' is not a declared state of it"));
}

/// I2: the declared precedes pairs contain a cycle.
inline void precedence_cycles(const Model& m, std::vector<Diagnostic>& out) {
  const BitMatrix& c = m.precedes_closure_matrix();
  const std::size_t n = m.properties().size();
  std::vector<bool> grouped(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (grouped[i]) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = i; j < n; ++j)
      if (c.test(i, j) && c.test(j, i)) members.push_back(j);
    for (std::size_t j : members) grouped[j] = true;
    if (members.size() < 2) continue;

    std::vector<std::string> names;
    for (std::size_t j : members) names.push_back(m.properties()[j].name);
    std::sort(names.begin(), names.end());
    std::string list;
    for (const auto& nm : names) list += (list.empty() ? "" : ", ") + nm;
    std::optional<SourceSpan> span;
    for (const PrecedesPair& pair : m.precedes_base()) {
      bool inside = std::find(members.begin(), members.end(), pair.from.index()) != members.end() &&
                    std::find(members.begin(), members.end(), pair.to.index()) != members.end();
      if (inside && pair.from != pair.to) {
        span = pair.span;
        break;
      }
    }
    out.push_back(make(Code::I2, names.front(), span, "precedes relation has a cycle among {" + list + "}"));
  }
}

}  // namespace rules

/// Runs every rule over `model` and returns the findings in deterministic
/// order. An empty list means the model is fully conformant.
inline std::vector<Diagnostic> validate(const Model& model) {
  using Rule = void (*)(const Model&, std::vector<Diagnostic>&);
  static constexpr Rule kRules[] = {
      rules::possession_cardinality, rules::history_order,      rules::precedence_necessity,
      rules::class_extensions,       rules::kind_extensions,    rules::schema_attributes,
      rules::part_of_structure,      rules::process_ownership,  rules::process_composition,
      rules::mutual_arity,           rules::observed_states,    rules::precedence_cycles,
  };
  std::vector<Diagnostic> out;
  for (Rule rule : kRules) rule(model, out);
  sort_diagnostics(out);
  return out;
}

}  // namespace bww
