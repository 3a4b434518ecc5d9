#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bww/model.hpp"

namespace bww {

namespace detail {

struct InsertOutcome {
  bool collision = false;
  bool out_of_order = false;
  /// The observation removed by collapsing, either the new one or its successor.
  std::optional<Observation> collapsed;
};

/// Places `obs` at its time position. A state equal to its new predecessor is
/// dropped; a successor equal to the new state is dropped instead. Both keep
/// the piecewise-constant reading of the history unchanged.
inline InsertOutcome insert_observation(History& history, const Observation& obs) {
  InsertOutcome out;
  auto& list = history.observations;
  auto pos = std::lower_bound(list.begin(), list.end(), obs.time,
                              [](const Observation& o, TimePoint t) { return o.time < t; });
  if (pos != list.end() && pos->time == obs.time) {
    out.collision = true;
    return out;
  }
  out.out_of_order = pos != list.end();
  if (pos != list.begin() && std::prev(pos)->state == obs.state) {
    out.collapsed = obs;
    return out;
  }
  pos = list.insert(pos, obs);
  auto next = std::next(pos);
  if (next != list.end() && next->state == obs.state) {
    out.collapsed = *next;
    list.erase(next);
  }
  return out;
}

inline BitMatrix compute_closure(std::size_t n, const std::vector<PrecedesPair>& base) {
  BitMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  for (const auto& p : base) m.set(p.from.index(), p.to.index());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (i != k && m.test(i, k)) m.merge_row(i, k);
  return m;
}

struct ModelBuilder {
  static Model build(const ResolvedAst& ast);
  static Model add_composite(const Model& model, const std::string& name,
                             std::span<const ThingId> components, ThingId& created);

 private:
  template <typename IdT>
  static void register_name(std::unordered_map<std::string, IdT>& names, const std::string& name,
                            IdT id, std::string_view ns) {
    if (name.empty()) throw Error(ErrorKind::DuplicateName, std::string(ns) + " with an empty name");
    if (!names.emplace(name, id).second)
      throw Error(ErrorKind::DuplicateName, std::string(ns) + " '" + name + "' is declared twice");
  }

  static void sort_by_name(const Model& m, std::vector<PropertyId>& ids) {
    std::sort(ids.begin(), ids.end(), [&](PropertyId a, PropertyId b) {
      return m.properties_[a.index()].name < m.properties_[b.index()].name;
    });
  }

  static void build_properties(Model& m, const ResolvedAst& ast);
  static void build_histories(Model& m, const ResolvedAst& ast);
};

inline Model ModelBuilder::build(const ResolvedAst& ast) {
  Model m;
  m.name_ = ast.model_name;
  m.file_ = ast.file;

  const std::size_t thing_count = ast.things.size() + 1;
  auto need_thing = [&](ThingId id, std::string_view where, bool allow_null) {
    if (!id.valid() || id.index() >= thing_count)
      throw Error(ErrorKind::DanglingReference, std::string(where) + " refers to an undeclared thing");
    if (!allow_null && id == kNullThing)
      throw Error(ErrorKind::DanglingReference, std::string(where) + " refers to the null thing");
  };
  auto need_property = [&](PropertyId id, std::string_view where) {
    if (!id.valid() || id.index() >= ast.properties.size())
      throw Error(ErrorKind::DanglingReference, std::string(where) + " refers to an undeclared property");
  };
  auto need_state = [&](StateId id, std::string_view where) {
    if (!id.valid() || id.index() >= ast.states.size())
      throw Error(ErrorKind::DanglingReference, std::string(where) + " refers to an undeclared state");
  };

  // Things first: properties refer to them through mutual relata.
  m.things_.push_back(Thing{kNullThing, "null", true, {}, {}, std::nullopt});
  m.thing_names_.emplace("null", kNullThing);
  for (std::size_t i = 0; i < ast.things.size(); ++i) {
    const auto& decl = ast.things[i];
    if (decl.name == "null")
      throw Error(ErrorKind::IllegalNullDeclaration, "the null thing is predefined and cannot be declared");
    ThingId id = ResolvedAst::thing_id(i);
    register_name(m.thing_names_, decl.name, id, "thing");
    Thing t{id, decl.name, false, {}, {}, decl.span};
    for (PropertyId p : decl.possesses) {
      need_property(p, "thing '" + decl.name + "'");
      t.possessed.push_back(p);
    }
    std::sort(t.possessed.begin(), t.possessed.end());
    t.possessed.erase(std::unique(t.possessed.begin(), t.possessed.end()), t.possessed.end());
    for (ThingId part : decl.parts) {
      need_thing(part, "parts of '" + decl.name + "'", true);
      if (std::find(t.parts.begin(), t.parts.end(), part) == t.parts.end()) t.parts.push_back(part);
    }
    m.things_.push_back(std::move(t));
  }

  build_properties(m, ast);

  m.states_by_owner_.assign(m.things_.size(), {});
  for (std::size_t i = 0; i < ast.states.size(); ++i) {
    const auto& decl = ast.states[i];
    need_thing(decl.owner, "state '" + decl.name + "'", false);
    StateId id{static_cast<StateId::value_type>(i)};
    if (m.find_state(decl.owner, decl.name))
      throw Error(ErrorKind::DuplicateName, "state '" + decl.name + "' is declared twice for '" +
                                                m.things_[decl.owner.index()].name + "'");
    m.states_.push_back(State{id, decl.name, decl.owner, decl.declared, {}, decl.span});
    m.states_by_owner_[decl.owner.index()].push_back(id);
  }

  for (const auto& decl : ast.state_variables) {
    need_thing(decl.domain, "state variable '" + decl.name + "'", false);
    for (const auto& sv : m.state_variables_)
      if (sv.domain == decl.domain && sv.name == decl.name)
        throw Error(ErrorKind::DuplicateName, "state variable '" + decl.name + "' is declared twice");
    m.state_variables_.push_back(StateVariable{decl.name, decl.domain, decl.codomain, decl.span});
  }

  for (std::size_t i = 0; i < ast.schemas.size(); ++i) {
    const auto& decl = ast.schemas[i];
    SchemaId id{static_cast<SchemaId::value_type>(i)};
    register_name(m.schema_names_, decl.name, id, "schema");
    need_thing(decl.describes, "schema '" + decl.name + "'", false);
    Schema s{id, decl.name, decl.describes, {}, decl.span};
    for (std::size_t a = 0; a < decl.attributes.size(); ++a) {
      need_property(decl.attributes[a], "schema '" + decl.name + "'");
      std::optional<SourceSpan> span = a < decl.attribute_spans.size() ? decl.attribute_spans[a] : decl.span;
      s.attributes.push_back(Attribute{m.properties_[decl.attributes[a].index()].name, decl.attributes[a], span});
    }
    m.schemas_.push_back(std::move(s));
  }

  for (std::size_t i = 0; i < ast.classes.size(); ++i) {
    const auto& decl = ast.classes[i];
    ClassId id{static_cast<ClassId::value_type>(i)};
    register_name(m.class_names_, decl.name, id, "class");
    need_property(decl.characteristic, "class '" + decl.name + "'");
    if (decl.extension)
      for (ThingId t : *decl.extension) need_thing(t, "extension of class '" + decl.name + "'", true);
    m.classes_.push_back(ClassDef{id, decl.name, decl.characteristic, decl.extension, decl.span});
  }

  for (std::size_t i = 0; i < ast.kinds.size(); ++i) {
    const auto& decl = ast.kinds[i];
    KindId id{static_cast<KindId::value_type>(i)};
    register_name(m.kind_names_, decl.name, id, "kind");
    if (decl.properties.empty())
      throw Error(ErrorKind::DanglingReference, "kind '" + decl.name + "' has no properties");
    std::vector<PropertyId> props;
    for (PropertyId p : decl.properties) {
      need_property(p, "kind '" + decl.name + "'");
      props.push_back(p);
    }
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());
    if (decl.extension)
      for (ThingId t : *decl.extension) need_thing(t, "extension of kind '" + decl.name + "'", true);
    m.kinds_.push_back(KindDef{id, decl.name, std::move(props), decl.extension, decl.span});
  }

  for (const auto& decl : ast.precedes) {
    need_property(decl.from, "precedes");
    need_property(decl.to, "precedes");
    bool seen = std::any_of(m.precedes_.begin(), m.precedes_.end(),
                            [&](const PrecedesPair& p) { return p.from == decl.from && p.to == decl.to; });
    if (!seen) m.precedes_.push_back(PrecedesPair{decl.from, decl.to, decl.span});
  }

  for (const auto& decl : ast.histories) {
    need_thing(decl.subject, "history", false);
    for (const auto& obs : decl.observations) need_state(obs.state, "history");
  }
  build_histories(m, ast);

  for (std::size_t i = 0; i < ast.processes.size(); ++i) {
    const auto& decl = ast.processes[i];
    ProcessId id{static_cast<ProcessId::value_type>(i)};
    register_name(m.process_names_, decl.name, id, "process");
    need_thing(decl.subject, "process '" + decl.name + "'", false);
    Process p{id, decl.name, decl.subject, {}, decl.span};
    for (const auto& step : decl.steps) {
      need_state(step.from, "process '" + decl.name + "'");
      need_state(step.to, "process '" + decl.name + "'");
      p.steps.push_back(Event{decl.subject, step.from, step.to, step.span});
    }
    m.processes_.push_back(std::move(p));
  }

  m.closure_ = compute_closure(m.properties_.size(), m.precedes_);
  sort_diagnostics(m.findings_);
  return m;
}

inline void ModelBuilder::build_properties(Model& m, const ResolvedAst& ast) {
  const std::size_t n = ast.properties.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& decl = ast.properties[i];
    PropertyId id{static_cast<PropertyId::value_type>(i)};
    register_name(m.property_names_, decl.name, id, "property");
    Property p{id, decl.name, IntrinsicForm{}, decl.span};
    if (decl.kind == ResolvedAst::PropertyKind::Mutual) {
      for (ThingId t : decl.relata)
        if (!t.valid() || t.index() >= m.things_.size())
          throw Error(ErrorKind::DanglingReference, "relata of '" + decl.name + "' refer to an undeclared thing");
      p.form = MutualForm{decl.relata, decl.binding};
    }
    m.properties_.push_back(std::move(p));
  }

  // Flatten conjunctions depth-first; a property reached again while still
  // on the stack closes a cycle.
  enum class Mark { Fresh, Active, Done };
  std::vector<Mark> mark(n, Mark::Fresh);
  std::vector<std::vector<PropertyId>> flat(n);
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    const auto& decl = ast.properties[i];
    if (decl.kind != ResolvedAst::PropertyKind::Complex) {
      mark[i] = Mark::Done;
      return;
    }
    mark[i] = Mark::Active;
    std::vector<PropertyId> out;
    for (PropertyId c : decl.conjuncts) {
      if (!c.valid() || c.index() >= n)
        throw Error(ErrorKind::DanglingReference, "conjunct of '" + decl.name + "' is undeclared");
      if (mark[c.index()] == Mark::Active)
        throw Error(ErrorKind::CyclicConjunction, "'" + decl.name + "' is defined in terms of itself");
      if (mark[c.index()] == Mark::Fresh) visit(c.index());
      if (ast.properties[c.index()].kind == ResolvedAst::PropertyKind::Complex)
        out.insert(out.end(), flat[c.index()].begin(), flat[c.index()].end());
      else
        out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    flat[i] = std::move(out);
    mark[i] = Mark::Done;
  };
  for (std::size_t i = 0; i < n; ++i)
    if (mark[i] == Mark::Fresh) visit(i);

  for (std::size_t i = 0; i < n; ++i) {
    if (ast.properties[i].kind != ResolvedAst::PropertyKind::Complex) continue;
    if (flat[i].size() < 2)
      throw Error(ErrorKind::DegenerateConjunction,
                  "'" + ast.properties[i].name + "' conjoins fewer than two distinct properties");
    sort_by_name(m, flat[i]);
    m.properties_[i].form = ComplexForm{std::move(flat[i])};
  }
}

inline void ModelBuilder::build_histories(Model& m, const ResolvedAst& ast) {
  m.histories_.clear();
  for (const auto& t : m.things_) m.histories_.push_back(History{t.id, {}});

  for (const auto& decl : ast.histories) {
    History& h = m.histories_[decl.subject.index()];
    const std::string& subject = m.things_[decl.subject.index()].name;
    for (const auto& od : decl.observations) {
      const State& st = m.states_[od.state.index()];
      if (st.owner != decl.subject)
        throw Error(ErrorKind::ForeignState, "state '" + st.name + "' is not owned by '" + subject + "'");
      Observation obs{od.state, od.time, od.span};
      InsertOutcome r = insert_observation(h, obs);
      const std::string tick = std::to_string(od.time.tick);
      if (r.collision) {
        m.findings_.push_back(Diagnostic{Code::V2, Severity::Error, subject, od.span,
                                         "history of '" + subject + "' already has an observation at tick " +
                                             tick + "; '" + st.name + "@" + tick + "' is ignored"});
        continue;
      }
      if (r.out_of_order)
        m.findings_.push_back(Diagnostic{Code::V2, Severity::Error, subject, od.span,
                                         "history of '" + subject + "' is not in increasing time order at '" +
                                             st.name + "@" + tick + "'"});
      if (r.collapsed) {
        const std::string dropped = m.states_[r.collapsed->state.index()].name + "@" +
                                    std::to_string(r.collapsed->time.tick);
        m.findings_.push_back(Diagnostic{Code::W1, Severity::Warning, subject, r.collapsed->span,
                                         "observation '" + dropped + "' repeats the adjacent state of '" +
                                             subject + "' and was collapsed"});
      }
    }
  }
}

inline Model ModelBuilder::add_composite(const Model& model, const std::string& name,
                                         std::span<const ThingId> components, ThingId& created) {
  if (components.empty()) throw Error(ErrorKind::EmptyAssociation, "'" + name + "' needs at least one component");
  if (name == "null") throw Error(ErrorKind::IllegalNullDeclaration, "the null thing cannot be redeclared");
  if (name.empty() || model.find_thing(name))
    throw Error(ErrorKind::DuplicateName, "thing '" + name + "' already exists");

  Model m = model;
  ThingId id{static_cast<ThingId::value_type>(m.things_.size())};
  Thing composite{id, name, false, {}, {}, std::nullopt};
  for (ThingId c : components) {
    if (!m.contains(c)) throw Error(ErrorKind::UnknownThing, "component of '" + name + "' is undeclared");
    if (c == kNullThing) throw Error(ErrorKind::NullAsComponent, "the null thing cannot be a component");
    if (std::find(composite.parts.begin(), composite.parts.end(), c) == composite.parts.end())
      composite.parts.push_back(c);
  }
  m.things_.push_back(composite);

  // Any path from a component back to the composite would close a cycle.
  std::vector<bool> seen(m.things_.size(), false);
  std::vector<ThingId> stack(composite.parts.begin(), composite.parts.end());
  while (!stack.empty()) {
    ThingId cur = stack.back();
    stack.pop_back();
    if (cur == id) throw Error(ErrorKind::SelfContainment, "'" + name + "' would contain itself");
    if (seen[cur.index()]) continue;
    seen[cur.index()] = true;
    for (ThingId p : m.things_[cur.index()].parts) stack.push_back(p);
  }

  m.thing_names_.emplace(name, id);
  m.histories_.push_back(History{id, {}});
  m.states_by_owner_.emplace_back();
  created = id;
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Construction operations
// ---------------------------------------------------------------------------

/// Materializes resolved declarations into an immutable Model. The null thing
/// is inserted, conjunctions are canonicalized and histories are time-ordered;
/// ordering problems become V2 findings and repeated states W1 findings.
///
/// Throws Error with DuplicateName, DanglingReference, IllegalNullDeclaration,
/// CyclicConjunction, DegenerateConjunction or ForeignState.
inline Model build_model(const ResolvedAst& ast) { return detail::ModelBuilder::build(ast); }

/// Canonical conjunction of `props`: nested conjunctions are flattened,
/// duplicates dropped and conjuncts sorted by name. A single distinct conjunct
/// yields that property unchanged; a conjunction matching a declared complex
/// property yields the declared one; otherwise an undeclared complex property
/// with an invalid id is returned.
inline Property conjoin(const Model& model, std::span<const PropertyId> props) {
  if (props.empty()) throw Error(ErrorKind::EmptyConjunction, "conjoin needs at least one property");
  std::vector<PropertyId> flat;
  for (PropertyId p : props) {
    const Property& prop = model.property(p);
    if (const auto* c = prop.complex())
      flat.insert(flat.end(), c->conjuncts.begin(), c->conjuncts.end());
    else
      flat.push_back(p);
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.size() == 1) return model.property(flat.front());

  std::sort(flat.begin(), flat.end(),
            [&](PropertyId a, PropertyId b) { return model.name_of(a) < model.name_of(b); });
  for (const Property& p : model.properties())
    if (const auto* c = p.complex(); c && c->conjuncts == flat) return p;

  std::string name;
  for (PropertyId p : flat) {
    if (!name.empty()) name += " & ";
    name += model.name_of(p);
  }
  return Property{PropertyId::invalid(), std::move(name), ComplexForm{std::move(flat)}, std::nullopt};
}

inline Property conjoin(const Model& model, std::initializer_list<PropertyId> props) {
  return conjoin(model, std::span<const PropertyId>(props.begin(), props.size()));
}

struct Association {
  Model model;
  ThingId composite;
};

/// Returns a copy of `model` extended with a new composite thing `name` whose
/// direct parts are `components`.
inline Association associate(const Model& model, const std::string& name, std::span<const ThingId> components) {
  ThingId id;
  Model out = detail::ModelBuilder::add_composite(model, name, components, id);
  return Association{std::move(out), id};
}

inline Association associate(const Model& model, const std::string& name, std::initializer_list<ThingId> components) {
  return associate(model, name, std::span<const ThingId>(components.begin(), components.size()));
}

struct RecordResult {
  History history;
  /// Set when the observation repeated an adjacent state (warning W1).
  std::optional<Diagnostic> warning;
};

/// Inserts an observation at its time position.
/// Throws UnknownState, ForeignState or TimeCollision.
inline RecordResult record_observation(const Model& model, const History& history, StateId state, TimePoint t) {
  const State& st = model.state(state);
  if (st.owner != history.subject)
    throw Error(ErrorKind::ForeignState, "state '" + st.name + "' is not owned by the history subject");
  RecordResult out{history, std::nullopt};
  detail::InsertOutcome r = detail::insert_observation(out.history, Observation{state, t, std::nullopt});
  if (r.collision)
    throw Error(ErrorKind::TimeCollision, "tick " + std::to_string(t.tick) + " already has an observation");
  if (r.collapsed) {
    const std::string& subject = model.name_of(history.subject);
    out.warning = Diagnostic{Code::W1, Severity::Warning, subject, std::nullopt,
                             "observation '" + model.name_of(r.collapsed->state) + "@" +
                                 std::to_string(r.collapsed->time.tick) + "' repeats the adjacent state of '" +
                                 subject + "' and was collapsed"};
  }
  return out;
}

}  // namespace bww
