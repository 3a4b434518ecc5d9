#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bww/kernel.hpp"
#include "bww/model.hpp"

// Read-only queries over a built Model. Every function here is pure; none of
// them touches state beyond the const Model it is handed.

namespace bww {

namespace detail {

inline std::vector<ThingId> sorted_unique(std::span<const ThingId> ids) {
  std::vector<ThingId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Direct possessions plus the conjuncts of directly possessed conjunctions.
inline bool holds_simple(const Model& model, const Thing& thing, PropertyId p) {
  if (std::binary_search(thing.possessed.begin(), thing.possessed.end(), p)) return true;
  for (PropertyId q : thing.possessed) {
    const auto* c = model.properties()[q.index()].complex();
    if (c && std::find(c->conjuncts.begin(), c->conjuncts.end(), p) != c->conjuncts.end()) return true;
  }
  return false;
}

}  // namespace detail

// --- possession --------------------------------------------------------------

/// True iff `t` possesses `p`. A conjunction is possessed iff every conjunct
/// is; possessing a conjunction also means possessing each of its conjuncts.
/// The null thing possesses nothing.
inline bool possesses(const Model& model, ThingId t, const Property& p) {
  const Thing& thing = model.thing(t);
  if (thing.is_null) return false;
  if (const auto* c = p.complex()) {
    if (p.id.valid() && std::binary_search(thing.possessed.begin(), thing.possessed.end(), p.id)) return true;
    return std::all_of(c->conjuncts.begin(), c->conjuncts.end(),
                       [&](PropertyId q) { return detail::holds_simple(model, thing, q); });
  }
  return detail::holds_simple(model, thing, p.id);
}

inline bool possesses(const Model& model, ThingId t, PropertyId p) {
  model.require(t);
  return possesses(model, t, model.property(p));
}

/// Every non-null thing possessing `p`, in id order.
inline std::vector<ThingId> possessors(const Model& model, const Property& p) {
  std::vector<ThingId> out;
  for (const Thing& t : model.things())
    if (possesses(model, t.id, p)) out.push_back(t.id);
  return out;
}

inline std::vector<ThingId> possessors(const Model& model, PropertyId p) {
  return possessors(model, model.property(p));
}

// --- precedence --------------------------------------------------------------

inline bool precedes(const Model& model, PropertyId p1, PropertyId p2) {
  model.require(p1);
  model.require(p2);
  return model.precedes_closure_matrix().test(p1.index(), p2.index());
}

/// All closure pairs, ordered by (name of first, name of second).
inline std::vector<std::pair<PropertyId, PropertyId>> precedes_closure(const Model& model) {
  std::vector<PropertyId> order;
  for (const Property& p : model.properties()) order.push_back(p.id);
  std::sort(order.begin(), order.end(),
            [&](PropertyId a, PropertyId b) { return model.name_of(a) < model.name_of(b); });
  const BitMatrix& m = model.precedes_closure_matrix();
  std::vector<std::pair<PropertyId, PropertyId>> out;
  for (PropertyId a : order)
    for (PropertyId b : order)
      if (m.test(a.index(), b.index())) out.emplace_back(a, b);
  return out;
}

/// Shortest chain of declared precedes pairs leading from `p1` to `p2`,
/// endpoints included; `{p1}` when they are equal, nullopt when unrelated.
inline std::optional<std::vector<PropertyId>> precedes_path(const Model& model, PropertyId p1, PropertyId p2) {
  if (!precedes(model, p1, p2)) return std::nullopt;
  if (p1 == p2) return std::vector<PropertyId>{p1};
  const std::size_t n = model.properties().size();
  std::vector<PropertyId> parent(n);
  std::vector<bool> seen(n, false);
  std::deque<PropertyId> queue{p1};
  seen[p1.index()] = true;
  while (!queue.empty()) {
    PropertyId cur = queue.front();
    queue.pop_front();
    if (cur == p2) break;
    for (const auto& pair : model.precedes_base()) {
      if (pair.from != cur || seen[pair.to.index()]) continue;
      seen[pair.to.index()] = true;
      parent[pair.to.index()] = cur;
      queue.push_back(pair.to);
    }
  }
  std::vector<PropertyId> path{p2};
  while (path.back() != p1) path.push_back(parent[path.back().index()]);
  std::reverse(path.begin(), path.end());
  return path;
}

// --- states and events -------------------------------------------------------

/// Piecewise-constant reading of the history: the thing is in the state of
/// its latest observation at or before `at`, and in no state before the first.
inline bool is_in(const Model& model, ThingId t, StateId s, TimePoint at) {
  const History& h = model.history(t);
  model.require(s);
  auto it = std::upper_bound(h.observations.begin(), h.observations.end(), at,
                             [](TimePoint tp, const Observation& o) { return tp < o.time; });
  if (it == h.observations.begin()) return false;
  return std::prev(it)->state == s;
}

/// True iff the history of `t` moves from `s1` directly to a different `s2`.
inline bool is_event(const Model& model, ThingId t, StateId s1, StateId s2) {
  const History& h = model.history(t);
  model.require(s1);
  model.require(s2);
  if (s1 == s2) return false;
  const auto& obs = h.observations;
  for (std::size_t i = 0; i + 1 < obs.size(); ++i)
    if (obs[i].state == s1 && obs[i + 1].state == s2) return true;
  return false;
}

constexpr StateId from_state(const Event& e) noexcept { return e.from; }
constexpr StateId to_state(const Event& e) noexcept { return e.to; }

/// Builds a well-formed event between two distinct states of one thing.
inline Event make_event(const Model& model, StateId from, StateId to) {
  const State& a = model.state(from);
  const State& b = model.state(to);
  if (a.owner != b.owner)
    throw Error(ErrorKind::InvalidEvent, "'" + a.name + "' and '" + b.name + "' belong to different things");
  if (from == to) throw Error(ErrorKind::InvalidEvent, "an event needs two distinct states");
  return Event{a.owner, from, to, std::nullopt};
}

/// The second event starts where the first ends, on the same thing.
constexpr bool composable_event(const Event& e1, const Event& e2) noexcept {
  return to_state(e1) == from_state(e2) && e1.subject == e2.subject;
}

/// Throws EmptyProcess for an empty list.
inline bool is_process(std::span<const Event> steps) {
  if (steps.empty()) throw Error(ErrorKind::EmptyProcess, "a process needs at least one event");
  for (std::size_t i = 0; i + 1 < steps.size(); ++i)
    if (!composable_event(steps[i], steps[i + 1])) return false;
  return true;
}

inline bool is_process(std::initializer_list<Event> steps) {
  return is_process(std::span<const Event>(steps.begin(), steps.size()));
}

/// Consecutive observation pairs of the history of `t`, in time order.
inline std::vector<Event> derive_events(const Model& model, ThingId t) {
  const auto& obs = model.history(t).observations;
  std::vector<Event> out;
  for (std::size_t i = 0; i + 1 < obs.size(); ++i)
    out.push_back(Event{t, obs[i].state, obs[i + 1].state, obs[i + 1].span});
  return out;
}

// --- composition -------------------------------------------------------------

inline bool is_complex_property(const Model& model, PropertyId p) { return model.property(p).is_complex(); }

inline bool is_composite(const Model& model, ThingId t) { return !model.thing(t).parts.empty(); }

enum class PartOfLookup { Direct, Transitive };

/// True iff `part` is a component of `whole`.
inline bool part_of(const Model& model, ThingId whole, ThingId part, PartOfLookup lookup = PartOfLookup::Direct) {
  const Thing& w = model.thing(whole);
  model.require(part);
  if (lookup == PartOfLookup::Direct) return std::find(w.parts.begin(), w.parts.end(), part) != w.parts.end();

  std::vector<bool> seen(model.things().size(), false);
  std::vector<ThingId> stack(w.parts.begin(), w.parts.end());
  while (!stack.empty()) {
    ThingId cur = stack.back();
    stack.pop_back();
    if (cur == part) return true;
    if (seen[cur.index()]) continue;
    seen[cur.index()] = true;
    const auto& parts = model.things()[cur.index()].parts;
    stack.insert(stack.end(), parts.begin(), parts.end());
  }
  return false;
}

// --- collections -------------------------------------------------------------

inline std::vector<ThingId> class_extension(const Model& model, ClassId c) {
  return possessors(model, model.class_def(c).characteristic);
}

inline bool member_of_class(const Model& model, ClassId c, ThingId t) {
  model.require(t);
  return possesses(model, t, model.class_def(c).characteristic);
}

/// True iff `candidate` is exactly the set of things possessing `p`.
inline bool is_class(const Model& model, std::span<const ThingId> candidate, PropertyId p) {
  model.require(p);
  for (ThingId t : candidate) model.require(t);
  return detail::sorted_unique(candidate) == possessors(model, p);
}

/// Things possessing every property of `props`, in id order.
inline std::vector<ThingId> possessors_of_all(const Model& model, std::span<const PropertyId> props) {
  for (PropertyId p : props) model.require(p);
  std::vector<ThingId> out;
  for (const Thing& t : model.things()) {
    if (t.is_null) continue;
    if (std::all_of(props.begin(), props.end(), [&](PropertyId p) { return possesses(model, t.id, p); }))
      out.push_back(t.id);
  }
  return out;
}

inline std::vector<ThingId> kind_extension(const Model& model, KindId k) {
  return possessors_of_all(model, model.kind_def(k).properties);
}

inline bool member_of_kind(const Model& model, KindId k, ThingId t) {
  const KindDef& kind = model.kind_def(k);
  model.require(t);
  return std::all_of(kind.properties.begin(), kind.properties.end(),
                     [&](PropertyId p) { return possesses(model, t, p); });
}

/// True iff `candidate` is exactly the set of things possessing all of `props`.
inline bool is_kind(const Model& model, std::span<const ThingId> candidate, std::span<const PropertyId> props) {
  if (props.empty()) throw Error(ErrorKind::UnknownProperty, "a kind needs at least one property");
  for (ThingId t : candidate) model.require(t);
  return detail::sorted_unique(candidate) == possessors_of_all(model, props);
}

inline bool is_characteristic_of_class(const Model& model, ClassId c, PropertyId p) {
  model.require(p);
  return model.class_def(c).characteristic == p;
}

inline bool is_characteristic_of_kind(const Model& model, KindId k, std::span<const PropertyId> props) {
  const KindDef& kind = model.kind_def(k);
  std::vector<PropertyId> given(props.begin(), props.end());
  for (PropertyId p : given) model.require(p);
  std::sort(given.begin(), given.end());
  given.erase(std::unique(given.begin(), given.end()), given.end());
  return given == kind.properties;
}

inline std::vector<StateId> state_space(const Model& model, ThingId t) { return model.states_of(t); }

inline const History& history_of(const Model& model, ThingId t) { return model.history(t); }

}  // namespace bww
