#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bww/ast.hpp"
#include "bww/diagnostic.hpp"
#include "bww/model.hpp"

namespace bww {

struct ResolveResult {
  ResolvedAst ast;
  std::vector<Diagnostic> errors;
};

namespace detail {

class Resolver {
 public:
  explicit Resolver(const ast::Model& model) : src_(model) {}

  ResolveResult run() {
    out_.ast.model_name = src_.name.text;
    out_.ast.file = src_.file;
    for (const auto& d : src_.decls) std::visit([&](const auto& x) { declare(x); }, d);
    for (const auto& d : src_.decls) std::visit([&](const auto& x) { declare_states(x); }, d);
    for (const auto& d : src_.decls) std::visit([&](const auto& x) { bind(x); }, d);
    // Processes look up states across things, so every history must have
    // contributed its observed states first.
    for (const auto& d : src_.decls)
      if (const auto* p = std::get_if<ast::ProcessDecl>(&d)) bind_process(*p);
    sort_diagnostics(out_.errors);
    return std::move(out_);
  }

 private:
  void error(Code code, const ast::Name& at, std::string message) {
    out_.errors.push_back(Diagnostic{code, Severity::Error, at.text, at.span, std::move(message)});
  }

  template <typename IdT>
  bool add(std::unordered_map<std::string, IdT>& names, const ast::Name& n, IdT id, std::string_view what) {
    if (!names.emplace(n.text, id).second) {
      error(Code::DuplicateName, n, std::string(what) + " '" + n.text + "' is already declared");
      return false;
    }
    return true;
  }

  // --- pass 1: names --------------------------------------------------------

  void declare(const ast::PropertyDecl& d) {
    PropertyId id{static_cast<PropertyId::value_type>(out_.ast.properties.size())};
    if (!add(properties_, d.name, id, "property")) return;
    ResolvedAst::PropertyDecl p;
    p.name = d.name.text;
    p.kind = d.conjuncts.empty() ? ResolvedAst::PropertyKind::Intrinsic : ResolvedAst::PropertyKind::Complex;
    p.span = d.name.span;
    out_.ast.properties.push_back(std::move(p));
    property_src_.push_back(&d);
    mutual_src_.push_back(nullptr);
  }
  void declare(const ast::MutualPropertyDecl& d) {
    PropertyId id{static_cast<PropertyId::value_type>(out_.ast.properties.size())};
    if (!add(properties_, d.name, id, "property")) return;
    ResolvedAst::PropertyDecl p;
    p.name = d.name.text;
    p.kind = ResolvedAst::PropertyKind::Mutual;
    p.binding = d.binding;
    p.span = d.name.span;
    out_.ast.properties.push_back(std::move(p));
    property_src_.push_back(nullptr);
    mutual_src_.push_back(&d);
  }
  void declare(const ast::ThingDecl& d) {
    if (d.name.text == "null") {
      error(Code::ReservedName, d.name, "'null' is the predefined null thing and cannot be declared");
      return;
    }
    ThingId id = ResolvedAst::thing_id(out_.ast.things.size());
    if (!add(things_, d.name, id, "thing")) return;
    out_.ast.things.push_back(ResolvedAst::ThingDecl{d.name.text, {}, {}, d.name.span});
    thing_src_.push_back(&d);
  }
  void declare(const ast::SchemaDecl& d) {
    SchemaId id{static_cast<SchemaId::value_type>(schema_src_.size())};
    if (add(schemas_, d.name, id, "schema")) schema_src_.push_back(&d);
  }
  void declare(const ast::ClassDecl& d) {
    ClassId id{static_cast<ClassId::value_type>(class_src_.size())};
    if (add(classes_, d.name, id, "class")) class_src_.push_back(&d);
  }
  void declare(const ast::KindDecl& d) {
    KindId id{static_cast<KindId::value_type>(kind_src_.size())};
    if (add(kinds_, d.name, id, "kind")) kind_src_.push_back(&d);
  }
  void declare(const ast::ProcessDecl& d) {
    ProcessId id{static_cast<ProcessId::value_type>(process_names_.size())};
    if (add(process_names_, d.name, id, "process")) process_ok_.insert(&d);
  }
  template <typename T>
  void declare(const T&) {}

  // --- pass 2: declared states ---------------------------------------------

  std::optional<ThingId> owner(const ast::Name& n, std::string_view what) {
    if (n.text == "null") {
      error(Code::ReservedName, n, "the null thing cannot have " + std::string(what));
      return std::nullopt;
    }
    auto it = things_.find(n.text);
    if (it == things_.end()) {
      error(Code::UnknownName, n, "unknown thing '" + n.text + "'");
      return std::nullopt;
    }
    return it->second;
  }

  void declare_states(const ast::StatesDecl& d) {
    auto t = owner(d.thing, "states");
    if (!t) return;
    for (const auto& s : d.states) {
      auto key = std::make_pair(*t, s.text);
      if (state_ids_.count(key)) {
        error(Code::DuplicateName, s, "state '" + s.text + "' is already declared for '" + d.thing.text + "'");
        continue;
      }
      StateId id{static_cast<StateId::value_type>(out_.ast.states.size())};
      state_ids_.emplace(key, id);
      out_.ast.states.push_back(ResolvedAst::StateDecl{s.text, *t, true, s.span});
    }
  }
  template <typename T>
  void declare_states(const T&) {}

  // --- pass 3: references ---------------------------------------------------

  std::optional<PropertyId> property(const ast::Name& n) {
    auto it = properties_.find(n.text);
    if (it == properties_.end()) {
      error(Code::UnknownName, n, "unknown property '" + n.text + "'");
      return std::nullopt;
    }
    return it->second;
  }
  std::optional<ThingId> thing(const ast::Name& n) {
    if (n.text == "null") return kNullThing;
    auto it = things_.find(n.text);
    if (it == things_.end()) {
      error(Code::UnknownName, n, "unknown thing '" + n.text + "'");
      return std::nullopt;
    }
    return it->second;
  }
  std::vector<PropertyId> properties(const ast::NameList& names) {
    std::vector<PropertyId> out;
    for (const auto& n : names)
      if (auto p = property(n)) out.push_back(*p);
    return out;
  }
  std::vector<ThingId> things(const ast::NameList& names) {
    std::vector<ThingId> out;
    for (const auto& n : names)
      if (auto t = thing(n)) out.push_back(*t);
    return out;
  }

  void bind(const ast::PropertyDecl& d) {
    auto it = properties_.find(d.name.text);
    if (it == properties_.end() || property_src_[it->second.index()] != &d) return;
    out_.ast.properties[it->second.index()].conjuncts = properties(d.conjuncts);
  }
  void bind(const ast::MutualPropertyDecl& d) {
    auto it = properties_.find(d.name.text);
    if (it == properties_.end() || mutual_src_[it->second.index()] != &d) return;
    out_.ast.properties[it->second.index()].relata = things(d.relata);
  }
  void bind(const ast::ThingDecl& d) {
    auto it = things_.find(d.name.text);
    if (it == things_.end() || thing_src_[it->second.index() - 1] != &d) return;
    auto& decl = out_.ast.things[it->second.index() - 1];
    decl.possesses = properties(d.possesses);
    decl.parts = things(d.parts);
  }
  void bind(const ast::SchemaDecl& d) {
    auto it = schemas_.find(d.name.text);
    if (it == schemas_.end() || schema_src_[it->second.index()] != &d) return;
    auto t = owner(d.thing, "a schema");
    ResolvedAst::SchemaDecl s;
    s.name = d.name.text;
    s.span = d.name.span;
    for (const auto& a : d.attributes) {
      if (auto p = property(a)) {
        s.attributes.push_back(*p);
        s.attribute_spans.push_back(a.span);
      }
    }
    if (!t) return;
    s.describes = *t;
    out_.ast.schemas.push_back(std::move(s));
  }
  void bind(const ast::ClassDecl& d) {
    auto it = classes_.find(d.name.text);
    if (it == classes_.end() || class_src_[it->second.index()] != &d) return;
    auto p = property(d.characteristic);
    std::optional<std::vector<ThingId>> ext;
    if (d.extension) ext = things(*d.extension);
    if (p) out_.ast.classes.push_back(ResolvedAst::ClassDecl{d.name.text, *p, std::move(ext), d.name.span});
  }
  void bind(const ast::KindDecl& d) {
    auto it = kinds_.find(d.name.text);
    if (it == kinds_.end() || kind_src_[it->second.index()] != &d) return;
    auto props = properties(d.properties);
    std::optional<std::vector<ThingId>> ext;
    if (d.extension) ext = things(*d.extension);
    out_.ast.kinds.push_back(ResolvedAst::KindDecl{d.name.text, std::move(props), std::move(ext), d.name.span});
  }
  void bind(const ast::PrecedesDecl& d) {
    auto a = property(d.from);
    auto b = property(d.to);
    if (a && b) out_.ast.precedes.push_back(ResolvedAst::PrecedesDecl{*a, *b, d.from.span});
  }
  void bind(const ast::HistoryDecl& d) {
    auto t = owner(d.thing, "a history");
    if (!t) return;
    ResolvedAst::HistoryDecl h{*t, {}, d.thing.span};
    for (const auto& o : d.observations) {
      // Undeclared observed states become implicit states of the subject;
      // the validator reports them.
      auto key = std::make_pair(*t, o.state.text);
      auto it = state_ids_.find(key);
      if (it == state_ids_.end()) {
        StateId id{static_cast<StateId::value_type>(out_.ast.states.size())};
        it = state_ids_.emplace(key, id).first;
        out_.ast.states.push_back(ResolvedAst::StateDecl{o.state.text, *t, false, o.state.span});
      }
      h.observations.push_back(ResolvedAst::ObservationDecl{it->second, TimePoint{o.tick}, o.state.span});
    }
    out_.ast.histories.push_back(std::move(h));
  }
  template <typename T>
  void bind(const T&) {}

  /// A step state is looked up among the subject's states first, then among
  /// the declared states of all other things when the name is unique there.
  std::optional<StateId> step_state(ThingId subject, const ast::Name& n) {
    if (auto it = state_ids_.find({subject, n.text}); it != state_ids_.end()) return it->second;
    std::optional<StateId> found;
    int matches = 0;
    for (const auto& [key, id] : state_ids_) {
      if (key.second != n.text || !out_.ast.states[id.index()].declared) continue;
      found = id;
      ++matches;
    }
    if (matches == 1) return found;
    error(Code::UnknownName, n,
          matches == 0 ? "unknown state '" + n.text + "'"
                       : "state '" + n.text + "' is ambiguous: it is not a state of the process subject and several "
                                              "other things declare it");
    return std::nullopt;
  }

  void bind_process(const ast::ProcessDecl& d) {
    if (!process_ok_.count(&d)) return;
    auto t = owner(d.thing, "a process");
    if (!t) return;
    ResolvedAst::ProcessDecl p{d.name.text, *t, {}, d.name.span};
    bool ok = true;
    for (const auto& step : d.steps) {
      auto a = step_state(*t, step.from);
      auto b = step_state(*t, step.to);
      if (a && b)
        p.steps.push_back(ResolvedAst::StepDecl{*a, *b, step.from.span});
      else
        ok = false;
    }
    if (ok) out_.ast.processes.push_back(std::move(p));
  }

  const ast::Model& src_;
  ResolveResult out_;
  std::unordered_map<std::string, PropertyId> properties_;
  std::unordered_map<std::string, ThingId> things_;
  std::unordered_map<std::string, SchemaId> schemas_;
  std::unordered_map<std::string, ClassId> classes_;
  std::unordered_map<std::string, KindId> kinds_;
  std::unordered_map<std::string, ProcessId> process_names_;
  std::map<std::pair<ThingId, std::string>, StateId> state_ids_;
  std::vector<const ast::PropertyDecl*> property_src_;
  std::vector<const ast::MutualPropertyDecl*> mutual_src_;
  std::vector<const ast::ThingDecl*> thing_src_;
  std::vector<const ast::SchemaDecl*> schema_src_;
  std::vector<const ast::ClassDecl*> class_src_;
  std::vector<const ast::KindDecl*> kind_src_;
  std::set<const ast::ProcessDecl*> process_ok_;
};

}  // namespace detail

/// Binds every name in `model` to an id. The name `null` refers to the
/// predefined null thing and cannot be declared.
inline ResolveResult resolve(const ast::Model& model) { return detail::Resolver(model).run(); }

}  // namespace bww
