#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "bww/diagnostic.hpp"
#include "bww/error.hpp"
#include "bww/ids.hpp"

namespace bww {

// ---------------------------------------------------------------------------
// Element types
// ---------------------------------------------------------------------------

struct IntrinsicForm {
  friend bool operator==(const IntrinsicForm&, const IntrinsicForm&) = default;
};

/// A relational property shared by two or more things.
struct MutualForm {
  std::vector<ThingId> relata;
  bool binding = false;

  friend bool operator==(const MutualForm&, const MutualForm&) = default;
};

/// Conjunction of properties in canonical form: flat (no complex member),
/// duplicate free, sorted by property name.
struct ComplexForm {
  std::vector<PropertyId> conjuncts;

  friend bool operator==(const ComplexForm&, const ComplexForm&) = default;
};

using PropertyForm = std::variant<IntrinsicForm, MutualForm, ComplexForm>;

struct Property {
  static constexpr CategoryTag category = CategoryTag::Intrinsic;

  /// Invalid for complex properties synthesized by conjoin() that match no
  /// declared property.
  PropertyId id;
  std::string name;
  PropertyForm form;
  std::optional<SourceSpan> span;

  [[nodiscard]] bool is_intrinsic() const noexcept { return std::holds_alternative<IntrinsicForm>(form); }
  [[nodiscard]] bool is_mutual() const noexcept { return std::holds_alternative<MutualForm>(form); }
  [[nodiscard]] bool is_complex() const noexcept { return std::holds_alternative<ComplexForm>(form); }
  [[nodiscard]] const MutualForm* mutual() const noexcept { return std::get_if<MutualForm>(&form); }
  [[nodiscard]] const ComplexForm* complex() const noexcept { return std::get_if<ComplexForm>(&form); }
};

struct Thing {
  static constexpr CategoryTag category = CategoryTag::Intrinsic;

  ThingId id;
  std::string name;
  bool is_null = false;
  /// Directly declared possessions, sorted by id.
  std::vector<PropertyId> possessed;
  /// Direct components in declaration order, duplicate free.
  std::vector<ThingId> parts;
  std::optional<SourceSpan> span;
};

struct State {
  static constexpr CategoryTag category = CategoryTag::Intrinsic;

  StateId id;
  std::string name;
  ThingId owner;
  /// False for states that only appear in a history and were never declared.
  bool declared = true;
  std::map<std::string, std::string> bindings;
  std::optional<SourceSpan> span;
};

struct StateVariable {
  static constexpr CategoryTag category = CategoryTag::Representational;

  std::string name;
  ThingId domain;
  std::string codomain;
  std::optional<SourceSpan> span;
};

struct Attribute {
  static constexpr CategoryTag category = CategoryTag::Representational;

  std::string name;
  PropertyId represents;
  std::optional<SourceSpan> span;
};

struct Schema {
  static constexpr CategoryTag category = CategoryTag::Representational;

  SchemaId id;
  std::string name;
  ThingId describes;
  std::vector<Attribute> attributes;
  std::optional<SourceSpan> span;
};

/// An ordered pair of states of one thing. Equality ignores the span.
struct Event {
  static constexpr CategoryTag category = CategoryTag::PrimitiveRelational;

  ThingId subject;
  StateId from;
  StateId to;
  std::optional<SourceSpan> span;

  friend bool operator==(const Event& a, const Event& b) noexcept {
    return a.subject == b.subject && a.from == b.from && a.to == b.to;
  }
};

struct Process {
  static constexpr CategoryTag category = CategoryTag::Composition;

  ProcessId id;
  std::string name;
  ThingId subject;
  std::vector<Event> steps;
  std::optional<SourceSpan> span;
};

struct Observation {
  StateId state;
  TimePoint time;
  std::optional<SourceSpan> span;

  friend bool operator==(const Observation& a, const Observation& b) noexcept {
    return a.state == b.state && a.time == b.time;
  }
};

/// Time-ordered record of the states one thing was observed in.
struct History {
  static constexpr CategoryTag category = CategoryTag::Collection;

  ThingId subject;
  std::vector<Observation> observations;

  friend bool operator==(const History&, const History&) = default;
};

struct PrecedesPair {
  PropertyId from;
  PropertyId to;
  std::optional<SourceSpan> span;
};

struct ClassDef {
  static constexpr CategoryTag category = CategoryTag::Collection;

  ClassId id;
  std::string name;
  PropertyId characteristic;
  std::optional<std::vector<ThingId>> declared_extension;
  std::optional<SourceSpan> span;
};

struct KindDef {
  static constexpr CategoryTag category = CategoryTag::Collection;

  KindId id;
  std::string name;
  /// Sorted by id, non-empty.
  std::vector<PropertyId> properties;
  std::optional<std::vector<ThingId>> declared_extension;
  std::optional<SourceSpan> span;
};

/// Square boolean matrix stored as 64-bit words per row.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  [[nodiscard]] bool test(std::size_t row, std::size_t col) const noexcept {
    return (bits_[row * words_ + col / 64] >> (col % 64)) & 1U;
  }
  void set(std::size_t row, std::size_t col) noexcept {
    bits_[row * words_ + col / 64] |= std::uint64_t{1} << (col % 64);
  }
  /// row |= other_row
  void merge_row(std::size_t row, std::size_t other) noexcept {
    for (std::size_t w = 0; w < words_; ++w) bits_[row * words_ + w] |= bits_[other * words_ + w];
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// ---------------------------------------------------------------------------
// Resolved declarations: the input to build_model()
// ---------------------------------------------------------------------------

/// Declarations with every name bound to an id. Thing ids are offset by one:
/// ThingId{0} is the predefined null thing and ThingId{i + 1} is things[i].
/// All other ids index their list directly.
struct ResolvedAst {
  enum class PropertyKind { Intrinsic, Mutual, Complex };

  struct PropertyDecl {
    std::string name;
    PropertyKind kind = PropertyKind::Intrinsic;
    std::vector<PropertyId> conjuncts;
    std::vector<ThingId> relata;
    bool binding = false;
    std::optional<SourceSpan> span;
  };
  struct ThingDecl {
    std::string name;
    std::vector<PropertyId> possesses;
    std::vector<ThingId> parts;
    std::optional<SourceSpan> span;
  };
  struct StateDecl {
    std::string name;
    ThingId owner;
    bool declared = true;
    std::optional<SourceSpan> span;
  };
  struct StateVariableDecl {
    std::string name;
    ThingId domain;
    std::string codomain;
    std::optional<SourceSpan> span;
  };
  struct SchemaDecl {
    std::string name;
    ThingId describes;
    std::vector<PropertyId> attributes;
    std::vector<std::optional<SourceSpan>> attribute_spans;
    std::optional<SourceSpan> span;
  };
  struct ClassDecl {
    std::string name;
    PropertyId characteristic;
    std::optional<std::vector<ThingId>> extension;
    std::optional<SourceSpan> span;
  };
  struct KindDecl {
    std::string name;
    std::vector<PropertyId> properties;
    std::optional<std::vector<ThingId>> extension;
    std::optional<SourceSpan> span;
  };
  struct PrecedesDecl {
    PropertyId from;
    PropertyId to;
    std::optional<SourceSpan> span;
  };
  struct ObservationDecl {
    StateId state;
    TimePoint time;
    std::optional<SourceSpan> span;
  };
  struct HistoryDecl {
    ThingId subject;
    std::vector<ObservationDecl> observations;
    std::optional<SourceSpan> span;
  };
  struct StepDecl {
    StateId from;
    StateId to;
    std::optional<SourceSpan> span;
  };
  struct ProcessDecl {
    std::string name;
    ThingId subject;
    std::vector<StepDecl> steps;
    std::optional<SourceSpan> span;
  };

  std::string model_name;
  std::string file;
  std::vector<PropertyDecl> properties;
  std::vector<ThingDecl> things;
  std::vector<StateDecl> states;
  std::vector<StateVariableDecl> state_variables;
  std::vector<SchemaDecl> schemas;
  std::vector<ClassDecl> classes;
  std::vector<KindDecl> kinds;
  std::vector<PrecedesDecl> precedes;
  std::vector<HistoryDecl> histories;
  std::vector<ProcessDecl> processes;

  static constexpr ThingId thing_id(std::size_t decl_index) noexcept {
    return ThingId{static_cast<ThingId::value_type>(decl_index + 1)};
  }
};

namespace detail {
struct ModelBuilder;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// Closed-world registry of one model's elements. Only build_model() and
/// associate() produce instances; every accessor is const, so a built Model
/// can be shared across threads for reading.
class Model {
 public:
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::string& file() const noexcept { return file_; }

  [[nodiscard]] const std::vector<Property>& properties() const noexcept { return properties_; }
  [[nodiscard]] const std::vector<Thing>& things() const noexcept { return things_; }
  [[nodiscard]] const std::vector<State>& states() const noexcept { return states_; }
  [[nodiscard]] const std::vector<StateVariable>& state_variables() const noexcept { return state_variables_; }
  [[nodiscard]] const std::vector<Schema>& schemas() const noexcept { return schemas_; }
  [[nodiscard]] const std::vector<ClassDef>& classes() const noexcept { return classes_; }
  [[nodiscard]] const std::vector<KindDef>& kinds() const noexcept { return kinds_; }
  [[nodiscard]] const std::vector<Process>& processes() const noexcept { return processes_; }
  [[nodiscard]] const std::vector<PrecedesPair>& precedes_base() const noexcept { return precedes_; }
  /// Reflexive-transitive closure of precedes_base(), indexed by property id.
  [[nodiscard]] const BitMatrix& precedes_closure_matrix() const noexcept { return closure_; }
  /// Warnings and ordering errors found while materializing histories.
  [[nodiscard]] const std::vector<Diagnostic>& build_findings() const noexcept { return findings_; }

  [[nodiscard]] const Property& property(PropertyId id) const {
    check(id, properties_.size(), ErrorKind::UnknownProperty);
    return properties_[id.index()];
  }
  [[nodiscard]] const Thing& thing(ThingId id) const {
    check(id, things_.size(), ErrorKind::UnknownThing);
    return things_[id.index()];
  }
  [[nodiscard]] const State& state(StateId id) const {
    check(id, states_.size(), ErrorKind::UnknownState);
    return states_[id.index()];
  }
  [[nodiscard]] const Schema& schema(SchemaId id) const {
    check(id, schemas_.size(), ErrorKind::DanglingReference);
    return schemas_[id.index()];
  }
  [[nodiscard]] const ClassDef& class_def(ClassId id) const {
    check(id, classes_.size(), ErrorKind::UnknownClass);
    return classes_[id.index()];
  }
  [[nodiscard]] const KindDef& kind_def(KindId id) const {
    check(id, kinds_.size(), ErrorKind::UnknownKind);
    return kinds_[id.index()];
  }
  [[nodiscard]] const Process& process(ProcessId id) const {
    check(id, processes_.size(), ErrorKind::DanglingReference);
    return processes_[id.index()];
  }
  [[nodiscard]] const History& history(ThingId id) const {
    check(id, things_.size(), ErrorKind::UnknownThing);
    return histories_[id.index()];
  }
  /// States owned by `id`, declared or observed, in id order.
  [[nodiscard]] const std::vector<StateId>& states_of(ThingId id) const {
    check(id, things_.size(), ErrorKind::UnknownThing);
    return states_by_owner_[id.index()];
  }

  /// Throws the matching Unknown* error when `id` is not declared.
  void require(PropertyId id) const { check(id, properties_.size(), ErrorKind::UnknownProperty); }
  void require(ThingId id) const { check(id, things_.size(), ErrorKind::UnknownThing); }
  void require(StateId id) const { check(id, states_.size(), ErrorKind::UnknownState); }
  void require(ClassId id) const { check(id, classes_.size(), ErrorKind::UnknownClass); }
  void require(KindId id) const { check(id, kinds_.size(), ErrorKind::UnknownKind); }

  [[nodiscard]] bool contains(PropertyId id) const noexcept { return id.valid() && id.index() < properties_.size(); }
  [[nodiscard]] bool contains(ThingId id) const noexcept { return id.valid() && id.index() < things_.size(); }
  [[nodiscard]] bool contains(StateId id) const noexcept { return id.valid() && id.index() < states_.size(); }
  [[nodiscard]] bool contains(ClassId id) const noexcept { return id.valid() && id.index() < classes_.size(); }
  [[nodiscard]] bool contains(KindId id) const noexcept { return id.valid() && id.index() < kinds_.size(); }

  [[nodiscard]] std::optional<PropertyId> find_property(std::string_view n) const { return find(property_names_, n); }
  [[nodiscard]] std::optional<ThingId> find_thing(std::string_view n) const { return find(thing_names_, n); }
  [[nodiscard]] std::optional<SchemaId> find_schema(std::string_view n) const { return find(schema_names_, n); }
  [[nodiscard]] std::optional<ClassId> find_class(std::string_view n) const { return find(class_names_, n); }
  [[nodiscard]] std::optional<KindId> find_kind(std::string_view n) const { return find(kind_names_, n); }
  [[nodiscard]] std::optional<ProcessId> find_process(std::string_view n) const { return find(process_names_, n); }
  [[nodiscard]] std::optional<StateId> find_state(ThingId owner, std::string_view n) const {
    if (!contains(owner)) return std::nullopt;
    for (StateId s : states_by_owner_[owner.index()])
      if (states_[s.index()].name == n) return s;
    return std::nullopt;
  }

  [[nodiscard]] const std::string& name_of(PropertyId id) const { return property(id).name; }
  [[nodiscard]] const std::string& name_of(ThingId id) const { return thing(id).name; }
  [[nodiscard]] const std::string& name_of(StateId id) const { return state(id).name; }

 private:
  friend struct detail::ModelBuilder;

  template <typename Tag>
  static void check(Id<Tag> id, std::size_t size, ErrorKind kind) {
    if (!id.valid() || id.index() >= size)
      throw Error(kind, "id " + (id.valid() ? std::to_string(id.index()) : std::string("<invalid>")) +
                            " is not declared");
  }

  template <typename IdT>
  static std::optional<IdT> find(const std::unordered_map<std::string, IdT>& names, std::string_view n) {
    auto it = names.find(std::string(n));
    if (it == names.end()) return std::nullopt;
    return it->second;
  }

  std::string name_;
  std::string file_;
  std::vector<Property> properties_;
  std::vector<Thing> things_;
  std::vector<State> states_;
  std::vector<StateVariable> state_variables_;
  std::vector<Schema> schemas_;
  std::vector<ClassDef> classes_;
  std::vector<KindDef> kinds_;
  std::vector<Process> processes_;
  std::vector<History> histories_;
  std::vector<PrecedesPair> precedes_;
  std::vector<std::vector<StateId>> states_by_owner_;
  BitMatrix closure_;
  std::vector<Diagnostic> findings_;

  std::unordered_map<std::string, PropertyId> property_names_;
  std::unordered_map<std::string, ThingId> thing_names_;
  std::unordered_map<std::string, SchemaId> schema_names_;
  std::unordered_map<std::string, ClassId> class_names_;
  std::unordered_map<std::string, KindId> kind_names_;
  std::unordered_map<std::string, ProcessId> process_names_;
};

}  // namespace bww
