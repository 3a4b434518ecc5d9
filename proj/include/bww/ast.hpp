#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bww/diagnostic.hpp"

namespace bww::ast {

/// An identifier occurrence. Equality compares the text only, so trees
/// parsed from differently formatted sources compare equal.
struct Name {
  std::string text;
  SourceSpan span;

  friend bool operator==(const Name& a, const Name& b) { return a.text == b.text; }
};

using NameList = std::vector<Name>;

/// `property P;` or `property P = A & B;`
struct PropertyDecl {
  Name name;
  NameList conjuncts;
  friend bool operator==(const PropertyDecl&, const PropertyDecl&) = default;
};

struct MutualPropertyDecl {
  Name name;
  NameList relata;
  bool binding = false;
  friend bool operator==(const MutualPropertyDecl&, const MutualPropertyDecl&) = default;
};

struct ThingDecl {
  Name name;
  NameList possesses;
  NameList parts;
  friend bool operator==(const ThingDecl&, const ThingDecl&) = default;
};

struct StatesDecl {
  Name thing;
  NameList states;
  friend bool operator==(const StatesDecl&, const StatesDecl&) = default;
};

struct SchemaDecl {
  Name name;
  Name thing;
  NameList attributes;
  friend bool operator==(const SchemaDecl&, const SchemaDecl&) = default;
};

struct ClassDecl {
  Name name;
  Name characteristic;
  std::optional<NameList> extension;
  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct KindDecl {
  Name name;
  NameList properties;
  std::optional<NameList> extension;
  friend bool operator==(const KindDecl&, const KindDecl&) = default;
};

struct PrecedesDecl {
  Name from;
  Name to;
  friend bool operator==(const PrecedesDecl&, const PrecedesDecl&) = default;
};

struct ObservationDecl {
  Name state;
  std::uint64_t tick = 0;
  friend bool operator==(const ObservationDecl&, const ObservationDecl&) = default;
};

struct HistoryDecl {
  Name thing;
  std::vector<ObservationDecl> observations;
  friend bool operator==(const HistoryDecl&, const HistoryDecl&) = default;
};

struct PairDecl {
  Name from;
  Name to;
  friend bool operator==(const PairDecl&, const PairDecl&) = default;
};

struct ProcessDecl {
  Name name;
  Name thing;
  std::vector<PairDecl> steps;
  friend bool operator==(const ProcessDecl&, const ProcessDecl&) = default;
};

using Decl = std::variant<PropertyDecl, MutualPropertyDecl, ThingDecl, StatesDecl, SchemaDecl, ClassDecl, KindDecl,
                          PrecedesDecl, HistoryDecl, ProcessDecl>;

struct Model {
  Name name;
  std::vector<Decl> decls;
  std::string file;

  friend bool operator==(const Model& a, const Model& b) { return a.name == b.name && a.decls == b.decls; }
};

}  // namespace bww::ast
