#pragma once

#include <string>
#include <type_traits>
#include <variant>

#include "bww/ast.hpp"

namespace bww {

namespace detail {

inline std::string join(const ast::NameList& names, std::string_view sep) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += sep;
    out += n.text;
  }
  return out;
}

inline std::string print_extension(const std::optional<ast::NameList>& ext) {
  if (!ext) return "";
  return ext->empty() ? " = {}" : " = { " + join(*ext, ", ") + " }";
}

}  // namespace detail

/// Canonical BWW-ML text for a syntax tree: one declaration per line,
/// two-space indentation. parse(tokenize(print(m))) == m.
inline std::string print(const ast::Model& model) {
  using detail::join;
  std::string out = "model " + model.name.text + " {\n";
  for (const ast::Decl& decl : model.decls) {
    out += "  ";
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ast::PropertyDecl>) {
            out += "property " + d.name.text;
            if (!d.conjuncts.empty()) out += " = " + join(d.conjuncts, " & ");
            out += ";";
          } else if constexpr (std::is_same_v<T, ast::MutualPropertyDecl>) {
            out += "mutual property " + d.name.text + "(" + join(d.relata, ", ") + ") " +
                   (d.binding ? "binding" : "nonbinding") + ";";
          } else if constexpr (std::is_same_v<T, ast::ThingDecl>) {
            out += "thing " + d.name.text;
            if (!d.possesses.empty()) out += " possesses " + join(d.possesses, ", ");
            if (!d.parts.empty()) out += " parts " + join(d.parts, ", ");
            out += ";";
          } else if constexpr (std::is_same_v<T, ast::StatesDecl>) {
            out += "states of " + d.thing.text + ": " + join(d.states, ", ") + ";";
          } else if constexpr (std::is_same_v<T, ast::SchemaDecl>) {
            out += "schema " + d.name.text + " of " + d.thing.text + " (" + join(d.attributes, ", ") + ");";
          } else if constexpr (std::is_same_v<T, ast::ClassDecl>) {
            out += "class " + d.name.text + " characteristic " + d.characteristic.text +
                   detail::print_extension(d.extension) + ";";
          } else if constexpr (std::is_same_v<T, ast::KindDecl>) {
            out += "kind " + d.name.text + " properties " + join(d.properties, ", ") +
                   detail::print_extension(d.extension) + ";";
          } else if constexpr (std::is_same_v<T, ast::PrecedesDecl>) {
            out += "precedes " + d.from.text + " -> " + d.to.text + ";";
          } else if constexpr (std::is_same_v<T, ast::HistoryDecl>) {
            out += "history " + d.thing.text + " {";
            for (const auto& o : d.observations) out += " " + o.state.text + " @ " + std::to_string(o.tick) + ";";
            out += " }";
          } else if constexpr (std::is_same_v<T, ast::ProcessDecl>) {
            out += "process " + d.name.text + " of " + d.thing.text + " = ";
            for (std::size_t i = 0; i < d.steps.size(); ++i) {
              if (i > 0) out += ", ";
              out += "<" + d.steps[i].from.text + ", " + d.steps[i].to.text + ">";
            }
            out += ";";
          }
        },
        decl);
    out += "\n";
  }
  out += "}\n";
  return out;
}

}  // namespace bww
