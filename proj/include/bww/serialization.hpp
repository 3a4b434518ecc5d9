#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bww/ast.hpp"
#include "bww/frontend.hpp"
#include "bww/model.hpp"
#include "bww/semantics.hpp"

namespace bww {

using Json = nlohmann::ordered_json;

inline Json to_json(const Diagnostic& d) {
  Json j;
  j["code"] = std::string(to_string(d.code));
  j["severity"] = std::string(to_string(d.severity));
  j["subject"] = d.subject;
  if (d.span) {
    j["file"] = d.span->file;
    j["line"] = d.span->start_line;
    j["column"] = d.span->start_col;
    j["endLine"] = d.span->end_line;
    j["endColumn"] = d.span->end_col;
  } else {
    j["file"] = nullptr;
    j["line"] = nullptr;
    j["column"] = nullptr;
    j["endLine"] = nullptr;
    j["endColumn"] = nullptr;
  }
  j["message"] = d.message;
  return j;
}

inline Json to_json(const std::vector<Diagnostic>& diags) {
  Json arr = Json::array();
  for (const auto& d : diags) arr.push_back(to_json(d));
  return arr;
}

namespace detail {

template <typename IdT>
Json sorted_names(const Model& m, const std::vector<IdT>& ids) {
  std::vector<std::string> names;
  for (IdT id : ids) names.push_back(m.name_of(id));
  std::sort(names.begin(), names.end());
  return Json(names);
}

template <typename IdT>
Json names_in_order(const Model& m, const std::vector<IdT>& ids) {
  Json arr = Json::array();
  for (IdT id : ids) arr.push_back(m.name_of(id));
  return arr;
}

template <typename T>
std::vector<const T*> by_name(const std::vector<T>& items) {
  std::vector<const T*> out;
  for (const auto& x : items) out.push_back(&x);
  std::sort(out.begin(), out.end(), [](const T* a, const T* b) { return a->name < b->name; });
  return out;
}

inline Json pair_list(const Model& m, const std::vector<std::pair<PropertyId, PropertyId>>& pairs) {
  Json arr = Json::array();
  for (const auto& [a, b] : pairs) arr.push_back(Json::array({m.name_of(a), m.name_of(b)}));
  return arr;
}

}  // namespace detail

/// Serializes the instantiated model. Field order is fixed and every
/// collection of named elements is sorted by name.
inline Json export_json(const Model& m, const std::vector<Diagnostic>& diagnostics) {
  using detail::by_name;
  Json doc;
  doc["model"] = m.name();

  Json things = Json::array();
  for (const Thing* t : by_name(m.things())) {
    Json j;
    j["name"] = t->name;
    j["isNull"] = t->is_null;
    j["possesses"] = detail::sorted_names(m, t->possessed);
    j["parts"] = detail::names_in_order(m, t->parts);
    std::vector<StateId> declared;
    for (StateId s : m.states_of(t->id))
      if (m.state(s).declared) declared.push_back(s);
    j["states"] = detail::sorted_names(m, declared);
    Json hist = Json::array();
    for (const auto& o : m.history(t->id).observations)
      hist.push_back(Json{{"state", m.name_of(o.state)}, {"time", o.time.tick}});
    j["history"] = std::move(hist);
    Json vars = Json::array();
    for (const StateVariable& v : m.state_variables())
      if (v.domain == t->id) vars.push_back(Json{{"name", v.name}, {"codomain", v.codomain}});
    j["stateVariables"] = std::move(vars);
    things.push_back(std::move(j));
  }
  doc["things"] = std::move(things);

  Json props = Json::array();
  for (const Property* p : by_name(m.properties())) {
    Json j;
    j["name"] = p->name;
    j["form"] = p->is_complex() ? "complex" : p->is_mutual() ? "mutual" : "intrinsic";
    j["conjuncts"] = p->complex() ? detail::names_in_order(m, p->complex()->conjuncts) : Json::array();
    j["relata"] = p->mutual() ? detail::names_in_order(m, p->mutual()->relata) : Json::array();
    j["binding"] = p->mutual() ? Json(p->mutual()->binding) : Json(nullptr);
    props.push_back(std::move(j));
  }
  doc["properties"] = std::move(props);

  Json schemas = Json::array();
  for (const Schema* s : by_name(m.schemas())) {
    Json attrs = Json::array();
    for (const Attribute& a : s->attributes) attrs.push_back(a.name);
    schemas.push_back(Json{{"name", s->name}, {"describes", m.name_of(s->describes)}, {"attributes", attrs}});
  }
  doc["schemas"] = std::move(schemas);

  Json classes = Json::array();
  for (const ClassDef* c : by_name(m.classes())) {
    Json j;
    j["name"] = c->name;
    j["characteristic"] = m.name_of(c->characteristic);
    j["extension"] = detail::sorted_names(m, class_extension(m, c->id));
    j["declaredExtension"] = c->declared_extension ? detail::sorted_names(m, *c->declared_extension) : Json(nullptr);
    classes.push_back(std::move(j));
  }
  doc["classes"] = std::move(classes);

  Json kinds = Json::array();
  for (const KindDef* k : by_name(m.kinds())) {
    Json j;
    j["name"] = k->name;
    j["properties"] = detail::sorted_names(m, k->properties);
    j["extension"] = detail::sorted_names(m, kind_extension(m, k->id));
    j["declaredExtension"] = k->declared_extension ? detail::sorted_names(m, *k->declared_extension) : Json(nullptr);
    kinds.push_back(std::move(j));
  }
  doc["kinds"] = std::move(kinds);

  std::vector<std::pair<PropertyId, PropertyId>> base;
  for (const auto& p : m.precedes_base()) base.emplace_back(p.from, p.to);
  std::sort(base.begin(), base.end(), [&](const auto& a, const auto& b) {
    return std::tie(m.name_of(a.first), m.name_of(a.second)) < std::tie(m.name_of(b.first), m.name_of(b.second));
  });
  doc["precedes"] = Json{{"base", detail::pair_list(m, base)}, {"closure", detail::pair_list(m, precedes_closure(m))}};

  Json processes = Json::array();
  for (const Process* p : by_name(m.processes())) {
    Json steps = Json::array();
    for (const Event& e : p->steps) steps.push_back(Json{{"from", m.name_of(e.from)}, {"to", m.name_of(e.to)}});
    processes.push_back(Json{{"name", p->name}, {"subject", m.name_of(p->subject)}, {"steps", steps}});
  }
  doc["processes"] = std::move(processes);
  doc["diagnostics"] = to_json(diagnostics);
  return doc;
}

namespace detail {

inline ast::Name json_name(const Json& j) { return ast::Name{j.get<std::string>(), SourceSpan{}}; }

inline ast::NameList json_names(const Json& arr) {
  ast::NameList out;
  for (const auto& j : arr) out.push_back(json_name(j));
  return out;
}

}  // namespace detail

/// Rebuilds a Model from an export_json() document. The document is turned
/// back into declarations and sent through name resolution and build_model,
/// so the same checks apply as for source text.
inline LoadResult import_json(const Json& doc, const std::string& file = "<json>") {
  using detail::json_name;
  using detail::json_names;
  LoadResult out;
  ast::Model tree;
  tree.file = file;
  try {
    tree.name = json_name(doc.at("model"));
    for (const auto& p : doc.at("properties")) {
      const std::string form = p.at("form").get<std::string>();
      if (form == "mutual")
        tree.decls.emplace_back(
            ast::MutualPropertyDecl{json_name(p.at("name")), json_names(p.at("relata")), p.at("binding").get<bool>()});
      else
        tree.decls.emplace_back(ast::PropertyDecl{json_name(p.at("name")), json_names(p.at("conjuncts"))});
    }
    for (const auto& t : doc.at("things")) {
      if (t.at("isNull").get<bool>()) continue;
      tree.decls.emplace_back(ast::ThingDecl{json_name(t.at("name")), json_names(t.at("possesses")),
                                             json_names(t.at("parts"))});
      if (!t.at("states").empty())
        tree.decls.emplace_back(ast::StatesDecl{json_name(t.at("name")), json_names(t.at("states"))});
      if (!t.at("history").empty()) {
        ast::HistoryDecl h{json_name(t.at("name")), {}};
        for (const auto& o : t.at("history"))
          h.observations.push_back(ast::ObservationDecl{json_name(o.at("state")), o.at("time").get<std::uint64_t>()});
        tree.decls.emplace_back(std::move(h));
      }
    }
    for (const auto& s : doc.at("schemas"))
      tree.decls.emplace_back(
          ast::SchemaDecl{json_name(s.at("name")), json_name(s.at("describes")), json_names(s.at("attributes"))});
    for (const auto& c : doc.at("classes")) {
      std::optional<ast::NameList> ext;
      if (!c.at("declaredExtension").is_null()) ext = json_names(c.at("declaredExtension"));
      tree.decls.emplace_back(ast::ClassDecl{json_name(c.at("name")), json_name(c.at("characteristic")), ext});
    }
    for (const auto& k : doc.at("kinds")) {
      std::optional<ast::NameList> ext;
      if (!k.at("declaredExtension").is_null()) ext = json_names(k.at("declaredExtension"));
      tree.decls.emplace_back(ast::KindDecl{json_name(k.at("name")), json_names(k.at("properties")), ext});
    }
    for (const auto& pair : doc.at("precedes").at("base"))
      tree.decls.emplace_back(ast::PrecedesDecl{json_name(pair.at(0)), json_name(pair.at(1))});
    for (const auto& p : doc.at("processes")) {
      ast::ProcessDecl d{json_name(p.at("name")), json_name(p.at("subject")), {}};
      for (const auto& s : p.at("steps")) d.steps.push_back(ast::PairDecl{json_name(s.at("from")), json_name(s.at("to"))});
      tree.decls.emplace_back(std::move(d));
    }
  } catch (const Json::exception& e) {
    out.errors.push_back(Diagnostic{Code::ParseError, Severity::Error, "", SourceSpan{file, 1, 1, 1, 1},
                                    std::string("malformed model document: ") + e.what()});
    return out;
  }

  ResolveResult resolved = resolve(tree);
  if (!resolved.errors.empty()) {
    out.errors = std::move(resolved.errors);
    return out;
  }
  try {
    for (const auto& t : doc.at("things")) {
      if (t.at("isNull").get<bool>() || !t.contains("stateVariables")) continue;
      for (std::size_t i = 0; i < resolved.ast.things.size(); ++i) {
        if (resolved.ast.things[i].name != t.at("name").get<std::string>()) continue;
        for (const auto& v : t.at("stateVariables"))
          resolved.ast.state_variables.push_back(ResolvedAst::StateVariableDecl{
              v.at("name").get<std::string>(), ResolvedAst::thing_id(i), v.at("codomain").get<std::string>(), {}});
      }
    }
    out.model = build_model(resolved.ast);
  } catch (const Json::exception& e) {
    out.errors.push_back(Diagnostic{Code::ParseError, Severity::Error, "", SourceSpan{file, 1, 1, 1, 1},
                                    std::string("malformed model document: ") + e.what()});
  } catch (const Error& e) {
    out.errors.push_back(Diagnostic{Code::BuildError, Severity::Error, std::string(to_string(e.kind())),
                                    SourceSpan{file, 1, 1, 1, 1}, e.what()});
  }
  return out;
}

}  // namespace bww
