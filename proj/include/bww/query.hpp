#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bww/kernel.hpp"
#include "bww/lexer.hpp"
#include "bww/semantics.hpp"

namespace bww {

/// Malformed expression, unknown function or unknown identifier.
class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QueryResult {
  std::variant<bool, std::string> value;
  /// Base facts behind the answer, when the function records them.
  std::vector<std::string> trace;

  [[nodiscard]] std::string text() const {
    if (const bool* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
    return std::get<std::string>(value);
  }
};

struct QueryOptions {
  /// partof? follows parts of parts.
  bool transitive_part_of = false;
};

namespace query {

/// `A` or `A & B & ...`
struct Term {
  std::vector<std::string> names;
};
struct Natural {
  std::uint64_t value = 0;
};
/// `{a, b}`
struct Set {
  std::vector<std::string> names;
};
/// `<s1, s2>` or `<Thing: s1, s2>`
struct EventLiteral {
  std::optional<std::string> subject;
  std::string from;
  std::string to;
};

using Arg = std::variant<Term, Natural, Set, EventLiteral>;

struct Call {
  std::string function;
  std::vector<Arg> args;
};

inline Call parse(std::string_view expr) {
  std::size_t i = 0;
  while (i < expr.size() && (expr[i] == ' ' || expr[i] == '\t')) ++i;
  const std::size_t start = i;
  while (i < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[i])) || expr[i] == '_')) ++i;
  if (i == start || i >= expr.size() || (expr[i] != '?' && expr[i] != '!'))
    throw QueryError("expected a function name ending in '?' or '!'");
  Call call;
  call.function = std::string(expr.substr(start, i + 1 - start));

  LexResult lexed = tokenize(expr.substr(i + 1), "<query>");
  if (!lexed.errors.empty()) throw QueryError(lexed.errors.front().message);
  const auto& t = lexed.tokens;
  std::size_t p = 0;
  auto peek_punct = [&](std::string_view s) { return p < t.size() && t[p].is_punct(s); };
  auto expect_punct = [&](std::string_view s) {
    if (!peek_punct(s)) throw QueryError("expected '" + std::string(s) + "' in query");
    ++p;
  };
  auto ident = [&]() -> std::string {
    if (p >= t.size() || t[p].kind != TokenKind::Identifier) throw QueryError("expected an identifier in query");
    return t[p++].lexeme;
  };

  expect_punct("(");
  if (!peek_punct(")")) {
    do {
      if (peek_punct("{")) {
        ++p;
        Set s;
        if (!peek_punct("}")) {
          s.names.push_back(ident());
          while (peek_punct(",")) {
            ++p;
            s.names.push_back(ident());
          }
        }
        expect_punct("}");
        call.args.emplace_back(std::move(s));
      } else if (peek_punct("<")) {
        ++p;
        EventLiteral e;
        std::string first = ident();
        if (peek_punct(":")) {
          ++p;
          e.subject = std::move(first);
          first = ident();
        }
        e.from = std::move(first);
        expect_punct(",");
        e.to = ident();
        expect_punct(">");
        call.args.emplace_back(std::move(e));
      } else if (p < t.size() && t[p].kind == TokenKind::Natural) {
        call.args.emplace_back(Natural{t[p++].value()});
      } else {
        Term term;
        term.names.push_back(ident());
        while (peek_punct("&")) {
          ++p;
          term.names.push_back(ident());
        }
        call.args.emplace_back(std::move(term));
      }
    } while (peek_punct(",") && (++p, true));
  }
  expect_punct(")");
  if (p != t.size()) throw QueryError("unexpected '" + t[p].lexeme + "' after the closing parenthesis");
  return call;
}

class Evaluator {
 public:
  Evaluator(const Model& model, QueryOptions options) : m_(model), opt_(options) {}

  QueryResult eval(const Call& c) {
    const std::string& f = c.function;
    args_ = &c.args;
    fn_ = f;
    if (f == "possesses?") {
      arity(2);
      ThingId t = thing(0);
      Property p = property_expr(1);
      QueryResult r{possesses(m_, t, p), {}};
      if (const auto* cx = p.complex())
        for (PropertyId q : cx->conjuncts)
          r.trace.push_back(m_.name_of(t) + (possesses(m_, t, q) ? " possesses " : " lacks ") + m_.name_of(q));
      return r;
    }
    if (f == "precedes?") {
      arity(2);
      PropertyId a = property(0), b = property(1);
      QueryResult r{precedes(m_, a, b), {}};
      if (auto path = precedes_path(m_, a, b)) {
        std::string chain;
        for (PropertyId q : *path) chain += (chain.empty() ? "" : " -> ") + m_.name_of(q);
        r.trace.push_back(a == b ? chain + " (reflexive)" : chain);
      }
      return r;
    }
    if (f == "isIn?") {
      arity(3);
      ThingId t = thing(0);
      return QueryResult{is_in(m_, t, state_of(t, 1), TimePoint{natural(2)}), {}};
    }
    if (f == "event?") {
      arity(3);
      ThingId t = thing(0);
      StateId a = state_of(t, 1), b = state_of(t, 2);
      QueryResult r{is_event(m_, t, a, b), {}};
      const auto& obs = m_.history(t).observations;
      for (std::size_t i = 0; i + 1 < obs.size(); ++i)
        if (obs[i].state == a && obs[i + 1].state == b && a != b)
          r.trace.push_back(m_.name_of(a) + "@" + std::to_string(obs[i].time.tick) + " then " + m_.name_of(b) + "@" +
                            std::to_string(obs[i + 1].time.tick));
      return r;
    }
    if (f == "composableEvent?") {
      arity(2);
      return QueryResult{composable_event(event(0), event(1)), {}};
    }
    if (f == "process?") {
      if (args_->empty()) throw QueryError("process? needs at least one event");
      std::vector<Event> steps;
      for (std::size_t i = 0; i < args_->size(); ++i) steps.push_back(event(i));
      return QueryResult{is_process(steps), {}};
    }
    if (f == "fromState!" || f == "toState!") {
      arity(1);
      Event e = event(0);
      return QueryResult{m_.name_of(f == "fromState!" ? from_state(e) : to_state(e)), {}};
    }
    if (f == "complexProperty?") {
      arity(1);
      return QueryResult{property_expr(0).is_complex(), {}};
    }
    if (f == "composite?") {
      arity(1);
      return QueryResult{is_composite(m_, thing(0)), {}};
    }
    if (f == "partof?") {
      arity(2);
      return QueryResult{part_of(m_, thing(0), thing(1),
                                 opt_.transitive_part_of ? PartOfLookup::Transitive : PartOfLookup::Direct),
                         {}};
    }
    if (f == "memberof_c?") {
      arity(2);
      return QueryResult{member_of_class(m_, class_id(0), thing(1)), {}};
    }
    if (f == "memberof_k?") {
      arity(2);
      return QueryResult{member_of_kind(m_, kind_id(0), thing(1)), {}};
    }
    if (f == "class?") {
      arity(2);
      return QueryResult{is_class(m_, thing_set(0), property(1)), {}};
    }
    if (f == "kind?") {
      arity(2);
      return QueryResult{is_kind(m_, thing_set(0), property_set(1)), {}};
    }
    if (f == "characteristicProp_c?") {
      arity(2);
      return QueryResult{is_characteristic_of_class(m_, class_id(0), property(1)), {}};
    }
    if (f == "characteristicProp_k?") {
      arity(2);
      return QueryResult{is_characteristic_of_kind(m_, kind_id(0), property_set(1)), {}};
    }
    throw QueryError("unknown function '" + f + "'");
  }

 private:
  void arity(std::size_t n) const {
    if (args_->size() != n)
      throw QueryError(fn_ + " takes " + std::to_string(n) + " argument(s), got " + std::to_string(args_->size()));
  }

  const std::string& single_name(std::size_t i, std::string_view what) const {
    const auto* term = std::get_if<Term>(&(*args_)[i]);
    if (!term || term->names.size() != 1)
      throw QueryError("argument " + std::to_string(i + 1) + " of " + fn_ + " must be a " + std::string(what) +
                       " name");
    return term->names.front();
  }

  ThingId thing_named(const std::string& n) const {
    auto t = m_.find_thing(n);
    if (!t) throw QueryError("unknown thing '" + n + "'");
    return *t;
  }
  PropertyId property_named(const std::string& n) const {
    auto p = m_.find_property(n);
    if (!p) throw QueryError("unknown property '" + n + "'");
    return *p;
  }

  ThingId thing(std::size_t i) const { return thing_named(single_name(i, "thing")); }
  PropertyId property(std::size_t i) const { return property_named(single_name(i, "property")); }

  Property property_expr(std::size_t i) const {
    const auto* term = std::get_if<Term>(&(*args_)[i]);
    if (!term) throw QueryError("argument " + std::to_string(i + 1) + " of " + fn_ + " must be a property");
    std::vector<PropertyId> ids;
    for (const auto& n : term->names) ids.push_back(property_named(n));
    return conjoin(m_, ids);
  }

  StateId state_of(ThingId t, std::size_t i) const {
    const std::string& n = single_name(i, "state");
    auto s = m_.find_state(t, n);
    if (!s) throw QueryError("'" + m_.name_of(t) + "' has no state '" + n + "'");
    return *s;
  }

  std::uint64_t natural(std::size_t i) const {
    const auto* nat = std::get_if<Natural>(&(*args_)[i]);
    if (!nat) throw QueryError("argument " + std::to_string(i + 1) + " of " + fn_ + " must be a time tick");
    return nat->value;
  }

  ClassId class_id(std::size_t i) const {
    const std::string& n = single_name(i, "class");
    auto c = m_.find_class(n);
    if (!c) throw QueryError("unknown class '" + n + "'");
    return *c;
  }
  KindId kind_id(std::size_t i) const {
    const std::string& n = single_name(i, "kind");
    auto k = m_.find_kind(n);
    if (!k) throw QueryError("unknown kind '" + n + "'");
    return *k;
  }

  const std::vector<std::string>& set_names(std::size_t i) const {
    const auto* set = std::get_if<Set>(&(*args_)[i]);
    if (!set) throw QueryError("argument " + std::to_string(i + 1) + " of " + fn_ + " must be a set '{...}'");
    return set->names;
  }
  std::vector<ThingId> thing_set(std::size_t i) const {
    std::vector<ThingId> out;
    for (const auto& n : set_names(i)) out.push_back(thing_named(n));
    return out;
  }
  std::vector<PropertyId> property_set(std::size_t i) const {
    std::vector<PropertyId> out;
    for (const auto& n : set_names(i)) out.push_back(property_named(n));
    if (out.empty()) throw QueryError("a property set must not be empty");
    return out;
  }

  /// Without an explicit subject the event belongs to the one thing owning
  /// both states.
  Event event(std::size_t i) const {
    const auto* lit = std::get_if<EventLiteral>(&(*args_)[i]);
    if (!lit) throw QueryError("argument " + std::to_string(i + 1) + " of " + fn_ + " must be an event '<s1, s2>'");
    std::optional<ThingId> subject;
    if (lit->subject) {
      subject = thing_named(*lit->subject);
    } else {
      int matches = 0;
      for (const Thing& t : m_.things()) {
        if (m_.find_state(t.id, lit->from) && m_.find_state(t.id, lit->to)) {
          subject = t.id;
          ++matches;
        }
      }
      if (matches == 0)
        throw QueryError("no thing has both states '" + lit->from + "' and '" + lit->to + "'");
      if (matches > 1)
        throw QueryError("event <" + lit->from + ", " + lit->to + "> is ambiguous; write <Thing: " + lit->from +
                         ", " + lit->to + ">");
    }
    auto a = m_.find_state(*subject, lit->from);
    auto b = m_.find_state(*subject, lit->to);
    if (!a || !b)
      throw QueryError("'" + m_.name_of(*subject) + "' has no state '" + (a ? lit->to : lit->from) + "'");
    try {
      return make_event(m_, *a, *b);
    } catch (const Error& e) {
      throw QueryError(e.what());
    }
  }

  const Model& m_;
  QueryOptions opt_;
  const std::vector<Arg>* args_ = nullptr;
  std::string fn_;
};

}  // namespace query

/// Evaluates one expression `FN(args)` against `model`.
/// Throws QueryError for malformed input or unknown names.
inline QueryResult evaluate_query(const Model& model, std::string_view expr, QueryOptions options = {}) {
  query::Call call = query::parse(expr);
  try {
    return query::Evaluator(model, options).eval(call);
  } catch (const Error& e) {
    throw QueryError(e.what());
  }
}

}  // namespace bww
