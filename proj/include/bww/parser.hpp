#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "bww/ast.hpp"
#include "bww/diagnostic.hpp"
#include "bww/lexer.hpp"

namespace bww {

struct ParseResult {
  ast::Model model;
  std::vector<Diagnostic> errors;
};

namespace detail {

/// Recursive-descent parser for BWW-ML. A syntax error abandons the current
/// declaration and skips to the next `;` or `}` at the same nesting depth,
/// so one run reports every independent error.
class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::string file) : toks_(tokens), file_(std::move(file)) {}

  ParseResult run() {
    ParseResult out;
    out.model.file = file_;
    try {
      expect_keyword("model");
      out.model.name = expect_ident();
      expect_punct("{");
    } catch (const Failure&) {
      out.errors = std::move(errors_);
      return out;
    }
    while (!at_end() && !peek().is_punct("}")) {
      const std::size_t before = pos_;
      depth_ = 0;
      try {
        out.model.decls.push_back(decl());
      } catch (const Failure&) {
        recover();
        if (pos_ == before) ++pos_;
      }
    }
    try {
      expect_punct("}");
      if (!at_end()) fail({"end of input"});
    } catch (const Failure&) {
    }
    out.errors = std::move(errors_);
    return out;
  }

 private:
  struct Failure {};

  [[nodiscard]] bool at_end() const noexcept { return pos_ >= toks_.size(); }
  [[nodiscard]] const Token& peek() const {
    static const Token eof{TokenKind::Punctuation, "", {}};
    return at_end() ? eof : toks_[pos_];
  }

  SourceSpan here() const {
    if (!at_end()) return toks_[pos_].span;
    if (toks_.empty()) return SourceSpan{file_, 1, 1, 1, 1};
    SourceSpan s = toks_.back().span;
    s.start_line = s.end_line;
    s.start_col = s.end_col;
    return s;
  }

  [[noreturn]] void fail(std::initializer_list<std::string_view> expected) {
    std::string list;
    std::size_t i = 0;
    for (auto e : expected) {
      if (i > 0) list += (i + 1 == expected.size()) ? " or " : ", ";
      list += e;
      ++i;
    }
    std::string found = at_end() ? "end of input" : "'" + peek().lexeme + "'";
    errors_.push_back(Diagnostic{Code::ParseError, Severity::Error, at_end() ? "" : peek().lexeme, here(),
                                 "expected " + list + ", found " + found});
    throw Failure{};
  }

  const Token& take() {
    const Token& t = toks_[pos_++];
    if (t.is_punct("{")) ++depth_;
    if (t.is_punct("}") && depth_ > 0) --depth_;
    return t;
  }

  void expect_punct(std::string_view p) {
    if (at_end() || !peek().is_punct(p)) fail({"'" + std::string(p) + "'"});
    take();
  }
  void expect_keyword(std::string_view k) {
    if (at_end() || !peek().is_keyword(k)) fail({"'" + std::string(k) + "'"});
    take();
  }
  bool accept_punct(std::string_view p) {
    if (!at_end() && peek().is_punct(p)) {
      take();
      return true;
    }
    return false;
  }
  bool accept_keyword(std::string_view k) {
    if (!at_end() && peek().is_keyword(k)) {
      take();
      return true;
    }
    return false;
  }
  ast::Name expect_ident() {
    if (at_end() || peek().kind != TokenKind::Identifier) fail({"identifier"});
    const Token& t = take();
    return ast::Name{t.lexeme, t.span};
  }
  std::uint64_t expect_natural() {
    if (at_end() || peek().kind != TokenKind::Natural) fail({"natural number"});
    return take().value();
  }
  ast::NameList ident_list() {
    ast::NameList out{expect_ident()};
    while (accept_punct(",")) out.push_back(expect_ident());
    return out;
  }

  void recover() {
    while (!at_end()) {
      const Token& t = peek();
      if (t.is_punct(";") && depth_ == 0) {
        take();
        return;
      }
      if (t.is_punct("}")) {
        if (depth_ == 0) return;  // closes the model; leave it for run()
        take();
        if (depth_ == 0) return;
        continue;
      }
      take();
    }
  }

  ast::Decl decl() {
    const Token& t = peek();
    if (t.kind == TokenKind::Keyword) {
      if (t.lexeme == "property") return property();
      if (t.lexeme == "mutual") return mutual();
      if (t.lexeme == "thing") return thing();
      if (t.lexeme == "states") return states();
      if (t.lexeme == "schema") return schema();
      if (t.lexeme == "class") return klass();
      if (t.lexeme == "kind") return kind();
      if (t.lexeme == "precedes") return precedes();
      if (t.lexeme == "history") return history();
      if (t.lexeme == "process") return process();
    }
    fail({"'property'", "'mutual'", "'thing'", "'states'", "'schema'", "'class'", "'kind'", "'precedes'",
          "'history'", "'process'", "'}'"});
  }

  ast::PropertyDecl property() {
    expect_keyword("property");
    ast::PropertyDecl d{expect_ident(), {}};
    if (accept_punct("=")) {
      d.conjuncts.push_back(expect_ident());
      expect_punct("&");
      d.conjuncts.push_back(expect_ident());
      while (accept_punct("&")) d.conjuncts.push_back(expect_ident());
    }
    expect_punct(";");
    return d;
  }

  ast::MutualPropertyDecl mutual() {
    expect_keyword("mutual");
    expect_keyword("property");
    ast::MutualPropertyDecl d;
    d.name = expect_ident();
    expect_punct("(");
    d.relata = ident_list();
    expect_punct(")");
    if (accept_keyword("binding"))
      d.binding = true;
    else if (accept_keyword("nonbinding"))
      d.binding = false;
    else
      fail({"'binding'", "'nonbinding'"});
    expect_punct(";");
    return d;
  }

  ast::ThingDecl thing() {
    expect_keyword("thing");
    ast::ThingDecl d;
    d.name = expect_ident();
    if (accept_keyword("possesses")) d.possesses = ident_list();
    if (accept_keyword("parts")) d.parts = ident_list();
    expect_punct(";");
    return d;
  }

  ast::StatesDecl states() {
    expect_keyword("states");
    expect_keyword("of");
    ast::StatesDecl d;
    d.thing = expect_ident();
    expect_punct(":");
    d.states = ident_list();
    expect_punct(";");
    return d;
  }

  ast::SchemaDecl schema() {
    expect_keyword("schema");
    ast::SchemaDecl d;
    d.name = expect_ident();
    expect_keyword("of");
    d.thing = expect_ident();
    expect_punct("(");
    d.attributes = ident_list();
    expect_punct(")");
    expect_punct(";");
    return d;
  }

  std::optional<ast::NameList> extension() {
    if (!accept_punct("=")) return std::nullopt;
    expect_punct("{");
    ast::NameList out;
    if (!accept_punct("}")) {
      out = ident_list();
      expect_punct("}");
    }
    return out;
  }

  ast::ClassDecl klass() {
    expect_keyword("class");
    ast::ClassDecl d;
    d.name = expect_ident();
    expect_keyword("characteristic");
    d.characteristic = expect_ident();
    d.extension = extension();
    expect_punct(";");
    return d;
  }

  ast::KindDecl kind() {
    expect_keyword("kind");
    ast::KindDecl d;
    d.name = expect_ident();
    expect_keyword("properties");
    d.properties = ident_list();
    d.extension = extension();
    expect_punct(";");
    return d;
  }

  ast::PrecedesDecl precedes() {
    expect_keyword("precedes");
    ast::PrecedesDecl d;
    d.from = expect_ident();
    expect_punct("->");
    d.to = expect_ident();
    expect_punct(";");
    return d;
  }

  ast::HistoryDecl history() {
    expect_keyword("history");
    ast::HistoryDecl d;
    d.thing = expect_ident();
    expect_punct("{");
    do {
      ast::ObservationDecl o;
      o.state = expect_ident();
      expect_punct("@");
      o.tick = expect_natural();
      expect_punct(";");
      d.observations.push_back(std::move(o));
    } while (!at_end() && peek().kind == TokenKind::Identifier);
    expect_punct("}");
    return d;
  }

  ast::PairDecl pair() {
    expect_punct("<");
    ast::PairDecl p;
    p.from = expect_ident();
    expect_punct(",");
    p.to = expect_ident();
    expect_punct(">");
    return p;
  }

  ast::ProcessDecl process() {
    expect_keyword("process");
    ast::ProcessDecl d;
    d.name = expect_ident();
    expect_keyword("of");
    d.thing = expect_ident();
    expect_punct("=");
    d.steps.push_back(pair());
    while (accept_punct(",")) d.steps.push_back(pair());
    expect_punct(";");
    return d;
  }

  const std::vector<Token>& toks_;
  std::string file_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::vector<Diagnostic> errors_;
};

}  // namespace detail

/// Parses a token list into a syntax tree, collecting every syntax error.
inline ParseResult parse(const std::vector<Token>& tokens, const std::string& file = "<input>") {
  return detail::Parser(tokens, file).run();
}

}  // namespace bww
