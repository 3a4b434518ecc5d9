#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bww/diagnostic.hpp"

namespace bww {

enum class TokenKind { Keyword, Identifier, Natural, Punctuation };

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string lexeme;
  SourceSpan span;

  /// Natural tokens only.
  [[nodiscard]] std::uint64_t value() const {
    std::uint64_t v = 0;
    std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), v);
    return v;
  }
  [[nodiscard]] bool is(TokenKind k, std::string_view text) const noexcept { return kind == k && lexeme == text; }
  [[nodiscard]] bool is_punct(std::string_view text) const noexcept { return is(TokenKind::Punctuation, text); }
  [[nodiscard]] bool is_keyword(std::string_view text) const noexcept { return is(TokenKind::Keyword, text); }
};

/// Tokens compare by kind and lexeme; positions are not part of identity.
inline bool same_tokens(const std::vector<Token>& a, const std::vector<Token>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].kind != b[i].kind || a[i].lexeme != b[i].lexeme) return false;
  return true;
}

inline constexpr std::array<std::string_view, 18> kKeywords = {
    "model", "property", "mutual", "binding", "nonbinding",     "thing", "possesses", "parts",    "states",
    "of",    "schema",   "class",  "kind",    "characteristic", "properties", "precedes", "history", "process",
};

inline bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

inline constexpr std::string_view to_string(TokenKind k) noexcept {
  switch (k) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Natural: return "natural";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "token";
}

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> errors;
};

/// Splits BWW-ML source into tokens. `//` comments and whitespace are
/// skipped. An illegal character is reported and skipped so that lexing
/// continues to the end of the input.
inline LexResult tokenize(std::string_view src, const std::string& file = "<input>") {
  LexResult out;
  std::uint32_t line = 1, col = 1;
  std::size_t i = 0;

  auto span_from = [&](std::uint32_t l, std::uint32_t c) { return SourceSpan{file, l, c, line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;  // count code points, not UTF-8 continuation bytes
      }
    }
  };
  auto ident_start = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::uint32_t l0 = line, c0 = col;
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < src.size() && (ident_start(src[i]) || digit(src[i]))) advance(1);
      std::string word(src.substr(start, i - start));
      TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
      out.tokens.push_back(Token{kind, std::move(word), span_from(l0, c0)});
      continue;
    }
    if (digit(c)) {
      while (i < src.size() && digit(src[i])) advance(1);
      std::string digits(src.substr(start, i - start));
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc{}) {
        out.errors.push_back(Diagnostic{Code::LexError, Severity::Error, digits, span_from(l0, c0),
                                        "number '" + digits + "' is out of range"});
        continue;
      }
      out.tokens.push_back(Token{TokenKind::Natural, std::move(digits), span_from(l0, c0)});
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      advance(2);
      out.tokens.push_back(Token{TokenKind::Punctuation, "->", span_from(l0, c0)});
      continue;
    }
    if (std::string_view("{}();,:=&<>@").find(c) != std::string_view::npos) {
      advance(1);
      out.tokens.push_back(Token{TokenKind::Punctuation, std::string(1, c), span_from(l0, c0)});
      continue;
    }
    // Take the whole UTF-8 sequence so the message shows the full character.
    std::size_t len = 1;
    while (start + len < src.size() && (static_cast<unsigned char>(src[start + len]) & 0xC0) == 0x80) ++len;
    advance(len);
    std::string bad(src.substr(start, len));
    out.errors.push_back(Diagnostic{Code::LexError, Severity::Error, bad, span_from(l0, c0),
                                    "unexpected character '" + bad + "'"});
  }
  return out;
}

/// Joins tokens with single spaces; tokenize() of the result yields the same
/// kinds and lexemes.
inline std::string detokenize(const std::vector<Token>& tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.lexeme;
  }
  return out;
}

}  // namespace bww
