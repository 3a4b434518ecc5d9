#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bww/diagnostic.hpp"
#include "bww/kernel.hpp"
#include "bww/lexer.hpp"
#include "bww/parser.hpp"
#include "bww/resolver.hpp"

namespace bww {

struct LoadResult {
  std::optional<Model> model;
  /// Lex, parse, resolve and build failures. Empty whenever `model` is set.
  std::vector<Diagnostic> errors;
};

/// Source text to built Model: tokenize, parse, resolve, build. Stops after
/// the first stage that reports errors.
inline LoadResult load_model(std::string_view source, const std::string& file = "<input>") {
  LoadResult out;
  LexResult lexed = tokenize(source, file);
  ParseResult parsed = parse(lexed.tokens, file);
  out.errors = std::move(lexed.errors);
  out.errors.insert(out.errors.end(), parsed.errors.begin(), parsed.errors.end());
  if (!out.errors.empty()) {
    sort_diagnostics(out.errors);
    return out;
  }
  ResolveResult resolved = resolve(parsed.model);
  if (!resolved.errors.empty()) {
    out.errors = std::move(resolved.errors);
    return out;
  }
  try {
    out.model = build_model(resolved.ast);
  } catch (const Error& e) {
    out.errors.push_back(Diagnostic{Code::BuildError, Severity::Error, std::string(to_string(e.kind())),
                                    SourceSpan{file, 1, 1, 1, 1}, e.what()});
  }
  return out;
}

/// Reads a whole file. Returns nullopt when it cannot be opened.
inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

}  // namespace bww
