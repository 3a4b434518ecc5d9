#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace bww {

/// 1-based source range; `end_col` points one past the last character.
struct SourceSpan {
  std::string file;
  std::uint32_t start_line = 1;
  std::uint32_t start_col = 1;
  std::uint32_t end_line = 1;
  std::uint32_t end_col = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Span covering `first` through `last`.
inline SourceSpan merge(const SourceSpan& first, const SourceSpan& last) {
  SourceSpan out = first;
  out.end_line = last.end_line;
  out.end_col = last.end_col;
  return out;
}

enum class Severity { Error, Warning, Info };

constexpr std::string_view to_string(Severity s) noexcept {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "error";
}

// Declaration order is the tie-break order for diagnostics at the same position.
enum class Code {
  // frontend
  LexError,
  ParseError,
  UnknownName,
  DuplicateName,
  ReservedName,
  BuildError,
  // validator
  V1, V2, V3, V4, V5, V6, V7, V8, V9, V10, V11,
  W1,
  I2,
};

constexpr std::string_view to_string(Code c) noexcept {
  switch (c) {
    case Code::LexError: return "L1";
    case Code::ParseError: return "P1";
    case Code::UnknownName: return "R1";
    case Code::DuplicateName: return "R2";
    case Code::ReservedName: return "R3";
    case Code::BuildError: return "B1";
    case Code::V1: return "V1";
    case Code::V2: return "V2";
    case Code::V3: return "V3";
    case Code::V4: return "V4";
    case Code::V5: return "V5";
    case Code::V6: return "V6";
    case Code::V7: return "V7";
    case Code::V8: return "V8";
    case Code::V9: return "V9";
    case Code::V10: return "V10";
    case Code::V11: return "V11";
    case Code::W1: return "W1";
    case Code::I2: return "I2";
  }
  return "?";
}

inline std::optional<Code> code_from_string(std::string_view text) {
  for (int i = 0; i <= static_cast<int>(Code::I2); ++i) {
    auto c = static_cast<Code>(i);
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

constexpr bool is_frontend_code(Code c) noexcept { return c <= Code::BuildError; }

struct Diagnostic {
  Code code = Code::V1;
  Severity severity = Severity::Error;
  std::string subject;
  std::optional<SourceSpan> span;
  std::string message;

  [[nodiscard]] std::string_view code_name() const noexcept { return to_string(code); }

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Deterministic order: diagnostics with a position first, by file position,
/// then by code, subject and message.
inline bool diagnostic_less(const Diagnostic& a, const Diagnostic& b) {
  auto key = [](const Diagnostic& d) {
    const bool has = d.span.has_value();
    const SourceSpan& s = has ? *d.span : SourceSpan{};
    return std::make_tuple(!has, s.file, s.start_line, s.start_col, static_cast<int>(d.code),
                           d.subject, d.message);
  };
  return key(a) < key(b);
}

inline void sort_diagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), diagnostic_less);
}

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

/// `FILE:LINE:COL: SEVERITY[CODE]: MESSAGE`. Diagnostics without a position
/// (models built programmatically) drop the line and column.
inline std::string render(const Diagnostic& d, std::string_view fallback_file = "<model>",
                          bool color = false) {
  std::string out;
  if (d.span) {
    out += d.span->file.empty() ? std::string(fallback_file) : d.span->file;
    out += ':' + std::to_string(d.span->start_line) + ':' + std::to_string(d.span->start_col);
  } else {
    out += fallback_file;
  }
  out += ": ";
  std::string sev = std::string(to_string(d.severity)) + '[' + std::string(to_string(d.code)) + ']';
  if (color) {
    const char* ansi = d.severity == Severity::Error     ? "\x1b[1;31m"
                       : d.severity == Severity::Warning ? "\x1b[1;33m"
                                                         : "\x1b[1;36m";
    out += ansi + sev + "\x1b[0m";
  } else {
    out += sev;
  }
  out += ": ";
  out += d.message;
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) { return os << render(d); }

}  // namespace bww
