#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <string_view>

#include "bww/frontend.hpp"
#include "bww/query.hpp"
#include "bww/semantics.hpp"
#include "bww/serialization.hpp"
#include "bww/validator.hpp"

namespace bww::cli {

enum class ExitStatus : int {
  Ok = 0,
  ValidationErrors = 1,
  FrontendFailure = 2,
  BadInvocation = 3,
};

enum class Format { Text, Json };

struct Streams {
  std::ostream& out;
  std::ostream& err;
  bool color = false;
};

namespace detail {

inline void report(const std::vector<Diagnostic>& diags, const std::string& path, Format format, Streams io) {
  if (format == Format::Json) {
    io.out << to_json(diags).dump(2) << '\n';
    return;
  }
  for (const auto& d : diags) io.err << render(d, path, io.color) << '\n';
}

/// Reads and builds the model at `path`. On failure prints what went wrong
/// and sets `status`.
inline std::optional<Model> load(const std::string& path, Format format, Streams io, ExitStatus& status) {
  auto text = read_file(path);
  if (!text) {
    io.err << "bww: cannot read '" << path << "'\n";
    status = ExitStatus::BadInvocation;
    return std::nullopt;
  }
  LoadResult loaded = load_model(*text, path);
  if (!loaded.model) {
    report(loaded.errors, path, format, io);
    status = ExitStatus::FrontendFailure;
    return std::nullopt;
  }
  return std::move(loaded.model);
}

}  // namespace detail

/// Prints diagnostics; exit 1 when any has error severity.
inline ExitStatus run_check(const std::string& path, Format format, Streams io) {
  ExitStatus status = ExitStatus::Ok;
  auto model = detail::load(path, format, io, status);
  if (!model) return status;
  auto diags = validate(*model);
  detail::report(diags, path, format, io);
  return has_errors(diags) ? ExitStatus::ValidationErrors : ExitStatus::Ok;
}

/// Prints the value of one query expression. The truth value never affects
/// the exit status.
inline ExitStatus run_query(const std::string& path, std::string_view expr, QueryOptions options, bool trace,
                            Streams io) {
  ExitStatus status = ExitStatus::Ok;
  auto model = detail::load(path, Format::Text, io, status);
  if (!model) return status;
  try {
    QueryResult r = evaluate_query(*model, expr, options);
    io.out << r.text() << '\n';
    if (trace)
      for (const auto& line : r.trace) io.out << "# " << line << '\n';
  } catch (const QueryError& e) {
    io.err << "bww: " << e.what() << '\n';
    return ExitStatus::BadInvocation;
  }
  return ExitStatus::Ok;
}

/// Writes the JSON document to `out_path`, or to stdout when it is empty.
inline ExitStatus run_export(const std::string& path, const std::string& out_path, Streams io) {
  ExitStatus status = ExitStatus::Ok;
  auto model = detail::load(path, Format::Text, io, status);
  if (!model) return status;
  const std::string doc = export_json(*model, validate(*model)).dump(2) + "\n";
  if (out_path.empty()) {
    io.out << doc;
    return ExitStatus::Ok;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file || !(file << doc) || !file.flush()) {
    io.err << "bww: cannot write '" << out_path << "'\n";
    return ExitStatus::BadInvocation;
  }
  return ExitStatus::Ok;
}

/// One `a -> b` line per closure pair, sorted by name.
inline ExitStatus run_closure(const std::string& path, Streams io) {
  ExitStatus status = ExitStatus::Ok;
  auto model = detail::load(path, Format::Text, io, status);
  if (!model) return status;
  for (const auto& [a, b] : precedes_closure(*model)) io.out << model->name_of(a) << " -> " << model->name_of(b) << '\n';
  return ExitStatus::Ok;
}

}  // namespace bww::cli
