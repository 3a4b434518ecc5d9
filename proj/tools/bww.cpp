#include <cstdlib>
#include <iostream>
#include <string>

#include <unistd.h>

#include "CLI11.hpp"
#include "bww/cli.hpp"

int main(int argc, char** argv) {
  using namespace bww::cli;

  CLI::App app{"bww - check, query and export BWW-ML conceptual models"};
  app.require_subcommand(1);

  std::string path;
  std::string format = "text";
  std::string expr;
  std::string out_path;
  bool transitive = false;
  bool trace = false;

  auto* check = app.add_subcommand("check", "Validate a model and print diagnostics");
  check->add_option("file", path, "BWW-ML source file")->required();
  check->add_option("--format", format, "Diagnostic format")->check(CLI::IsMember({"text", "json"}));

  auto* query = app.add_subcommand("query", "Evaluate one expression such as \"possesses?(book1, Title)\"");
  query->add_option("file", path, "BWW-ML source file")->required();
  query->add_option("expr", expr, "Query expression")->required();
  query->add_flag("--transitive", transitive, "partof? also follows parts of parts");
  query->add_flag("--trace", trace, "Print the facts behind the answer");

  auto* exp = app.add_subcommand("export", "Write the model as JSON");
  exp->add_option("file", path, "BWW-ML source file")->required();
  exp->add_option("-o", out_path, "Output path (default: stdout)");

  auto* closure = app.add_subcommand("closure", "Print the reflexive-transitive precedes closure");
  closure->add_option("file", path, "BWW-ML source file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitStatus::BadInvocation);
  }

  const bool color = std::getenv("BWW_NO_COLOR") == nullptr && isatty(STDERR_FILENO);
  Streams io{std::cout, std::cerr, color};

  ExitStatus status = ExitStatus::BadInvocation;
  if (*check)
    status = run_check(path, format == "json" ? Format::Json : Format::Text, io);
  else if (*query)
    status = run_query(path, expr, bww::QueryOptions{transitive}, trace, io);
  else if (*exp)
    status = run_export(path, out_path, io);
  else if (*closure)
    status = run_closure(path, io);
  return static_cast<int>(status);
}
