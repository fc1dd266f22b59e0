// Command-line driver: analyze, graphs, specialize, run.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "scbta/cli.hpp"

namespace {

using scbta::cli::Format;
using scbta::cli::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format) {
  sub->add_option("--program", cfg.program_path, "Program file")->required();
  sub->add_option("--format", format, "Output format: text, json or dot");
  sub->add_option("--out", cfg.out_path, "Write the output to this file");
}

void add_analysis(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--division", cfg.division_path, "Division file");
  sub->add_option("--entry", cfg.entry_division,
                  "Entry division, e.g. \"incList/3: d,s,d\"");
  sub->add_option("--norm", cfg.norm, "term_size, list_length or a norm file");
  sub->add_flag("--min-memo", cfg.min_memo, "One memo per unsafe loop class");
  sub->add_option("--relations", cfg.relations_path, "Success-pattern size relations");
  sub->add_option("--unfoldable", cfg.unfoldable,
                  "Completely unfoldable predicates, e.g. q/2,r/3");
  sub->add_flag("--trust-unfoldable", cfg.trust_unfoldable,
                "Leave unfoldable predicates out of loop detection");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Size-change binding-time analysis and offline partial evaluation"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format;

  auto* analyze = app.add_subcommand("analyze", "Annotate a program with unfold/memo marks");
  add_common(analyze, cfg, format);
  add_analysis(analyze, cfg);

  auto* graphs = app.add_subcommand("graphs", "Emit size-change graphs");
  add_common(graphs, cfg, format);
  add_analysis(graphs, cfg);
  auto* sel = graphs->add_option_group("selection");
  bool base = false, closure = false, idem = false;
  sel->add_flag("--base", base, "Base graphs (default)");
  sel->add_flag("--closure", closure, "Full composition closure");
  sel->add_flag("--idempotent", idem, "Idempotent graphs of the closure");
  sel->require_option(0, 1);

  auto* spec = app.add_subcommand("specialize", "Specialize a program for an entry atom");
  add_common(spec, cfg, format);
  add_analysis(spec, cfg);
  spec->add_option("--goal", cfg.goal, "Entry atom, e.g. \"incList(L,s(0),R)\"")->required();
  spec->add_flag("--force-mgg", cfg.force_mgg, "Always generalize with mgg at the global level");
  spec->add_option("--budget", cfg.budget, "Unfolding steps allowed per local tree");
  spec->add_option("--marks", cfg.marks_path, "Override unfold/memo marks from a file");

  auto* run = app.add_subcommand("run", "Run a query with the SLD interpreter");
  add_common(run, cfg, format);
  run->add_option("--goal", cfg.goal, "Query, e.g. \"add(s(0),0,Z)\"")->required();
  run->add_option("--depth", cfg.depth, "Derivation depth bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : scbta::cli::kExitInput;
  }

  if (analyze->parsed()) {
    cfg.command = scbta::cli::Command::Analyze;
  } else if (graphs->parsed()) {
    cfg.command = scbta::cli::Command::Graphs;
    cfg.graphs = closure ? scbta::cli::GraphSelection::Closure
                 : idem  ? scbta::cli::GraphSelection::Idempotent
                         : scbta::cli::GraphSelection::Base;
  } else if (spec->parsed()) {
    cfg.command = scbta::cli::Command::Specialize;
  } else {
    cfg.command = scbta::cli::Command::Run;
  }

  if (format.empty() || format == "text") {
    cfg.format = Format::Text;
  } else if (format == "json") {
    cfg.format = Format::Json;
  } else if (format == "dot") {
    cfg.format = Format::Dot;
  } else {
    std::cerr << "error: unknown format '" << format << "'\n";
    return scbta::cli::kExitInput;
  }
  if (graphs->parsed() && format.empty()) cfg.format = Format::Dot;

  return scbta::cli::run(cfg, std::cout, std::cerr);
}
