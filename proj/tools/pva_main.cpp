//===- pva_main.cpp - Command-line driver ----------------------------------===//
//
// Subcommands:
//   analyze   run the fixpoint and print per-block states (text or JSON)
//   check     fuzz the program against the concrete interpreter
//   dump-cfg  print derived control-flow graphs
//   fmt       parse and reprint a program in canonical form
//
// Exit codes: 0 success; 1 diagnostics under --strict; 2 usage, I/O, parse,
// validation, or iteration-budget errors; 3 soundness violations.
//
//===----------------------------------------------------------------------===//

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "pva/oracle.hpp"
#include "pva/render.hpp"

namespace {

constexpr int kExitDiagnostics = 1;
constexpr int kExitError = 2;
constexpr int kExitUnsound = 3;

std::string load_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

pva::ir::Program load_program(const std::string &path, bool run_validate) {
  pva::ir::Program p = pva::ir::parse_program(load_file(path));
  if (run_validate)
    pva::ir::validate(p);
  return p;
}

struct AnalyzeArgs {
  std::string file;
  pva::AnalysisOptions opts;
  pva::OutputFormat format = pva::OutputFormat::Text;
  bool stats = false;
  bool warnings = false;
  bool strict = false;
};

int run_analyze(const AnalyzeArgs &a) {
  pva::ir::Program p = load_program(a.file, true);
  auto start = std::chrono::steady_clock::now();
  pva::AnalysisResult r = pva::analyze_program(p, a.opts);
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  std::cout << pva::render_result(p, r, a.format);
  if (a.warnings)
    for (const pva::Diagnostic &d : r.diagnostics)
      std::cerr << "warning: " << d.function << "." << d.block << "["
                << d.stmt_index << "]: " << d.code << ": " << d.message
                << "\n";
  if (a.stats) {
    long iters = 0;
    long visits = 0;
    for (const auto &[name, fr] : r.functions) {
      long fn_visits = 0;
      for (const auto &[block, n] : fr.visits)
        fn_visits += n;
      iters += fr.iterations;
      visits += fn_visits;
      std::cerr << "stats: " << name << ": iterations=" << fr.iterations
                << " block_visits=" << fn_visits << "\n";
    }
    std::cerr << "stats: total iterations=" << iters << " block_visits="
              << visits << " diagnostics=" << r.diagnostics.size()
              << " time_ms=" << elapsed << "\n";
  }
  if (a.strict && !r.diagnostics.empty())
    return kExitDiagnostics;
  return 0;
}

struct CheckArgs {
  std::string file;
  std::string entry = "main";
  pva::SoundnessOptions opts;
};

int run_check(const CheckArgs &a) {
  pva::ir::Program p = load_program(a.file, true);
  pva::SoundnessReport rep = pva::soundness_check(p, a.entry, a.opts);
  std::cout << "trials: " << rep.trials << "\n"
            << "executed: " << rep.executed << "\n"
            << "trapped: " << rep.trapped << "\n"
            << "points checked: " << rep.points_checked << "\n"
            << "memberships: " << rep.memberships << "\n"
            << "violations: " << rep.total_violations << "\n";
  for (const pva::SoundnessViolation &v : rep.violations)
    std::cout << "violation (trial " << v.trial << ") " << v.function << "."
              << v.block << "[" << v.stmt_index << "]: " << v.subject << " = "
              << v.concrete << " not covered by " << v.abstract << "\n";
  if (!rep.ok())
    return kExitUnsound;
  std::cout << "ok\n";
  return 0;
}

int run_dump_cfg(const std::string &file, const std::string &only) {
  pva::ir::Program p = load_program(file, true);
  bool found = only.empty();
  for (const pva::ir::Function &f : p.functions) {
    if (!only.empty() && f.name != only)
      continue;
    found = true;
    pva::ir::Cfg cfg = pva::ir::build_cfg(f);
    std::cout << "func " << f.name << " (entry " << cfg.entry << ")\n";
    for (const std::string &n : cfg.nodes) {
      std::cout << "  " << n << " ->";
      for (const std::string &s : cfg.succs.at(n))
        std::cout << " " << s;
      std::cout << "\n";
    }
    std::cout << "  exits:";
    for (const std::string &e : cfg.exits)
      std::cout << " " << e;
    std::cout << "\n";
  }
  if (!found) {
    std::cerr << "error: no function named '" << only << "'\n";
    return kExitError;
  }
  return 0;
}

int run_fmt(const std::string &file) {
  // Formatting only needs a parse; semantic validity is analyze's concern.
  pva::ir::Program p = load_program(file, false);
  std::cout << pva::ir::pretty_print(p);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"possible value analysis for a toy SSA IR"};
  app.require_subcommand(1);

  std::map<std::string, pva::AnalysisMode> mode_names{
      {"intra", pva::AnalysisMode::Intra}, {"inter", pva::AnalysisMode::Inter}};
  std::map<std::string, pva::PointerMode> pointer_names{
      {"flow-sensitive", pva::PointerMode::FlowSensitive},
      {"pre", pva::PointerMode::Pre}};
  std::map<std::string, pva::OutputFormat> format_names{
      {"text", pva::OutputFormat::Text}, {"json", pva::OutputFormat::Json}};

  AnalyzeArgs an;
  CLI::App *analyze = app.add_subcommand("analyze", "run the fixpoint");
  analyze->add_option("file", an.file, "input program")->required();
  analyze->add_option("--mode", an.opts.mode, "analysis mode")
      ->transform(CLI::CheckedTransformer(mode_names))
      ->default_str("intra");
  analyze->add_option("--entry", an.opts.entry,
                      "entry function (inter mode)");
  analyze->add_option("--widen-depth", an.opts.widen_depth,
                      "depth budget k for widening")
      ->check(CLI::NonNegativeNumber);
  analyze->add_option("--pointer-mode", an.opts.pointer_mode,
                      "points-to tracking")
      ->transform(CLI::CheckedTransformer(pointer_names))
      ->default_str("flow-sensitive");
  analyze->add_option("--format", an.format, "output format")
      ->transform(CLI::CheckedTransformer(format_names))
      ->default_str("text");
  analyze->add_option("--max-iterations", an.opts.max_iterations,
                      "iteration budget (0 = automatic)");
  analyze->add_option("--worklist-seed", an.opts.worklist_seed,
                      "randomize worklist order (0 = FIFO)");
  analyze->add_flag("--stats", an.stats, "print statistics to stderr");
  analyze->add_flag("--warnings", an.warnings,
                    "print diagnostics to stderr as warnings");
  analyze->add_flag("--strict", an.strict,
                    "exit 1 when any diagnostic is emitted");

  CheckArgs ck;
  CLI::App *check =
      app.add_subcommand("check", "fuzz against the concrete interpreter");
  check->add_option("file", ck.file, "input program")->required();
  check->add_option("--entry", ck.entry, "function to execute");
  check->add_option("--trials", ck.opts.trials, "number of random runs");
  check->add_option("--seed", ck.opts.seed, "random seed");
  check->add_option("--mode", ck.opts.mode, "analysis mode")
      ->transform(CLI::CheckedTransformer(mode_names))
      ->default_str("intra");
  check->add_option("--widen-depth", ck.opts.widen_depth,
                    "depth budget k for widening")
      ->check(CLI::NonNegativeNumber);
  check->add_option("--pointer-mode", ck.opts.pointer_mode,
                    "points-to tracking")
      ->transform(CLI::CheckedTransformer(pointer_names))
      ->default_str("flow-sensitive");
  check->add_option("--fuel", ck.opts.fuel, "step budget per run");

  std::string cfg_file;
  std::string cfg_fn;
  CLI::App *dump = app.add_subcommand("dump-cfg", "print control-flow graphs");
  dump->add_option("file", cfg_file, "input program")->required();
  dump->add_option("--function", cfg_fn, "restrict to one function");

  std::string fmt_file;
  CLI::App *fmt = app.add_subcommand("fmt", "reprint in canonical form");
  fmt->add_option("file", fmt_file, "input program")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (analyze->parsed())
      return run_analyze(an);
    if (check->parsed())
      return run_check(ck);
    if (dump->parsed())
      return run_dump_cfg(cfg_file, cfg_fn);
    if (fmt->parsed())
      return run_fmt(fmt_file);
  } catch (const pva::ir::ParseError &e) {
    std::cerr << "parse error: line " << e.loc.line << " col " << e.loc.col
              << ": " << e.message << "\n";
    return kExitError;
  } catch (const pva::ir::ValidationError &e) {
    std::cerr << "invalid program: " << e.function
              << (e.block.empty() ? "" : "." + e.block) << " line "
              << e.loc.line << ": " << e.kind << ": " << e.message << "\n";
    return kExitError;
  } catch (const pva::IterationBudgetExceeded &e) {
    std::cerr << "error: iteration budget " << e.budget << " exceeded in '"
              << e.function << "'\n";
    return kExitError;
  } catch (const pva::EntryNotFound &e) {
    std::cerr << "error: entry function '" << e.name << "' not found\n";
    return kExitError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
