//===- interproc.hpp - Call graph and interprocedural evaluation ----------===//
//
// Interprocedural calls evaluate the callee under the caller's memory:
// the callee starts from a fresh sigma binding parameters to the evaluated
// arguments (parameters also inherit the arguments' points-to sets), runs to
// its own fixpoint, and the caller adopts the returned element plus the
// callee's exit memory and points-to.
//
// Summaries are context-insensitive: every call site joins its entry context
// into the callee's accumulated context, callees are re-solved when that
// context grows, and results from different sites merge. External callees
// and calls that close a cycle on the active evaluation stack fall back to
// the intraprocedural uninterpreted symbol.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <memory>
#include <optional>
#include <set>

#include "pva/solver.hpp"

namespace pva {

struct CallSite {
  std::string caller;
  std::string callee;
  std::string block;
  int stmt_index = 0;
};

struct CallGraph {
  std::vector<std::string> nodes; // defined functions, program order
  std::vector<CallSite> edges;
  std::set<std::string> externals; // called but not defined
  // Functions on some call-graph cycle (including self-recursion).
  std::set<std::string> cyclic;

  bool in_cycle(const std::string &fn) const { return cyclic.count(fn) > 0; }
};

CallGraph build_call_graph(const ir::Program &p);

enum class AnalysisMode { Intra, Inter };

struct AnalysisOptions {
  AnalysisMode mode = AnalysisMode::Intra;
  int widen_depth = 2;
  std::string entry = "main";
  PointerMode pointer_mode = PointerMode::FlowSensitive;
  long max_iterations = 0;
  unsigned worklist_seed = 0;
  bool join_as_meet = false;
};

struct AnalysisResult {
  std::map<std::string, FunctionResult> functions;
  std::vector<Diagnostic> diagnostics; // function order, block order, index
  PointsTo points_to_pre;              // filled in pre pointer mode
  bool used_pre = false;
  // Inter mode keeps the converged engine so per-statement states can be
  // recomputed later with identical call evaluation (summaries are at a
  // fixpoint; reuse does not perturb them). Null in intra mode. Valid only
  // while the analyzed program is alive.
  std::shared_ptr<CallEvaluator> call_evaluator;
};

struct EntryNotFound {
  std::string name;
};

class InterEngine : public CallEvaluator {
public:
  InterEngine(const ir::Program &p, const AnalysisOptions &opts);

  std::optional<CallOutcome> evaluate_call(const AbstractState &state,
                                           const ir::Call &call,
                                           const ir::Function &caller) override;

  // Full interprocedural call step as a state transformer; the symbol
  // fallback applies when evaluate_call declines.
  AbstractState transfer_call_inter(const AbstractState &state,
                                    const ir::Call &call,
                                    const ir::Function &caller);

  // Solves `root` from its initial state with this engine handling calls.
  FunctionResult solve_root(const ir::Function &root);

  bool summaries_changed() const { return changed_; }
  void reset_change_flag() { changed_ = false; }

  struct Summary {
    AbstractState entry;   // join over call-site contexts
    AbstractState exit;    // join over exits observed so far
    LatticeElem ret;       // join over return elements
    bool solved = false;
    FunctionResult last_result;
    long total_iterations = 0;
  };

  const std::map<std::string, Summary> &summaries() const {
    return summaries_;
  }

private:
  const ir::Program &program_;
  AnalysisOptions opts_;
  PointsTo frozen_pts_;
  std::map<std::string, ir::Cfg> cfgs_;
  std::map<std::string, Summary> summaries_;
  std::vector<std::string> stack_;
  bool changed_ = false;

  friend AnalysisResult analyze_program(const ir::Program &,
                                        const AnalysisOptions &);
};

// Whole-program analysis. Intra mode solves every function independently.
// Inter mode solves the entry function (throws EntryNotFound when missing)
// with call evaluation, iterating whole-program passes until no summary
// grows; functions unreachable from the entry are then solved standalone
// with the same engine so results cover the whole program.
AnalysisResult analyze_program(const ir::Program &p,
                               const AnalysisOptions &opts);

} // namespace pva
