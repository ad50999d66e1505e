//===- solver.hpp - Worklist fixpoint with depth-bounded widening ---------===//
//
// Round-robin worklist over the CFG:
//
//   out[B] := bottom state for every block
//   W := all blocks (FIFO, deduplicated)
//   while W nonempty:
//     B := pop
//     in[B] := join of out[P] over predecessors P
//              (the entry block additionally joins the initial state)
//     out'  := transfer(in[B], B)
//     out'  := in[B] widen out'          (truncate(join, k) pointwise)
//     if out' != out[B] (after normalization): out[B] := out'; push succs
//
// Widening into the finite depth-k sublattice at every block on every visit
// guarantees termination; the iteration budget is a defect guard only.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <map>
#include <string>
#include <vector>

#include "pva/domains.hpp"
#include "pva/transfer.hpp"

namespace pva {

struct SolverOptions {
  int widen_depth = 2;
  // 0 selects the default budget 10 * |blocks| * (widen_depth + 2).
  long max_iterations = 0;
  PointerMode pointer_mode = PointerMode::FlowSensitive;
  const PointsTo *frozen_pts = nullptr;
  CallEvaluator *calls = nullptr;
  // Entry state override; defaults to initial_state(f, p). Used by the
  // interprocedural engine to start a callee from a call-site context.
  const AbstractState *entry_state = nullptr;
  // 0 keeps the deterministic FIFO order; any other value shuffles each pop
  // with a seeded RNG. Fixpoints must not depend on the order; tests rely on
  // this knob to demonstrate it.
  unsigned worklist_seed = 0;
  // Deliberately wrong merge (meet instead of join) used by the soundness
  // oracle's self-test; never set outside tests.
  bool join_as_meet = false;
};

struct FunctionResult {
  std::map<std::string, AbstractState> in_states;
  std::map<std::string, AbstractState> out_states;
  LatticeElem return_value; // join of eval(v) over all return statements
  // State at the return points joined; what a caller observes after the call.
  AbstractState exit_state;
  std::vector<Diagnostic> diagnostics;
  long iterations = 0;
  std::map<std::string, long> visits;
};

struct IterationBudgetExceeded {
  std::string function;
  long budget = 0;
};

// Pointwise widening: sigma and mem entries widen(a, b, k) over the union of
// keys, points-to sets unioned.
AbstractState widen_state(const AbstractState &a, const AbstractState &b,
                          int k);

// Runs the worklist to a fixpoint, then derives diagnostics, per-block
// states, the return element, and the exit state in one reporting pass.
FunctionResult solve_function(const ir::Function &f, const ir::Program &p,
                              const ir::Cfg &cfg, const SolverOptions &opts);

} // namespace pva
