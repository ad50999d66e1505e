//===- transfer.hpp - Abstract transfer over statements and blocks --------===//
//
// Statement rules:
//
//   v = e2 op e3   sigma[v -> binop(op, eval e2, eval e3)]
//   v = op e2      sigma[v -> unop(op, eval e2)]
//   v = phi(...)   sigma[v -> phi(eval of each incoming variable)], read
//                  from the current in-state (path-insensitive)
//   v = call f(..) intraprocedural: sigma[v -> f(eval args)], memory and
//                  points-to untouched; interprocedural: delegated to the
//                  call evaluator, falling back to the symbol on externals
//                  and call-graph cycles
//   return v       records eval(v); state unchanged
//   v1 = v2        sigma[v1 -> eval v2] plus pointer transfer
//   v1 = &v2       pointer transfer only; sigma(v1) stays untouched, so a
//                  read of v1 as data is bottom (addresses live in pts)
//   v1 = *v2       sigma[v1 -> join of mem over pts(v2)]; empty pts(v2)
//                  yields bottom plus a diagnostic
//   *v1 = v2       single pointee: strong update; several: weak (join into
//                  each cell); none: no-op plus a diagnostic
//   br / goto      identity (path-insensitive)
//
//===----------------------------------------------------------------------===//

#pragma once

#include <optional>
#include <vector>

#include "pva/domains.hpp"
#include "pva/ir.hpp"
#include "pva/pointer.hpp"

namespace pva {

enum class PointerMode { FlowSensitive, Pre };

struct Diagnostic {
  std::string function;
  std::string block;
  int stmt_index = 0;
  std::string code; // "load-empty-points-to" | "store-empty-points-to"
  std::string message;
};

// Result of evaluating a defined call interprocedurally: the return element
// plus the callee's exit memory and points-to (already merged with the
// caller's variable entries).
struct CallOutcome {
  LatticeElem ret;
  std::map<MemObject, LatticeElem> mem;
  PointsTo pts;
};

class CallEvaluator {
public:
  virtual ~CallEvaluator() = default;
  // nullopt requests the intraprocedural fallback (external callee or a
  // call-graph cycle at this point).
  virtual std::optional<CallOutcome>
  evaluate_call(const AbstractState &state, const ir::Call &call,
                const ir::Function &caller) = 0;
};

struct StmtLoc {
  std::string block;
  int index = 0;
};

struct TransferContext {
  const ir::Program *program = nullptr;
  const ir::Function *function = nullptr;
  PointerMode pointer_mode = PointerMode::FlowSensitive;
  const PointsTo *frozen_pts = nullptr; // set in Pre mode
  CallEvaluator *calls = nullptr;       // set in interprocedural mode

  // Optional sinks; both may be null during fixpoint iteration and are
  // filled by a final reporting pass.
  std::vector<Diagnostic> *diags = nullptr;
  std::vector<LatticeElem> *returns = nullptr;
};

// Points-to set consulted by loads and stores: the state's own set in
// flow-sensitive mode, the frozen whole-program map in pre mode.
const PtsSet &effective_pts(const AbstractState &s, const TransferContext &ctx,
                            const PtsKey &key);

AbstractState transfer_stmt(const AbstractState &in, const ir::Statement &stmt,
                            const TransferContext &ctx, const StmtLoc &loc);

AbstractState transfer_block(const AbstractState &in, const ir::Block &block,
                             const TransferContext &ctx);

// Pre-state of every statement of the block: element i is the state just
// before statement i runs when folding from `in`. One past the end is the
// block's out-state.
std::vector<AbstractState> block_prestates(const AbstractState &in,
                                           const ir::Block &block,
                                           const TransferContext &ctx);

} // namespace pva
