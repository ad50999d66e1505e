//===- pointer.hpp - Andersen-style points-to transfer and pre-analysis ---===//
//
// Transfer rules for the four pointer statement forms:
//
//   a = &b   pts(a) := { cell of b }
//   a = b    pts(a) := pts(b)
//   a = *b   pts(a) := union of pts(o) for o in pts(b)
//   *a = b   |pts(a)| = 1: pts(o) := pts(b) (strong update, the only pointee
//            is definitely overwritten); |pts(a)| > 1: pts(o) += pts(b) for
//            every pointee (weak); empty pts(a): no-op (the value transfer
//            reports the diagnostic).
//
// The flow-sensitive variant runs inside the abstract transfer. The optional
// pre-analysis solves the same constraints flow-insensitively (all updates
// weak, statement order ignored, calls bound parameter/return inclusively)
// to a least fixpoint, yielding one whole-program map that over-approximates
// every flow-sensitive set.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "pva/domains.hpp"
#include "pva/ir.hpp"

namespace pva {

struct PaContext {
  const ir::Program *program = nullptr;
  const ir::Function *function = nullptr;
};

// Cell named by an address-of target: the global's cell, or a
// function-qualified local cell.
MemObject addr_target_object(const std::string &name, const PaContext &ctx);

// One flow-sensitive step. Statements other than the four pointer forms are
// the identity.
PointsTo pa_transfer(const PointsTo &pts, const ir::Statement &stmt,
                     const PaContext &ctx);

// Flow-insensitive least fixpoint over raw (function, statement) constraints
// with all updates weak. Exposed for direct constraint-level tests; callers
// normally use pa_preanalyze.
PointsTo pa_solve_constraints(
    const std::vector<std::pair<const ir::Function *, const ir::Statement *>>
        &stmts,
    const ir::Program &p, PointsTo seed);

// Whole-program pre-analysis: seeds every global name with its own cell,
// collects all statements of all functions, and adds inclusion constraints
// for direct calls (parameter gains argument sets, call result gains the
// callee's return-operand sets).
PointsTo pa_preanalyze(const ir::Program &p);

} // namespace pva
