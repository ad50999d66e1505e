//===- oracle.hpp - Concrete interpreter and soundness oracle -------------===//
//
// The oracle runs programs concretely and checks every reached program point
// against the fixpoint abstraction: integer variables must be members of the
// concretization of their sigma entry, integer heap cells members of the
// memory entry, and pointers members of the points-to sets. Executions that
// trap (division by zero, bad dereference, uninitialized read, fuel
// exhaustion) are skipped: the soundness statement quantifies over defined
// executions only.
//
// Phis execute in statement order, matching the transfer function's
// sequential fold, so abstract and concrete semantics agree by construction.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pva/interproc.hpp"

namespace pva {

// Wrapping two's-complement arithmetic shared by the interpreter and the
// concretization; nullopt marks a trap (division by zero or overflow).
std::optional<std::int64_t> eval_binop_concrete(BinOpKind op, std::int64_t a,
                                                std::int64_t b);
std::int64_t eval_unop_concrete(UnOpKind op, std::int64_t a);

struct ConcreteValue {
  enum class Kind : std::uint8_t { Int, Ptr };

  Kind kind = Kind::Int;
  std::int64_t i = 0;
  MemObject obj;

  static ConcreteValue integer(std::int64_t v) {
    ConcreteValue c;
    c.kind = Kind::Int;
    c.i = v;
    return c;
  }
  static ConcreteValue pointer(MemObject o) {
    ConcreteValue c;
    c.kind = Kind::Ptr;
    c.obj = std::move(o);
    return c;
  }

  bool is_int() const { return kind == Kind::Int; }
  bool is_ptr() const { return kind == Kind::Ptr; }

  friend bool operator==(const ConcreteValue &, const ConcreteValue &) = default;
};

std::string to_string(const ConcreteValue &v);

using ConcreteEnv = std::map<std::string, ConcreteValue>;
using ConcreteHeap = std::map<MemObject, ConcreteValue>;

// External functions as deterministic integer functions; nullopt = trap.
struct StubTable {
  std::map<std::string,
           std::function<std::optional<std::int64_t>(std::span<const std::int64_t>)>>
      fns;
};

struct TracePoint {
  int frame = 0;
  std::string function;
  std::string block;
  int stmt_index = 0;
  ConcreteEnv env;   // before the statement executes
  ConcreteHeap heap; // before the statement executes
};

struct FrameInfo {
  std::string function;
  std::vector<ConcreteValue> args;
  // Heap as seen on entry, after this frame's own local cells are cleared
  // (each activation gets fresh, uninitialized locals).
  ConcreteHeap heap_at_entry;
  int parent = -1; // calling frame, -1 for the root
};

struct Trap {
  std::string reason;
  std::string function;
  std::string block;
  int stmt_index = 0;
};

struct RunResult {
  bool trapped = false;
  Trap trap;
  ConcreteValue ret;
  std::vector<TracePoint> trace;
  std::vector<FrameInfo> frames;
  long steps = 0;
};

// Executes `fname` on the given arguments under the given initial heap
// (global cells preset by the caller). Defined callees run natively and
// share the heap; externals use the stub table. Trace recording can be
// switched off when only the return value matters (concretization runs).
RunResult run_concrete(const ir::Program &p, const std::string &fname,
                       std::vector<ConcreteValue> args, ConcreteHeap heap,
                       const StubTable &stubs, long fuel,
                       bool record_trace = true);

// Everything a concretization needs: the execution's inputs plus enough
// context to interpret call symbols (defined callees run concretely, unknown
// names fall back to the stub table or, absent that, to "could be anything").
struct Binding {
  std::vector<ConcreteValue> args;
  std::map<MemObject, std::int64_t> globals;      // initial global values
  std::map<MemObject, std::int64_t> initial_heap; // heap at function entry
  const StubTable *stubs = nullptr;
  const ir::Program *program = nullptr;
  long fuel = 4000;
};

// Membership of an integer in the concretization of an element, decided by
// enumeration. A top subterm (or an enumeration blowing past the size cap)
// makes the set unenumerable and membership conservatively true.
bool concretize_member(std::int64_t value, const LatticeElem &elem,
                       const Binding &binding);

struct SoundnessViolation {
  long trial = 0;
  std::string function;
  std::string block;
  int stmt_index = 0;
  std::string subject;  // variable name or cell
  std::string concrete; // rendered concrete value
  std::string abstract; // rendered element or points-to set
};

struct SoundnessReport {
  long trials = 0;
  long executed = 0; // non-trapping runs
  long trapped = 0;
  long points_checked = 0;
  long memberships = 0;
  long total_violations = 0;
  std::vector<SoundnessViolation> violations; // capped recording

  bool ok() const { return total_violations == 0; }
};

struct SoundnessOptions {
  long trials = 100;
  std::uint64_t seed = 1;
  int widen_depth = 2;
  AnalysisMode mode = AnalysisMode::Intra;
  PointerMode pointer_mode = PointerMode::FlowSensitive;
  long fuel = 4000;
  std::int64_t value_range = 8; // inputs drawn from [-range, range]
  std::size_t max_recorded_violations = 50;
  bool join_as_meet = false; // mutation knob for the oracle's self-test
};

// Fuzzes `fname` (the entry in inter mode): analyzes once, then samples
// arguments, global initial values, and external stubs per trial, and checks
// every trace point of every frame against the per-point abstract states.
SoundnessReport soundness_check(const ir::Program &p, const std::string &fname,
                                const SoundnessOptions &opts);

} // namespace pva
