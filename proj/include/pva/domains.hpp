//===- domains.hpp - Abstract state: values, memory, points-to ------------===//
//
// A state has three components:
//   sigma: variable -> element     (absent entries mean bottom)
//   mem:   cell -> element         (absent cells read as their initial
//                                   symbol: global(o) for globals, bottom
//                                   for address-taken locals)
//   pts:   (variable|cell) -> set of cells   (absent means empty)
//
// Join, leq, and widening act componentwise and treat absent map entries as
// bottom / empty, which matches the paper's convention and makes the empty
// state the bottom of the state lattice. The analysis keeps the two memory
// conventions consistent by seeding every global cell explicitly in the
// initial state, so a missing global entry only ever occurs in the solver's
// not-yet-reached states, where bottom is the right reading.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <map>
#include <set>
#include <string>

#include "pva/ir.hpp"
#include "pva/lattice.hpp"

namespace pva {

// Points-to keys range over variables and memory cells: a cell can itself
// hold an address (a pointer stored in memory).
struct PtsKey {
  enum class Kind : std::uint8_t { Var, Obj };

  Kind kind = Kind::Var;
  std::string var;
  MemObject obj;

  static PtsKey for_var(std::string name) {
    PtsKey k;
    k.kind = Kind::Var;
    k.var = std::move(name);
    return k;
  }
  static PtsKey for_obj(MemObject o) {
    PtsKey k;
    k.kind = Kind::Obj;
    k.obj = std::move(o);
    return k;
  }

  friend auto operator<=>(const PtsKey &, const PtsKey &) = default;
};

std::string to_string(const PtsKey &k);

using PtsSet = std::set<MemObject>;
using PointsTo = std::map<PtsKey, PtsSet>;

struct AbstractState {
  std::map<std::string, LatticeElem> sigma;
  std::map<MemObject, LatticeElem> mem;
  PointsTo pts;

  friend bool operator==(const AbstractState &, const AbstractState &) = default;
};

// The cell of a global.
MemObject global_object(std::string name);

// The cell of an address-taken local of function `fn` ("fn::name").
MemObject local_object(const std::string &fn, const std::string &name);

// Value of a variable under sigma; absent means bottom. Globals and
// address-holding variables have no sigma entry, so reading them as data
// yields bottom (their address semantics live in pts).
LatticeElem sigma_read(const AbstractState &s, const std::string &name);

// Integer literals become const(i); variables read sigma.
LatticeElem eval_operand(const AbstractState &s, const ir::Operand &o);

// Memory read with the initial-symbol default for never-written cells.
LatticeElem mem_read(const AbstractState &s, const MemObject &o);

// Points-to read; absent keys are empty sets.
const PtsSet &pts_read(const AbstractState &s, const PtsKey &k);

// Componentwise join: sigma and mem pointwise (absent = bottom), pts unioned.
AbstractState join_state(const AbstractState &a, const AbstractState &b);

// Componentwise order check.
bool leq_state(const AbstractState &a, const AbstractState &b);

// Entry state of a function: parameters map to arg(i), every global's cell
// maps to global(o) explicitly, and every global name points to its own cell.
// Address-taken locals start at bottom (absent).
AbstractState initial_state(const ir::Function &f, const ir::Program &p);

// Canonical form used for change detection: drops bottom sigma entries,
// bottom-valued local cells, and empty pts sets. Global-cell entries are
// always kept so the explicit-seeding invariant survives.
void normalize_state(AbstractState &s);

AbstractState normalized(AbstractState s);

} // namespace pva
