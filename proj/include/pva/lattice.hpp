//===- lattice.hpp - Recursive symbolic value lattice ---------------------===//
//
// Lattice elements are immutable trees: the element layer (top, bottom, or a
// symbolic expression) and the expression layer (primitives, binary/unary
// operators, uninterpreted calls, phi) are mutually recursive, so operator
// arguments are again lattice elements and may themselves be top or bottom.
//
// No algebraic simplification is performed anywhere: (+ const(1) const(2))
// stays as is. Precision control happens exclusively through depth
// truncation (widening).
//
//===----------------------------------------------------------------------===//

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pva/ops.hpp"

namespace pva {

// An abstract memory cell. Globals use their bare name as base; address-taken
// locals use a function-qualified base ("f::x") so distinct functions yield
// distinct cells. The language has no aggregates, so offset is always 0, but
// it is kept in the identity and in the rendered form ("g+0").
struct MemObject {
  std::string base;
  std::int64_t offset = 0;

  friend auto operator<=>(const MemObject &, const MemObject &) = default;
};

// True when the cell is a global's cell (unqualified base).
bool is_global_cell(const MemObject &o);

// "g+0", "f::x+0"
std::string to_string(const MemObject &o);

struct Primitive {
  enum class Kind : std::uint8_t { Const, Arg, Mem, Global };

  Kind kind = Kind::Const;
  std::int64_t value = 0; // Const
  int index = 0;          // Arg
  MemObject object;       // Mem / Global

  friend bool operator==(const Primitive &, const Primitive &) = default;
};

Primitive prim_const(std::int64_t v);
Primitive prim_arg(int index);
Primitive prim_mem(MemObject o);
Primitive prim_global(MemObject o);

// Value-semantic handle to an immutable element tree. Copies share structure.
class LatticeElem {
public:
  enum class Kind : std::uint8_t { Top, Bot, Prim, FnCall, BinOp, UnOp, Phi };

  LatticeElem() : kind_(Kind::Bot) {}

  static LatticeElem top();
  static LatticeElem bottom();
  static LatticeElem primitive(Primitive p);
  static LatticeElem constant(std::int64_t v);
  static LatticeElem argument(int index);
  static LatticeElem mem_init(MemObject o);
  static LatticeElem global_init(MemObject o);
  static LatticeElem binop(BinOpKind op, LatticeElem l, LatticeElem r);
  static LatticeElem unop(UnOpKind op, LatticeElem v);
  // Phi takes at least one argument. Calls may have zero arguments: the IR
  // grammar admits `x = call f()`, whose symbol is `f()`.
  static LatticeElem phi(std::vector<LatticeElem> args);
  static LatticeElem fn_call(std::string fn, std::vector<LatticeElem> args);

  Kind kind() const { return kind_; }
  bool is_top() const { return kind_ == Kind::Top; }
  bool is_bottom() const { return kind_ == Kind::Bot; }

  const Primitive &prim() const;
  BinOpKind binop_kind() const;
  UnOpKind unop_kind() const;
  const std::string &fn_name() const;
  std::span<const LatticeElem> children() const;

  // Depth of the tree: 0 for top, bottom, and primitives; 1 + max child depth
  // for operators, calls, and phi. Cached at construction.
  int depth() const;

  // Structural equality (fast path on shared nodes).
  friend bool operator==(const LatticeElem &a, const LatticeElem &b);

  // Node identity, usable as a cheap same-object test.
  const void *identity() const { return node_.get(); }

private:
  struct Node;
  explicit LatticeElem(Kind k, std::shared_ptr<const Node> n)
      : kind_(k), node_(std::move(n)) {}

  Kind kind_;
  std::shared_ptr<const Node> node_;
};

// Partial order: bottom below everything, top above everything, primitives
// ordered by equality only, matching constructors (same operator, arity, and
// call name) compared field-wise, everything else incomparable.
bool leq(const LatticeElem &a, const LatticeElem &b);

// Least upper bound: bottom is the identity, equal primitives keep the
// primitive, matching constructors join field-wise, any mismatch goes to top.
LatticeElem join(const LatticeElem &a, const LatticeElem &b);

// Greatest lower bound, the dual of join: top is the identity, mismatches go
// to bottom.
LatticeElem meet(const LatticeElem &a, const LatticeElem &b);

int depth(const LatticeElem &l);

// Replaces every subterm that would exceed the depth budget k with top
// (never bottom), i.e. the result is within depth k and above the input.
LatticeElem truncate(const LatticeElem &l, int k);

// widen(a, b, k) = truncate(join(a, b), k). Restricting results to the
// finite depth-k sublattice makes ascending chains stabilize.
LatticeElem widen(const LatticeElem &a, const LatticeElem &b, int k);

// Total order for use in ordered containers; 0 iff structurally equal.
int compare(const LatticeElem &a, const LatticeElem &b);

// Canonical rendering: T, B, const(3), arg(0), mem(g+0), global(g+0),
// (+ l1 l2), (neg l), phi(l1,l2), f(l1,l2).
std::string to_string(const LatticeElem &l);

// Parses the canonical rendering back. Inverse of to_string on valid input;
// throws std::invalid_argument otherwise.
LatticeElem parse_elem(std::string_view text);

} // namespace pva
